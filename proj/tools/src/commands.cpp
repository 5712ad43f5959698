#include "flagcount_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "flagcount/enumerate.hpp"
#include "flagcount/predictions.hpp"
#include "flagcount/shape.hpp"
#include "flagcount/verify.hpp"
#include "flagcount_cli/cache.hpp"
#include "flagcount_cli/json_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace flagcount::cli {
namespace {

// Writes through "<path>.partial" and renames on success.
void write_file(std::string const& path, std::function<void(std::ostream&)> const& body) {
  std::string const partial = path + ".partial";
  {
    std::ofstream f(partial, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + partial);
    body(f);
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + partial);
  }
  fs::rename(partial, path);
}

double single_X(RunConfig const& cfg, char const* command) {
  if (cfg.Xs.size() != 1) throw ConfigError(std::string(command) + " needs exactly one X");
  return cfg.Xs.front();
}

bool use_split(RunConfig const& cfg) {
  auto const& p = cfg.partition;
  return cfg.duality_split && p.size() == 3 && p[0] == p[2];
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (ConfigError const& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (std::exception const& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace

int cmd_enumerate(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    double const X = single_X(cfg, "enumerate");
    Rational const x = exact_rational(X);
    EnumerationJob const job{cfg.n, cfg.partition, cfg.height, x * x};
    JobKey const key{cfg.n, cfg.partition, cfg.height, job.bound_sq};
    Cache cache(cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir);

    std::optional<CacheEntry> entry = cache.lookup(key);
    if (entry) {
      err << "cache hit " << entry->fingerprint << "\n";
    } else {
      std::size_t const levels = cfg.partition.size() - 1;
      entry = cache.store(key, [&](Cache::LineWriter const& write) {
        Cache::Produced produced;
        produced.per_level.assign(levels, 0);
        std::optional<FlagChain> prev;
        enumerate_flags(
            job,
            [&](FlagChain const& f) {
              // Sorted stream: a prefix is new from the first level that differs.
              std::size_t j = 0;
              if (prev) {
                while (j < levels && prev->lattices()[j] == f.lattices()[j]) ++j;
              }
              for (std::size_t k = j; k < levels; ++k) ++produced.per_level[k];
              ++produced.count;
              write(io::flag_to_json(f).dump());
              prev = f;
            },
            EnumerateOptions{cfg.workers});
        return produced;
      });
    }

    json summary;
    summary["count"] = entry->count;
    summary["bound"] = X;
    summary["bound_sq"] = to_fraction_string(job.bound_sq);
    summary["n"] = cfg.n;
    summary["partition"] = cfg.partition;
    summary["height"] = to_string(cfg.height);
    summary["per_level"] = entry->per_level;
    summary["fingerprint"] = entry->fingerprint;

    if (!cfg.out.empty()) {
      write_file(cfg.out, [&](std::ostream& o) {
        std::ifstream in(entry->jsonl_path);
        std::string line;
        while (std::getline(in, line)) {
          if (cfg.emit_shapes || cfg.emit_directions) {
            json record = json::parse(line);
            FlagChain const f = io::flag_from_json(record);
            if (cfg.emit_shapes) io::add_shapes(record, f);
            if (cfg.emit_directions) io::add_directions(record, f);
            o << record.dump() << '\n';
          } else {
            o << line << '\n';
          }
        }
      });
      write_file(cfg.out + ".summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
    }
    out << summary.dump() << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_predict(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    Partition const p(cfg.partition);
    Prediction const pr = predict(p, cfg.height);
    json j;
    j["partition"] = cfg.partition;
    j["n"] = cfg.n;
    j["height"] = to_string(cfg.height);
    j["exponent"] = pr.exponent;
    j["coefficient"] = pr.coefficient.convert_to<double>();
    j["coefficient_digits"] = pr.coefficient.str(30);
    json logs = json::array();
    for (auto const& c : pr.log_poly) logs.push_back(c.convert_to<double>());
    j["log_poly_coeffs"] = std::move(logs);
    if (cfg.Xs.size() == 1) {
      j["X"] = cfg.Xs.front();
      j["main_term"] = main_term(p, cfg.height, Real(cfg.Xs.front())).convert_to<double>();
    } else if (!cfg.Xs.empty()) {
      json xs = json::array();
      json terms = json::array();
      for (double X : cfg.Xs) {
        xs.push_back(X);
        terms.push_back(main_term(p, cfg.height, Real(X)).convert_to<double>());
      }
      j["X"] = std::move(xs);
      j["main_term"] = std::move(terms);
    }
    out << j.dump() << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_verify(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    if (cfg.Xs.empty()) throw ConfigError("verify needs X or Xs");
    Partition const p(cfg.partition);
    int const target = predict(p, cfg.height).exponent;
    auto const records =
        ratio_table(p, cfg.height, cfg.Xs, CountOptions{cfg.workers, use_split(cfg)});

    std::optional<ExponentFit> fit;
    bool positive = true;
    for (auto const& r : records) positive = positive && r.count > 0;
    if (records.size() >= 3 && positive) fit = fit_exponent(records);

    auto emit = [&](std::ostream& o) {
      o << "X,count,predicted,ratio,fitted_exponent,target_exponent\n";
      for (auto const& r : records) {
        o << fmt(r.X) << ',' << r.count << ',' << fmt(r.predicted) << ',' << fmt(r.ratio) << ','
          << (fit ? fmt(fit->slope) : "") << ',' << target << '\n';
      }
    };
    if (cfg.out.empty()) {
      emit(out);
    } else {
      write_file(cfg.out, emit);
    }

    // The ratio is judged at the largest X; the slope only under the sup
    // height, where there is no log factor to bend the fit.
    double const last_ratio = records.back().ratio;
    bool const ratio_ok = std::abs(last_ratio - 1) <= cfg.ratio_tolerance;
    bool exponent_ok = true;
    if (cfg.height == HeightKind::INF && fit) {
      exponent_ok = std::abs(fit->slope - target) <= cfg.exponent_tolerance;
    }
    err << "verify: ratio " << fmt(last_ratio) << (ratio_ok ? " ok" : " out of tolerance");
    if (fit) err << ", slope " << fmt(fit->slope) << (exponent_ok ? " ok" : " out of tolerance");
    err << "\n";
    return static_cast<int>(ratio_ok && exponent_ok ? kOk : kToleranceFailure);
  });
}

int cmd_equidist(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    double const X = single_X(cfg, "equidist");
    int const d1 = cfg.partition.front();
    if (cfg.partition.size() < 2) throw ConfigError("equidist needs at least two parts");
    std::string target = cfg.target;
    if (target.empty()) {
      if (d1 == 2) {
        target = "shape";
      } else if (d1 == 1 && (cfg.n == 2 || cfg.n == 3)) {
        target = "direction";
      } else {
        throw ConfigError("no equidistribution target for this partition");
      }
    }
    if (target == "shape" && d1 != 2) throw ConfigError("shape target needs d_1 = 2");
    if (target == "direction" && !(d1 == 1 && (cfg.n == 2 || cfg.n == 3))) {
      throw ConfigError("direction target needs d_1 = 1 and n in {2, 3}");
    }
    bool const shapes = target == "shape";
    int const k = cfg.cells > 0 ? cfg.cells : (shapes ? 10 : 8);

    std::optional<ModularCells> modular;
    std::optional<SphereCapCells> caps;
    if (shapes) {
      modular.emplace(k);
    } else {
      caps.emplace(cfg.n, k);
    }
    CellPartition const& cells = shapes ? modular->partition() : caps->partition();

    Rational const x = exact_rational(X);
    EnumerationJob const job{cfg.n, cfg.partition, cfg.height, x * x};
    std::vector<std::size_t> observations;
    enumerate_flags(
        job,
        [&](FlagChain const& f) {
          if (shapes) {
            observations.push_back(modular->classify(shape_vector(f).front().point));
          } else {
            auto const dirs = direction(f);
            observations.push_back(caps->classify(dirs.front().frame.front()));
          }
        },
        EnumerateOptions{cfg.workers});

    double const total = static_cast<double>(observations.size());
    for (auto const& c : cells.cells) {
      if (total * c.mass < 5) {
        throw ConfigError("cells too fine: expected count " + fmt(total * c.mass) + " in cell '" +
                          c.description + "' is below 5");
      }
    }
    ChiSquare const chi = chi_square_uniform(cells, observations);

    json summary;
    summary["statistic"] = chi.statistic;
    summary["threshold_99"] = chi.threshold_99;
    summary["pass"] = chi.pass();
    summary["dof"] = chi.dof;
    summary["count"] = observations.size();
    summary["target"] = target;
    summary["cells"] = k;

    auto emit = [&](std::ostream& o) {
      o << "cell_id,mass,observed,expected,contribution\n";
      for (std::size_t i = 0; i < cells.cells.size(); ++i) {
        double const e = chi.expected[i];
        double const d = static_cast<double>(chi.observed[i]) - e;
        o << i << ',' << fmt(cells.cells[i].mass) << ',' << chi.observed[i] << ',' << fmt(e) << ','
          << fmt(d * d / e) << '\n';
      }
    };
    if (cfg.out.empty()) {
      emit(out);
    } else {
      write_file(cfg.out, emit);
      write_file(cfg.out + ".summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
    }
    out << summary.dump() << "\n";
    return static_cast<int>(chi.pass() ? kOk : kToleranceFailure);
  });
}

int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Count and verify flags of primitive lattices in Z^n"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  // Everything is collected as text and routed through apply_setting so the
  // config file and the flags share one parser.
  std::vector<std::pair<std::string, std::string>> settings;
  std::string config_path;
  bool emit_shapes = false;
  bool emit_directions = false;
  bool no_split = false;

  auto add_common = [&](CLI::App* sub) {
    auto text = [&, sub](char const* flag, std::string key, char const* help) {
      sub->add_option_function<std::string>(
          flag, [&settings, key](std::string const& v) { settings.emplace_back(key, v); }, help);
    };
    text("--n", "n", "ambient dimension");
    text("--partition", "partition", "rank jumps, e.g. 1,1,1");
    text("--height", "height", "inf or ac");
    text("--X", "X", "height bound");
    text("--Xs", "Xs", "increasing list of height bounds");
    text("--out", "out", "output path");
    text("--cache", "cache", "cache directory");
    text("--workers", "workers", "worker threads");
    text("--cells", "cells", "number of cells (equidist)");
    text("--target", "target", "shape or direction (equidist)");
    text("--ratio-tolerance", "ratio_tolerance", "allowed |ratio - 1| (verify)");
    text("--exponent-tolerance", "exponent_tolerance", "allowed slope error (verify)");
    sub->add_flag("--emit-shapes", emit_shapes, "add block shapes to each record");
    sub->add_flag("--emit-directions", emit_directions, "add subspace frames to each record");
    sub->add_flag("--no-duality-split", no_split, "count (a,b,a) partitions without the duality shortcut");
    sub->add_option("--config", config_path, "key = value settings file; flags win");
  };
  auto* enumerate = app.add_subcommand("enumerate", "list flags below a height bound");
  auto* predict_cmd = app.add_subcommand("predict", "predicted main term");
  auto* verify = app.add_subcommand("verify", "compare counts with the main term");
  auto* equidist = app.add_subcommand("equidist", "chi-square test of shapes or directions");
  for (auto* sub : {enumerate, predict_cmd, verify, equidist}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kUsageError);
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      for (auto const& [key, value] : read_config_file(config_path)) apply_setting(cfg, key, value);
    }
    for (auto const& [key, value] : settings) apply_setting(cfg, key, value);
    if (emit_shapes) cfg.emit_shapes = true;
    if (emit_directions) cfg.emit_directions = true;
    if (no_split) cfg.duality_split = false;
  } catch (ConfigError const& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  if (enumerate->parsed()) {
    cfg.command = "enumerate";
    return cmd_enumerate(cfg, out, err);
  }
  if (predict_cmd->parsed()) {
    cfg.command = "predict";
    return cmd_predict(cfg, out, err);
  }
  if (verify->parsed()) {
    cfg.command = "verify";
    return cmd_verify(cfg, out, err);
  }
  cfg.command = "equidist";
  return cmd_equidist(cfg, out, err);
}

}  // namespace flagcount::cli

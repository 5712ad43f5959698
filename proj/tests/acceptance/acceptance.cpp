// Acceptance checks.  Prints one "criterion N: PASS|FAIL ..." line per
// criterion.  With arguments, runs only the listed criteria.  Exit status is
// nonzero when any selected criterion fails.
//
// Artifacts (tables, reports) go to $FLAGCOUNT_ARTIFACTS, default
// ./acceptance_artifacts.

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "flagcount/enumerate.hpp"
#include "flagcount/predictions.hpp"
#include "flagcount/shape.hpp"
#include "flagcount/verify.hpp"

using namespace flagcount;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path artifact_dir() {
  char const* env = std::getenv("FLAGCOUNT_ARTIFACTS");
  fs::path dir = env && *env ? fs::path(env) : fs::path("acceptance_artifacts");
  fs::create_directories(dir);
  return dir;
}

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

Rational square(double X) {
  Rational const x = exact_rational(X);
  return x * x;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  auto const start = Clock::now();
  std::vector<double> const xs{200};
  auto const rec = ratio_table(Partition({1, 1}), HeightKind::INF, xs).front();
  double const t = seconds_since(start);
  bool const pass = std::abs(rec.ratio - 1) <= 0.02 && t <= 10;
  return {pass, "N(200)=" + std::to_string(rec.count) + " predicted=" + num(rec.predicted, 8) +
                    " ratio=" + num(rec.ratio, 8) + " time=" + num(t, 3) + "s"};
}

Outcome criterion2() {
  auto const start = Clock::now();
  std::vector<double> const xs{10, 20, 40, 80};
  std::string detail;
  bool pass = true;
  for (auto const& parts : std::vector<std::vector<int>>{{1, 2}, {2, 1}}) {
    auto const table = ratio_table(Partition(parts), HeightKind::INF, xs);
    double const slope = fit_exponent(table).slope;
    pass = pass && std::abs(slope - 3) <= 0.15;
    detail += "(" + std::to_string(parts[0]) + "," + std::to_string(parts[1]) + ") slope=" + num(slope, 6) + " ";
  }
  double const t = seconds_since(start);
  pass = pass && t <= 300;
  return {pass, detail + "time=" + num(t, 3) + "s"};
}

Outcome criterion3() {
  std::size_t compared = 0;
  std::size_t roundtrips = 0;
  bool pass = true;
  for (auto kind : {HeightKind::INF, HeightKind::AC}) {
    for (double X : {10.0, 20.0, 40.0, 80.0}) {
      auto const a = count_flags({3, {1, 2}, kind, square(X)}).total;
      auto const b = count_flags({3, {2, 1}, kind, square(X)}).total;
      pass = pass && a == b;
      ++compared;
    }
  }
  for (auto kind : {HeightKind::INF, HeightKind::AC}) {
    for (double X : {10.0, 20.0}) {
      auto const left = enumerate_flags({3, {1, 2}, kind, square(X)});
      auto const right = enumerate_flags({3, {2, 1}, kind, square(X)});
      std::set<FlagChain> image;
      for (auto const& f : left) {
        FlagChain const d = dual_flag(f);
        pass = pass && dual_flag(d) == f && height(d, kind) == height(f, kind);
        image.insert(d);
        ++roundtrips;
      }
      pass = pass && std::vector<FlagChain>(image.begin(), image.end()) == right;
    }
  }
  return {pass, std::to_string(compared) + " count pairs equal, " + std::to_string(roundtrips) +
                    " flags round-tripped through the complement map"};
}

// Doubles X until the projected cost of the next step would overrun the
// budget, then judges the last entry and the trend of the last three.
Outcome criterion4() {
  double const budget = 600;
  auto const start = Clock::now();
  Partition const p({1, 1, 1});
  struct Row {
    double X;
    std::uint64_t count;
    double ratio;
    double seconds;
  };
  std::vector<Row> rows;
  double X = 16;
  while (true) {
    auto const step = Clock::now();
    EnumerationJob const job{3, {1, 1, 1}, HeightKind::AC, square(X)};
    std::uint64_t const count = count_flags(job, {1, true}).total;
    double const predicted = main_term(p, HeightKind::AC, Real(X)).convert_to<double>();
    rows.push_back({X, count, static_cast<double>(count) / predicted, seconds_since(step)});
    double const elapsed = seconds_since(start);
    // Cost grows a little faster than X; assume a factor of 2.5 per doubling.
    if (elapsed + 2.5 * rows.back().seconds > budget) break;
    X *= 2;
  }
  std::ofstream table(artifact_dir() / "ac_complete_flags_z3.csv");
  table << "X,count,predicted,ratio,seconds\n";
  for (auto const& r : rows) {
    table << num(r.X, 10) << ',' << r.count << ',' << num(r.count / r.ratio, 12) << ',' << num(r.ratio, 8) << ','
          << num(r.seconds, 4) << '\n';
  }
  auto const& last = rows.back();
  bool const in_band = last.ratio >= 0.75 && last.ratio <= 1.25;
  bool trend = rows.size() >= 3;
  if (trend) {
    std::size_t const m = rows.size();
    double const d0 = std::abs(rows[m - 3].ratio - 1);
    double const d1 = std::abs(rows[m - 2].ratio - 1);
    double const d2 = std::abs(rows[m - 1].ratio - 1);
    trend = d1 < d0 && d2 < d1;
  }
  std::string detail = "largest X=" + num(last.X, 10) + " N=" + std::to_string(last.count) +
                       " ratio=" + num(last.ratio, 6) + " last three:";
  for (std::size_t i = rows.size() >= 3 ? rows.size() - 3 : 0; i < rows.size(); ++i) detail += " " + num(rows[i].ratio, 5);
  detail += std::string(in_band ? "" : " (outside [0.75,1.25])") + (trend ? " monotone" : " not monotone") +
            " total=" + num(seconds_since(start), 4) + "s";
  return {in_band && trend, detail};
}

Outcome criterion5() {
  double worst = 0;
  for (int n = 2; n <= 5; ++n)
    for (int d = 1; d < n; ++d) {
      Real const a = flag_constant(Partition({d, n - d}));
      Real const b = schmidt_constant(d, n);
      worst = std::max(worst, static_cast<double>(abs(a - b) / b));
    }
  fs::path const report = artifact_dir() / "constant_comparison.csv";
  {
    std::ofstream out(report);
    out << "partition,compositional,literal,literal_over_compositional\n";
    std::vector<std::vector<int>> const parts{{1, 1}, {1, 2}, {2, 1}, {1, 3}, {2, 2}, {1, 1, 1}, {1, 2, 1},
                                              {1, 1, 2}, {1, 1, 1, 1}, {2, 3}, {1, 1, 1, 1, 1}};
    for (auto const& v : parts) {
      Partition const p(v);
      Real const c = flag_constant(p);
      Real const l = flag_constant_literal(p);
      out << '"';
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
      out << "\"," << c.str(20) << ',' << l.str(20) << ',' << Real(l / c).str(12) << '\n';
    }
  }
  bool const archived = fs::exists(report) && fs::file_size(report) > 0;
  return {worst <= 1e-12 && archived,
          "max relative gap to Schmidt=" + num(worst, 3) + ", report " + report.string()};
}

Outcome criterion6() {
  auto const start = Clock::now();
  double worst = 0;
  for (int m = 1; m <= 4; ++m)
    for (double T : {0.5, 1.0, 2.0, 5.0}) {
      worst = std::max(worst, std::abs(f_closed(m, T).convert_to<double>() - f_quadrature(m, T)));
    }
  double const f21 = f_closed(2, 1).convert_to<double>();
  double const t = seconds_since(start);
  bool const pass = worst <= 1e-8 && std::abs(f21 - 1) <= 4 * std::numeric_limits<double>::epsilon() && t <= 10;
  return {pass, "max |closed - quadrature|=" + num(worst, 3) + " f_closed(2,1)-1=" + num(f21 - 1, 3) +
                    " time=" + num(t, 3) + "s"};
}

Outcome criterion7() {
  double worst = 0;
  Real const T = 20;
  std::vector<std::vector<int>> const parts{{1, 1}, {1, 2}, {2, 1}, {1, 1, 1}, {2, 1, 2}, {1, 2, 1}, {1, 1, 1, 1}, {3, 2}};
  for (auto const& v : parts) {
    Partition const p(v);
    Real prod = 1;
    for (int j = 0; j + 1 < p.length(); ++j) prod *= p[j] + p[j + 1];
    int const h = 2 * p.n() - p[0] - p[p.length() - 1];
    Real const inf_main = exp(h * T) / prod;
    worst = std::max(worst, static_cast<double>(abs(aprime_volume(p, T, HeightKind::INF) / inf_main - 1)));
    // Leading part of f_{l-1}: e^T times the alternating polynomial.
    int const m = p.length() - 1;
    Real poly = 0, term = 1;
    for (int i = 0; i < m; ++i) {
      if (i > 0) term *= T / i;
      poly += ((m - i - 1) % 2 ? -1 : 1) * term;
    }
    Real const ac_main = exp(T) * poly / prod;
    worst = std::max(worst, static_cast<double>(abs(aprime_volume(p, T, HeightKind::AC) / ac_main - 1)));
  }
  return {worst <= 1e-8, "max relative error at T=20: " + num(worst, 3)};
}

Outcome criterion8() {
  std::mt19937_64 rng(2024);
  double worst = 0;
  int done = 0;
  while (done < 1000) {
    std::size_t const n = 2 + rng() % 3;
    std::vector<int> parts;
    for (int left = static_cast<int>(n); left > 0;) {
      int const d = 1 + static_cast<int>(rng() % static_cast<unsigned>(left));
      parts.push_back(d);
      left -= d;
    }
    if (parts.size() < 2) continue;
    // Random unimodular basis; its leading rows span the flag members.
    IntegerMatrix u(n, IntegerVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int s = 0; s < 10; ++s) {
      std::size_t const a = rng() % n;
      std::size_t const b = (a + 1 + rng() % (n - 1)) % n;
      int const c = coef(rng);
      for (std::size_t k = 0; k < n; ++k) u[a][k] += c * u[b][k];
    }
    RealMatrix g(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i][j] = u[j][i].convert_to<double>();
    auto const rc = refined_coordinates(g, Partition(parts));
    std::size_t D = 0;
    for (std::size_t j = 0; j + 1 < parts.size(); ++j) {
      D += static_cast<std::size_t>(parts[j]);
      IntegerMatrix const rows(u.begin(), u.begin() + static_cast<long>(D));
      double const exact = std::sqrt(covol_sq(IntegerBasis(rows)).convert_to<double>());
      worst = std::max(worst, std::abs(std::exp(rc.t[j]) - exact) / exact);
    }
    ++done;
  }
  return {worst <= 1e-9, "1000 flags, max relative error=" + num(worst, 3)};
}

Outcome criterion9() {
  auto const start = Clock::now();
  bool pass = true;
  std::size_t cases = 0, lattices = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (int r = 1; r <= std::min<int>(2, static_cast<int>(n)); ++r)
      for (int b = 1; b <= 16; ++b) {
        auto fast = enumerate_primitive_sublattices(RationalGram::identity(n), r, b);
        // Reduced bases of these lattices have entries at most 4 in size.
        auto slow = brute_force_primitive_sublattices(RationalGram::identity(n), r, b, 4);
        std::sort(fast.begin(), fast.end());
        std::sort(slow.begin(), slow.end());
        pass = pass && fast == slow;
        ++cases;
        lattices += fast.size();
      }
  double const t = seconds_since(start);
  pass = pass && t <= 120;
  return {pass, std::to_string(cases) + " cases, " + std::to_string(lattices) + " lattices, time=" + num(t, 3) + "s"};
}

int smallest_X_with(std::vector<int> const& parts, std::uint64_t target) {
  int n = 0;
  for (int d : parts) n += d;
  for (int X = 1;; ++X) {
    if (count_flags({n, parts, HeightKind::INF, Rational(X) * X}).total >= target) return X;
  }
}

Outcome criterion10() {
  auto const start = Clock::now();
  std::string detail;

  int const Xa = smallest_X_with({2, 1}, 5000);
  auto const cells = modular_cells(10);
  std::vector<std::size_t> shapes;
  enumerate_flags({3, {2, 1}, HeightKind::INF, Rational(Xa) * Xa},
                  [&](FlagChain const& f) { shapes.push_back(cells.classify(shape_vector(f).front().point)); });
  auto const chi_a = chi_square_uniform(cells.partition(), shapes);
  double const ta = seconds_since(start);

  auto const mid = Clock::now();
  int const Xb = smallest_X_with({1, 2}, 5000);
  auto const caps = sphere_cap_cells(3, 8);
  std::vector<std::size_t> dirs;
  enumerate_flags({3, {1, 2}, HeightKind::INF, Rational(Xb) * Xb}, [&](FlagChain const& f) {
    auto const d = direction(f);
    dirs.push_back(caps.classify(d.front().frame.front()));
  });
  auto const chi_b = chi_square_uniform(caps.partition(), dirs);
  double const tb = seconds_since(mid);

  std::ofstream out(artifact_dir() / "equidistribution.csv");
  out << "test,cell,mass,observed,expected\n";
  for (std::size_t i = 0; i < chi_a.observed.size(); ++i)
    out << "shape," << i << ',' << cells.partition().cells[i].mass << ',' << chi_a.observed[i] << ',' << chi_a.expected[i] << '\n';
  for (std::size_t i = 0; i < chi_b.observed.size(); ++i)
    out << "direction," << i << ',' << caps.partition().cells[i].mass << ',' << chi_b.observed[i] << ',' << chi_b.expected[i] << '\n';

  bool const a = chi_a.pass() && ta <= 600;
  bool const b = chi_b.pass() && tb <= 600;
  detail = "(a) shapes X=" + std::to_string(Xa) + " N=" + std::to_string(shapes.size()) + " chi2=" +
           num(chi_a.statistic, 5) + " threshold=" + num(chi_a.threshold_99, 5) + (a ? " pass" : " FAIL") +
           "; (b) directions X=" + std::to_string(Xb) + " N=" + std::to_string(dirs.size()) + " chi2=" +
           num(chi_b.statistic, 5) + " threshold=" + num(chi_b.threshold_99, 5) + (b ? " pass" : " FAIL");
  return {a && b, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::map<int, std::function<Outcome()>> const criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (auto const& [k, _] : criteria) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    auto const it = criteria.find(k);
    if (it == criteria.end()) {
      std::cout << "criterion " << k << ": FAIL unknown criterion\n";
      all = false;
      continue;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (std::exception const& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

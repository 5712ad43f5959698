#include "flagcount_cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace flagcount::cli {
namespace {

std::string trim(std::string const& s) {
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto const e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string const& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty item in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

int parse_int(std::string const& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (std::exception const&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

double parse_double(std::string const& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (std::exception const&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

bool parse_bool(std::string const& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

}  // namespace

std::map<std::string, std::string> read_config_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto const hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto const eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<int> parse_int_list(std::string const& text) {
  std::vector<int> out;
  for (auto const& item : split_list(text)) out.push_back(parse_int(item));
  return out;
}

std::vector<double> parse_double_list(std::string const& text) {
  std::vector<double> out;
  for (auto const& item : split_list(text)) out.push_back(parse_double(item));
  return out;
}

void apply_setting(RunConfig& cfg, std::string const& key, std::string const& value) {
  if (key == "n") {
    cfg.n = parse_int(value);
  } else if (key == "partition") {
    cfg.partition = parse_int_list(value);
  } else if (key == "height") {
    try {
      cfg.height = parse_height_kind(value);
    } catch (std::invalid_argument const& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "X") {
    cfg.Xs = {parse_double(value)};
  } else if (key == "Xs") {
    cfg.Xs = parse_double_list(value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "cache") {
    cfg.cache_dir = value;
  } else if (key == "workers") {
    cfg.workers = parse_int(value);
  } else if (key == "emit_shapes") {
    cfg.emit_shapes = parse_bool(value);
  } else if (key == "emit_directions") {
    cfg.emit_directions = parse_bool(value);
  } else if (key == "target") {
    cfg.target = value;
  } else if (key == "cells") {
    cfg.cells = parse_int(value);
  } else if (key == "ratio_tolerance") {
    cfg.ratio_tolerance = parse_double(value);
  } else if (key == "exponent_tolerance") {
    cfg.exponent_tolerance = parse_double(value);
  } else if (key == "duality_split") {
    cfg.duality_split = parse_bool(value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void validate(RunConfig const& cfg) {
  if (cfg.n < 1) throw ConfigError("n must be a positive integer");
  if (cfg.partition.empty()) throw ConfigError("partition is required");
  for (int d : cfg.partition) {
    if (d < 1) throw ConfigError("partition parts must be positive");
  }
  if (std::accumulate(cfg.partition.begin(), cfg.partition.end(), 0) != cfg.n) {
    throw ConfigError("partition does not sum to n");
  }
  if (cfg.n > 8) throw ConfigError("n must be at most 8");
  for (std::size_t i = 0; i < cfg.Xs.size(); ++i) {
    if (!(cfg.Xs[i] >= 1)) throw ConfigError("X must be at least 1");
    if (i > 0 && !(cfg.Xs[i] > cfg.Xs[i - 1])) throw ConfigError("Xs must increase");
  }
  if (cfg.workers < 1) throw ConfigError("workers must be positive");
  if (!cfg.target.empty() && cfg.target != "shape" && cfg.target != "direction") {
    throw ConfigError("target must be shape or direction");
  }
  if (cfg.cells < 0) throw ConfigError("cells must be positive");
}

std::string default_cache_dir() {
  if (char const* env = std::getenv("FLAGCOUNT_CACHE"); env && *env) return env;
  if (char const* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/flagcount";
  if (char const* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/flagcount";
  return ".flagcount-cache";
}

}  // namespace flagcount::cli

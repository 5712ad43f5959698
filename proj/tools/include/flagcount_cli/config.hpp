#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "flagcount/enumerate.hpp"

namespace flagcount::cli {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  int n = 0;
  std::vector<int> partition;
  HeightKind height = HeightKind::INF;
  std::vector<double> Xs;
  std::string out;
  std::string cache_dir;
  int workers = 1;
  bool emit_shapes = false;
  bool emit_directions = false;
  // equidist
  std::string target;  // "shape" or "direction"; empty picks from the partition
  int cells = 0;       // 0 picks a default
  // verify
  double ratio_tolerance = 0.02;
  double exponent_tolerance = 0.15;
  bool duality_split = true;
};

// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(std::string const& path);

// Keys: n, partition, height, X, Xs, out, cache, workers, emit_shapes,
// emit_directions, target, cells, ratio_tolerance, exponent_tolerance,
// duality_split.
void apply_setting(RunConfig& cfg, std::string const& key, std::string const& value);

std::vector<int> parse_int_list(std::string const& text);
std::vector<double> parse_double_list(std::string const& text);

// Throws ConfigError.
void validate(RunConfig const& cfg);

// FLAGCOUNT_CACHE, else $XDG_CACHE_HOME/flagcount, else ~/.cache/flagcount,
// else ./.flagcount-cache.
std::string default_cache_dir();

}  // namespace flagcount::cli

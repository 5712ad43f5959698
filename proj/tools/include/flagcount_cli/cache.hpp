#pragma once

// Enumeration results persisted by job fingerprint:
//   <dir>/<fingerprint>/flags.jsonl
//   <dir>/<fingerprint>/entry.json
// Both are written with a ".partial" suffix and renamed when complete.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flagcount/enumerate.hpp"

namespace flagcount::cli {

inline constexpr char kSchemaVersion[] = "v1";

struct JobKey {
  int n = 0;
  std::vector<int> partition;
  HeightKind height = HeightKind::INF;
  Rational bound_sq = 1;
};

// "schema=v1;n=3;partition=1,2;height=inf;bound_sq=100/1"
std::string canonical_description(JobKey const& key);
// FNV-1a 64 of the canonical description, 16 hex digits.
std::string fingerprint(JobKey const& key);

struct CacheEntry {
  std::string fingerprint;
  JobKey key;
  std::uint64_t count = 0;
  std::vector<std::uint64_t> per_level;
  std::string jsonl_path;
  std::string tool_version;
};

class Cache {
 public:
  explicit Cache(std::string dir);

  std::optional<CacheEntry> lookup(JobKey const& key) const;

  // Runs `produce`, which writes JSONL lines through the callback and returns
  // the count and per-level counts, then publishes the entry.
  using LineWriter = std::function<void(std::string const&)>;
  struct Produced {
    std::uint64_t count = 0;
    std::vector<std::uint64_t> per_level;
  };
  CacheEntry store(JobKey const& key, std::function<Produced(LineWriter const&)> const& produce);

  std::string const& dir() const { return dir_; }

 private:
  std::string dir_;
};

std::string tool_version();

}  // namespace flagcount::cli

#include "flagcount_cli/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace flagcount::cli {

#ifndef FLAGCOUNT_VERSION
#define FLAGCOUNT_VERSION "dev"
#endif

std::string tool_version() { return FLAGCOUNT_VERSION; }

std::string canonical_description(JobKey const& key) {
  std::ostringstream os;
  os << "schema=" << kSchemaVersion << ";n=" << key.n << ";partition=";
  for (std::size_t i = 0; i < key.partition.size(); ++i) os << (i ? "," : "") << key.partition[i];
  os << ";height=" << to_string(key.height) << ";bound_sq=" << to_fraction_string(key.bound_sq);
  return os.str();
}

std::string fingerprint(JobKey const& key) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_description(key)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Cache::Cache(std::string dir) : dir_(std::move(dir)) {}

std::optional<CacheEntry> Cache::lookup(JobKey const& key) const {
  std::string const fp = fingerprint(key);
  fs::path const base = fs::path(dir_) / fp;
  fs::path const entry_path = base / "entry.json";
  fs::path const jsonl = base / "flags.jsonl";
  if (!fs::exists(entry_path) || !fs::exists(jsonl)) return std::nullopt;
  std::ifstream in(entry_path);
  json j;
  try {
    in >> j;
  } catch (json::exception const&) {
    return std::nullopt;
  }
  // A different description under the same hash, or an older schema, is a miss.
  if (j.value("description", "") != canonical_description(key)) return std::nullopt;
  CacheEntry e;
  e.fingerprint = fp;
  e.key = key;
  e.count = j.at("count").get<std::uint64_t>();
  e.per_level = j.at("per_level").get<std::vector<std::uint64_t>>();
  e.jsonl_path = jsonl.string();
  e.tool_version = j.value("tool_version", "");
  return e;
}

CacheEntry Cache::store(JobKey const& key, std::function<Produced(LineWriter const&)> const& produce) {
  std::string const fp = fingerprint(key);
  fs::path const base = fs::path(dir_) / fp;
  fs::create_directories(base);
  fs::path const jsonl = base / "flags.jsonl";
  fs::path const jsonl_partial = base / "flags.jsonl.partial";
  Produced produced;
  {
    std::ofstream out(jsonl_partial, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + jsonl_partial.string());
    produced = produce([&out](std::string const& line) { out << line << '\n'; });
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + jsonl_partial.string());
  }
  fs::rename(jsonl_partial, jsonl);

  json j;
  j["description"] = canonical_description(key);
  j["fingerprint"] = fp;
  j["schema"] = kSchemaVersion;
  j["n"] = key.n;
  j["partition"] = key.partition;
  j["height"] = to_string(key.height);
  j["bound_sq"] = to_fraction_string(key.bound_sq);
  j["count"] = produced.count;
  j["per_level"] = produced.per_level;
  j["jsonl"] = "flags.jsonl";
  j["tool_version"] = tool_version();
  fs::path const entry_partial = base / "entry.json.partial";
  {
    std::ofstream out(entry_partial, std::ios::trunc);
    out << j.dump(2) << '\n';
  }
  fs::rename(entry_partial, base / "entry.json");

  CacheEntry e;
  e.fingerprint = fp;
  e.key = key;
  e.count = produced.count;
  e.per_level = produced.per_level;
  e.jsonl_path = jsonl.string();
  e.tool_version = tool_version();
  return e;
}

}  // namespace flagcount::cli

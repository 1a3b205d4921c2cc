#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "domainscope/backend.hpp"
#include "domainscope/clock.hpp"
#include "domainscope/errors.hpp"

namespace domainscope {

struct CacheRecord {
  std::string backend_id;
  std::string key;  // rendered query or host
  std::string captured_at;
  nlohmann::json value;

  bool operator==(const CacheRecord&) const = default;
};

/// Append-only JSON-lines store keyed by (backend_id, key). Entries never
/// expire; staleness is the report module's concern. Concurrent readers,
/// serialized writers.
class QueryCache {
 public:
  explicit QueryCache(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.empty() || !std::filesystem::exists(path_)) return;
    std::ifstream in(path_, std::ios::binary);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
      if (rec.is_discarded())
        throw ParseError(path_.string() + ":" + std::to_string(line_no) +
                         ": bad cache record");
      CacheRecord r{rec["backend_id"].get<std::string>(),
                    rec["key"].get<std::string>(),
                    rec.value("captured_at", std::string()), rec["value"]};
      map_[{r.backend_id, r.key}] = std::move(r);
    }
  }

  std::optional<CacheRecord> lookup(const std::string& backend_id,
                                    const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find({backend_id, key});
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void put(const CacheRecord& record) {
    std::unique_lock lock(mutex_);
    map_[{record.backend_id, record.key}] = record;
    if (path_.empty()) return;
    if (path_.has_parent_path())
      std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to cache " + path_.string());
    nlohmann::json j;
    j["backend_id"] = record.backend_id;
    j["captured_at"] = record.captured_at;
    j["key"] = record.key;
    j["value"] = record.value;
    out << j.dump() << "\n";
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

  /// Min/max captured_at over all entries, for staleness reporting.
  std::optional<std::pair<std::string, std::string>> captured_range() const {
    std::shared_lock lock(mutex_);
    std::optional<std::pair<std::string, std::string>> range;
    for (const auto& [key, rec] : map_) {
      if (rec.captured_at.empty()) continue;
      if (!range) {
        range = {rec.captured_at, rec.captured_at};
      } else {
        range->first = std::min(range->first, rec.captured_at);
        range->second = std::max(range->second, rec.captured_at);
      }
    }
    return range;
  }

  const std::filesystem::path& path() const { return path_; }

  /// DOMAINSCOPE_CACHE, when set, overrides any configured cache path.
  static std::filesystem::path resolve_path(
      const std::filesystem::path& configured) {
    const char* env = std::getenv("DOMAINSCOPE_CACHE");
    if (env && *env) return env;
    return configured;
  }

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::string, std::string>, CacheRecord> map_;
};

/// Write-through caching front for a search backend. `inner_calls` counts
/// real backend traffic; cache hits cost nothing.
class CachedSearchBackend : public SearchBackend {
 public:
  CachedSearchBackend(SearchBackend& inner, QueryCache& cache,
                      Clock clock = Clock::system())
      : inner_(inner), cache_(cache), clock_(std::move(clock)) {}

  HitCount hit_count(const HitCountQuery& q) override {
    std::string key = render_query(q);
    if (auto rec = cache_.lookup(inner_.id(), key)) {
      HitCount hit;
      hit.rounded = rec->value.value("rounded", inner_.rounds());
      hit.captured_at = rec->captured_at;
      if (!rec->value["count"].is_null())
        hit.value = rec->value["count"].get<std::int64_t>();
      return hit;
    }
    HitCount fresh = inner_.hit_count(q);
    ++inner_calls_;
    if (fresh.captured_at.empty())
      fresh.captured_at = to_iso8601(static_cast<std::int64_t>(clock_.now()));
    nlohmann::json value;
    value["count"] =
        fresh.value ? nlohmann::json(*fresh.value) : nlohmann::json(nullptr);
    value["rounded"] = fresh.rounded;
    cache_.put({inner_.id(), key, fresh.captured_at, value});
    return fresh;
  }

  std::string id() const override { return inner_.id(); }
  bool rounds() const override { return inner_.rounds(); }
  std::size_t max_query_length() const override {
    return inner_.max_query_length();
  }
  std::int64_t inner_calls() const { return inner_calls_.load(); }

 private:
  SearchBackend& inner_;
  QueryCache& cache_;
  Clock clock_;
  std::atomic<std::int64_t> inner_calls_{0};
};

class CachedImpactBackend : public ImpactBackend {
 public:
  CachedImpactBackend(ImpactBackend& inner, QueryCache& cache)
      : inner_(inner), cache_(cache) {}

  ImpactSnapshot impact(const std::string& host) override {
    if (auto rec = cache_.lookup(inner_.id(), host))
      return snapshot_from_value(host, rec->value, rec->captured_at,
                                 rec->backend_id);
    ImpactSnapshot fresh = inner_.impact(host);
    ++inner_calls_;
    cache_.put({inner_.id(), host, fresh.captured_at,
                snapshot_to_value(fresh)});
    return fresh;
  }

  std::string id() const override { return inner_.id(); }
  std::int64_t inner_calls() const { return inner_calls_.load(); }

 private:
  ImpactBackend& inner_;
  QueryCache& cache_;
  std::atomic<std::int64_t> inner_calls_{0};
};

/// Snapshot fetch with cache write-through.
inline ImpactSnapshot fetch_impact(const std::string& host,
                                   ImpactBackend& backend) {
  return backend.impact(host);
}

/// Raw estimate fetch; max-length precondition is enforced by the backend.
inline HitCount hit_count_estimate(const HitCountQuery& q,
                                   SearchBackend& backend) {
  return backend.hit_count(q);
}

}  // namespace domainscope

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "domainscope/errors.hpp"

namespace domainscope {

/// The four site-level impact indicators for one domain at one instant.
/// Missing is distinguished from zero everywhere downstream.
struct ImpactSnapshot {
  std::string host;
  std::optional<std::int64_t> page_count;
  std::optional<std::int64_t> sites_linking_in;
  std::optional<std::int64_t> root_domains_linking;
  std::optional<double> authority;  // 0..100
  std::string captured_at;          // ISO-8601
  std::string backend_id;

  bool operator==(const ImpactSnapshot&) const = default;
};

struct HitCountQuery {
  std::optional<std::string> phrase;  // quoted mention target
  std::optional<std::string> site;    // site restriction

  bool operator<(const HitCountQuery& o) const {
    return std::tie(phrase, site) < std::tie(o.phrase, o.site);
  }
};

/// Bit-exact query rendering: `"PHRASE" site:HOST`, `site:HOST` or
/// `"PHRASE"`, single space separators, no trailing space.
inline std::string render_query(const HitCountQuery& q) {
  if (q.phrase && q.phrase->empty())
    throw QueryRejected("empty phrase");
  if (!q.phrase && !q.site)
    throw QueryRejected("query needs a phrase or a site restriction");
  std::string out;
  if (q.phrase) out += "\"" + *q.phrase + "\"";
  if (q.site) {
    if (!out.empty()) out += ' ';
    out += "site:" + *q.site;
  }
  return out;
}

struct HitCount {
  std::optional<std::int64_t> value;  // nullopt -> no data
  bool rounded = false;               // backend reports rounded estimates
  std::string captured_at;            // ISO-8601, when the estimate was taken

  bool operator==(const HitCount&) const = default;
};

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  virtual HitCount hit_count(const HitCountQuery& q) = 0;
  virtual std::string id() const = 0;
  virtual bool rounds() const { return false; }
  virtual std::size_t max_query_length() const { return 2048; }
};

class ImpactBackend {
 public:
  virtual ~ImpactBackend() = default;
  virtual ImpactSnapshot impact(const std::string& host) = 0;
  virtual std::string id() const = 0;
};

// --- JSON record shapes shared by fixtures and the cache ---------------

inline nlohmann::json snapshot_to_value(const ImpactSnapshot& s) {
  nlohmann::json v;
  v["page_count"] = s.page_count ? nlohmann::json(*s.page_count)
                                 : nlohmann::json(nullptr);
  v["sites_linking_in"] = s.sites_linking_in
                              ? nlohmann::json(*s.sites_linking_in)
                              : nlohmann::json(nullptr);
  v["root_domains_linking"] = s.root_domains_linking
                                  ? nlohmann::json(*s.root_domains_linking)
                                  : nlohmann::json(nullptr);
  v["authority"] =
      s.authority ? nlohmann::json(*s.authority) : nlohmann::json(nullptr);
  return v;
}

inline ImpactSnapshot snapshot_from_value(const std::string& host,
                                          const nlohmann::json& v,
                                          const std::string& captured_at,
                                          const std::string& backend_id) {
  ImpactSnapshot s;
  s.host = host;
  s.captured_at = captured_at;
  s.backend_id = backend_id;
  auto get_int = [&](const char* key) -> std::optional<std::int64_t> {
    if (!v.contains(key) || v[key].is_null()) return std::nullopt;
    return v[key].get<std::int64_t>();
  };
  s.page_count = get_int("page_count");
  s.sites_linking_in = get_int("sites_linking_in");
  s.root_domains_linking = get_int("root_domains_linking");
  if (v.contains("authority") && !v["authority"].is_null())
    s.authority = v["authority"].get<double>();
  if (s.authority && (*s.authority < 0.0 || *s.authority > 100.0))
    throw ParseError("authority out of range for " + host);
  return s;
}

/// Offline backend over a directory of JSON-lines records, one per line:
///   {"backend_id":..,"key":..,"captured_at":..,"value":..}
/// Keys are bare hosts for impact lookups and rendered queries for hit
/// counts. Pure: identical directories answer identically in any order.
class FixtureBackend : public SearchBackend, public ImpactBackend {
 public:
  explicit FixtureBackend(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir))
      throw BackendUnavailable("fixture dir " + dir.string() + " not found");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      std::string line;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded())
          throw ParseError(file.string() + ":" + std::to_string(line_no) +
                           ": bad JSON record");
        Entry e;
        e.value = rec["value"];
        e.captured_at = rec.value("captured_at", std::string());
        records_[rec["key"].get<std::string>()] = std::move(e);
      }
    }
  }

  HitCount hit_count(const HitCountQuery& q) override {
    std::string rendered = render_query(q);
    if (rendered.size() > max_query_length())
      throw QueryRejected("query too long: " + rendered);
    ++search_calls_;
    auto it = records_.find(rendered);
    if (it == records_.end()) return {std::nullopt, rounds(), ""};
    if (it->second.value.is_null())
      return {std::nullopt, rounds(), it->second.captured_at};
    return {it->second.value.get<std::int64_t>(), rounds(),
            it->second.captured_at};
  }

  ImpactSnapshot impact(const std::string& host) override {
    ++impact_calls_;
    auto it = records_.find(host);
    if (it == records_.end()) {
      ImpactSnapshot s;  // unknown host: everything missing, not zero
      s.host = host;
      s.backend_id = id();
      s.captured_at = "1970-01-01T00:00:00Z";
      return s;
    }
    return snapshot_from_value(host, it->second.value, it->second.captured_at,
                               id());
  }

  std::string id() const override { return "fixture"; }
  // The recorded estimates came from an engine that rounds.
  bool rounds() const override { return true; }

  std::int64_t search_calls() const { return search_calls_.load(); }
  std::int64_t impact_calls() const { return impact_calls_.load(); }
  std::int64_t calls() const { return search_calls() + impact_calls(); }

 private:
  struct Entry {
    nlohmann::json value;
    std::string captured_at;
  };
  std::map<std::string, Entry> records_;
  std::atomic<std::int64_t> search_calls_{0};
  std::atomic<std::int64_t> impact_calls_{0};
};

/// Generic live adapter: GETs a configurable endpoint that answers the same
/// record shape the fixtures use. Credentials pass through untouched.
struct LiveEndpointConfig {
  std::string base_url;  // e.g. http://collector.internal/query
  std::string api_key;   // appended as &key= when non-empty
};

}  // namespace domainscope

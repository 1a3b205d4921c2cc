#pragma once

// Thin live adapter. The historical data sources behind the indicators are
// gone or changed, so the live path talks to a generic collector endpoint
// that answers the same record shape the fixtures use:
//   GET <base>?kind=search&q=<query>   -> {"value": <count or null>}
//   GET <base>?kind=impact&host=<host> -> {"value": {<impact object>}}

#include <string>

#include <httplib.h>
#include <json.hpp>

#include "domainscope/backend.hpp"
#include "domainscope/clock.hpp"
#include "domainscope/url.hpp"

namespace domainscope {

class LiveHttpBackend : public SearchBackend, public ImpactBackend {
 public:
  LiveHttpBackend(LiveEndpointConfig config, Clock clock = Clock::system())
      : config_(std::move(config)), clock_(std::move(clock)) {}

  HitCount hit_count(const HitCountQuery& q) override {
    std::string rendered = render_query(q);
    if (rendered.size() > max_query_length())
      throw QueryRejected("query too long: " + rendered);
    nlohmann::json v = call("kind=search&q=" + url_encode(rendered));
    std::string stamp = to_iso8601(static_cast<std::int64_t>(clock_.now()));
    if (v.is_null()) return {std::nullopt, rounds(), stamp};
    return {v.get<std::int64_t>(), rounds(), stamp};
  }

  ImpactSnapshot impact(const std::string& host) override {
    nlohmann::json v = call("kind=impact&host=" + url_encode(host));
    if (v.is_null()) {
      ImpactSnapshot s;
      s.host = host;
      s.backend_id = id();
      s.captured_at = to_iso8601(static_cast<std::int64_t>(clock_.now()));
      return s;
    }
    return snapshot_from_value(
        host, v, to_iso8601(static_cast<std::int64_t>(clock_.now())), id());
  }

  std::string id() const override { return "live:http"; }
  bool rounds() const override { return true; }

 private:
  static std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
          (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_')
        out += static_cast<char>(c);
      else {
        out += '%';
        out += hex[c >> 4];
        out += hex[c & 15];
      }
    }
    return out;
  }

  nlohmann::json call(const std::string& params) {
    auto u = parse_url(config_.base_url);
    if (!u) throw BackendUnavailable("bad endpoint " + config_.base_url);
    httplib::Client client(u->origin());
    std::string target = u->path + "?" + params;
    if (!config_.api_key.empty()) target += "&key=" + url_encode(config_.api_key);
    auto res = client.Get(target);
    if (!res) throw BackendUnavailable("no response from " + config_.base_url);
    if (res->status == 429) throw QuotaExhausted("endpoint asks for backoff");
    if (res->status != 200)
      throw BackendUnavailable("endpoint status " +
                               std::to_string(res->status));
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("value"))
      throw BackendUnavailable("malformed endpoint response");
    return doc["value"];
  }

  LiveEndpointConfig config_;
  Clock clock_;
};

}  // namespace domainscope

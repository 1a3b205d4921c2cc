#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "domainscope/errors.hpp"
#include "domainscope/url.hpp"

namespace domainscope {

struct FetchResponse {
  int status = 0;  // 0 = transport failure
  std::string body;
  std::string content_type;

  bool ok() const { return status >= 200 && status < 300; }
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchResponse get(const std::string& url) = 0;
  virtual std::string id() const = 0;
};

/// Replays recorded responses from a directory. The directory holds an
/// index.json mapping URL -> {status, body | body_file, content_type}.
/// Unlisted URLs answer 404 so crawls over fixtures stay deterministic.
class FixtureFetcher : public Fetcher {
 public:
  explicit FixtureFetcher(const std::filesystem::path& dir) : dir_(dir) {
    std::ifstream in(dir / "index.json", std::ios::binary);
    if (!in)
      throw FetcherUnavailable("no index.json in fixture dir " + dir.string());
    nlohmann::json idx = nlohmann::json::parse(in);
    for (auto& [url, entry] : idx.items()) {
      Entry e;
      e.status = entry.value("status", 200);
      e.content_type = entry.value("content_type", std::string("text/html"));
      if (entry.contains("body_file")) {
        std::ifstream body(dir / entry["body_file"].get<std::string>(),
                           std::ios::binary);
        if (!body)
          throw FetcherUnavailable("missing body file for " + url);
        e.body.assign((std::istreambuf_iterator<char>(body)),
                      std::istreambuf_iterator<char>());
      } else {
        e.body = entry.value("body", std::string());
      }
      entries_.emplace(url, std::move(e));
    }
  }

  FetchResponse get(const std::string& url) override {
    ++calls_;
    auto it = entries_.find(url);
    if (it == entries_.end()) return {404, "", "text/plain"};
    return {it->second.status, it->second.body, it->second.content_type};
  }

  std::string id() const override { return "fixture"; }
  std::int64_t calls() const { return calls_.load(); }

 private:
  struct Entry {
    int status;
    std::string body;
    std::string content_type;
  };
  std::filesystem::path dir_;
  std::map<std::string, Entry> entries_;
  std::atomic<std::int64_t> calls_{0};
};

/// Plain GET against the live web. HTTPS needs the build to enable TLS in
/// the bundled http client; without it those URLs report a transport error.
class LiveFetcher : public Fetcher {
 public:
  explicit LiveFetcher(std::string user_agent, double timeout_seconds = 10.0)
      : user_agent_(std::move(user_agent)), timeout_(timeout_seconds) {}

  FetchResponse get(const std::string& url) override {
    auto u = parse_url(url);
    if (!u) return {0, "", ""};
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (u->scheme == "https") return {0, "", ""};
#endif
    httplib::Client client(u->origin());
    client.set_connection_timeout(std::chrono::duration<double>(timeout_));
    client.set_read_timeout(std::chrono::duration<double>(timeout_));
    client.set_follow_location(true);
    httplib::Headers headers = {{"User-Agent", user_agent_}};
    std::string target = u->path;
    if (!u->query.empty()) target += "?" + u->query;
    auto res = client.Get(target, headers);
    if (!res) return {0, "", ""};
    std::string ct;
    if (res->has_header("Content-Type")) ct = res->get_header_value("Content-Type");
    return {res->status, res->body, ct};
  }

  std::string id() const override { return "live-http"; }

 private:
  std::string user_agent_;
  double timeout_;
};

}  // namespace domainscope

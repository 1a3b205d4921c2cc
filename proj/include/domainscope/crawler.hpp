#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "domainscope/clock.hpp"
#include "domainscope/fetcher.hpp"
#include "domainscope/html.hpp"
#include "domainscope/registry.hpp"

namespace domainscope {

struct CrawlPolicy {
  int max_pages_per_domain = 200;
  int max_depth = 2;
  double fetch_timeout = 10.0;
  bool obey_robots = true;
  bool include_sitemaps = true;
  double min_request_delay = 0.0;  // seconds between fetches to one domain
};

struct Evidence {
  std::string source_page;
  std::string anchor;
};

struct CandidateDomain {
  std::string host;
  std::vector<Evidence> evidence;  // non-empty
  std::int64_t first_seen = 0;     // fetch sequence number (deterministic)
};

struct CrawlDiagnostics {
  struct Failure {
    std::string url;
    int status;
  };
  std::vector<Failure> fetch_failures;
  std::map<std::string, int> pages_fetched;  // per registrable domain
  int robots_blocked = 0;
  int decode_errors = 0;
};

struct CrawlResult {
  std::vector<CandidateDomain> candidates;  // sorted by host
  CrawlDiagnostics diagnostics;
};

namespace crawl_detail {

// Disallow-prefix subset of robots.txt, for the default and our own agent.
struct RobotsRules {
  std::vector<std::string> disallow;

  bool allows(const std::string& path) const {
    for (const auto& prefix : disallow) {
      if (prefix.empty()) continue;
      if (path.rfind(prefix, 0) == 0) return false;
    }
    return true;
  }
};

inline RobotsRules parse_robots(std::string_view body,
                                std::string_view agent) {
  RobotsRules rules;
  bool applies = false;
  bool seen_any_group = false;
  for (auto& raw_line : split(body, '\n')) {
    std::string_view line = trim(raw_line);
    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    size_t colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    std::string key = ascii_lower(trim(line.substr(0, colon)));
    std::string value{trim(line.substr(colon + 1))};
    if (key == "user-agent") {
      std::string ua = ascii_lower(value);
      applies = ua == "*" || ua == ascii_lower(agent);
      seen_any_group = true;
    } else if (key == "disallow" && applies) {
      rules.disallow.push_back(value);
    }
  }
  (void)seen_any_group;
  return rules;
}

// <loc> entries from a sitemap or sitemap index; forgiving scan.
inline std::vector<std::string> sitemap_locs(std::string_view xml) {
  std::vector<std::string> locs;
  size_t pos = 0;
  while (true) {
    size_t open = xml.find("<loc>", pos);
    if (open == std::string_view::npos) break;
    size_t close = xml.find("</loc>", open);
    if (close == std::string_view::npos) break;
    locs.emplace_back(
        trim(html_detail::decode_entities(xml.substr(open + 5, close - open - 5))));
    pos = close + 6;
  }
  return locs;
}

}  // namespace crawl_detail

/// Breadth-first crawl over an organization's registered domains, harvesting
/// unregistered registrable hosts as review-queue candidates. The fetch
/// budget is pages per registrable domain; the robots probe is not charged
/// against it.
inline CrawlResult crawl_organization(const OrganizationRecord& org,
                                      const CrawlPolicy& policy,
                                      Fetcher& fetcher,
                                      const std::string& user_agent =
                                          "domainscope/1.0",
                                      Clock clock = Clock::system()) {
  if (policy.max_pages_per_domain < 1)
    throw UsageError("max_pages_per_domain must be >= 1");
  if (policy.max_depth < 0) throw UsageError("max_depth must be >= 0");

  std::set<std::string> registered;
  for (const auto& d : org.domains) registered.insert(d.host);

  CrawlResult result;
  std::map<std::string, CandidateDomain> candidates;
  std::map<std::string, crawl_detail::RobotsRules> robots;
  std::map<std::string, double> last_fetch;
  std::set<std::string> visited;
  std::int64_t ticks = 0;

  struct Job {
    std::string url;
    int depth;
    bool is_sitemap;
  };
  std::deque<Job> queue;
  for (const auto& d : org.domains) {
    queue.push_back({"http://" + d.host + "/", 0, false});
    if (policy.include_sitemaps && policy.max_depth >= 1)
      queue.push_back({"http://" + d.host + "/sitemap.xml", 1, true});
  }

  auto fetch_polite = [&](const std::string& url,
                          const std::string& domain) -> FetchResponse {
    auto it = last_fetch.find(domain);
    if (it != last_fetch.end() && policy.min_request_delay > 0) {
      double wait = it->second + policy.min_request_delay - clock.now();
      if (wait > 0) clock.sleep_for(wait);
    }
    FetchResponse r = fetcher.get(url);
    last_fetch[domain] = clock.now();
    ++ticks;
    return r;
  };

  auto note_candidate = [&](const std::string& host, const Evidence& ev) {
    if (registered.count(host)) return;
    auto [it, inserted] = candidates.try_emplace(host);
    if (inserted) {
      it->second.host = host;
      it->second.first_seen = ticks;
    }
    it->second.evidence.push_back(ev);
  };

  while (!queue.empty()) {
    Job job = queue.front();
    queue.pop_front();
    if (visited.count(job.url)) continue;
    visited.insert(job.url);

    auto u = parse_url(job.url);
    if (!u) continue;
    std::string domain;
    try {
      domain = normalize_host(u->host).host;
    } catch (const MalformedHost&) {
      continue;
    }

    if (result.diagnostics.pages_fetched[domain] >=
        policy.max_pages_per_domain)
      continue;

    if (policy.obey_robots) {
      auto rit = robots.find(domain);
      if (rit == robots.end()) {
        FetchResponse r = fetcher.get(u->origin() + "/robots.txt");
        crawl_detail::RobotsRules rules;
        if (r.ok()) rules = crawl_detail::parse_robots(r.body, user_agent);
        rit = robots.emplace(domain, std::move(rules)).first;
      }
      if (!rit->second.allows(u->path)) {
        ++result.diagnostics.robots_blocked;
        continue;
      }
    }

    FetchResponse page = fetch_polite(job.url, domain);
    ++result.diagnostics.pages_fetched[domain];
    if (!page.ok()) {
      result.diagnostics.fetch_failures.push_back({job.url, page.status});
      continue;
    }

    if (job.is_sitemap) {
      for (const auto& loc : crawl_detail::sitemap_locs(page.body)) {
        auto lu = parse_url(loc);
        if (!lu) continue;
        std::string loc_host;
        try {
          loc_host = normalize_host(lu->host).host;
        } catch (const MalformedHost&) {
          continue;
        }
        if (loc_host == domain) {
          bool nested = loc.find(".xml") != std::string::npos;
          if (job.depth < policy.max_depth || !nested)
            queue.push_back({lu->to_string(), job.depth, nested});
        } else {
          note_candidate(loc_host, {job.url, ""});
        }
      }
      continue;
    }

    OutlinkScan scan;
    try {
      scan = extract_outlink_hosts(page.body, job.url);
    } catch (const DecodeError&) {
      ++result.diagnostics.decode_errors;
      continue;
    }
    for (const auto& ext : scan.externals)
      note_candidate(ext.host, {job.url, ext.anchor});
    if (job.depth < policy.max_depth)
      for (const auto& next : scan.frontier)
        queue.push_back({next, job.depth + 1, false});
  }

  for (auto& [host, cand] : candidates) result.candidates.push_back(cand);
  return result;
}

}  // namespace domainscope

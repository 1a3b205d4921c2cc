#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "domainscope/backend.hpp"
#include "domainscope/cache.hpp"
#include "domainscope/crawler.hpp"
#include "domainscope/fetcher.hpp"
#include "domainscope/graphio.hpp"
#include "domainscope/live_backend.hpp"
#include "domainscope/mention.hpp"
#include "domainscope/metrics.hpp"
#include "domainscope/psl_snapshot.hpp"
#include "domainscope/ratelimit.hpp"
#include "domainscope/registry.hpp"
#include "domainscope/retry.hpp"
#include "domainscope/report.hpp"
#include "domainscope/stats.hpp"

namespace domainscope {

struct WorkspaceConfig {
  std::filesystem::path registry_path;
  std::filesystem::path cache_path;   // before env override
  std::filesystem::path out_dir = "out";
  std::string backend = "fixture";    // fixture | live:http
  std::filesystem::path fixture_dir;  // backend records; default <registry>/../backend
  std::filesystem::path web_dir;      // crawl fixture; default <registry>/../web
  int min_domains = 10;
  int jobs = 1;
  CrawlPolicy crawl;
  std::string user_agent = "domainscope/1.0";
  double alpha = 0.01;
  int pca_components = 2;
  int asymmetry_threshold = 10;
  std::uint64_t seed = 0;      // retry jitter only; analyses are exact
  double live_rate_limit = 1.0;  // requests/second against live endpoints
  LiveEndpointConfig live;

  std::string canonical() const {
    nlohmann::json j;
    j["registry"] = registry_path.string();
    j["cache"] = cache_path.string();
    j["out"] = out_dir.string();
    j["backend"] = backend;
    j["fixture_dir"] = fixture_dir.string();
    j["web_dir"] = web_dir.string();
    j["min_domains"] = min_domains;
    j["jobs"] = jobs;
    j["alpha"] = alpha;
    j["pca_components"] = pca_components;
    j["asymmetry_threshold"] = asymmetry_threshold;
    j["seed"] = seed;
    j["crawl"] = {{"max_pages", crawl.max_pages_per_domain},
                  {"max_depth", crawl.max_depth},
                  {"robots", crawl.obey_robots},
                  {"sitemaps", crawl.include_sitemaps}};
    return j.dump();
  }
};

/// Loaded workspace: validated registry plus cache-backed capabilities.
class Workspace {
 public:
  explicit Workspace(WorkspaceConfig config)
      : cfg_(std::move(config)),
        cache_(QueryCache::resolve_path(cfg_.cache_path)) {
    if (cfg_.min_domains < 2) throw UsageError("min_domains must be >= 2");
    orgs_ = load_registry_file(cfg_.registry_path);
    if (cfg_.fixture_dir.empty())
      cfg_.fixture_dir = cfg_.registry_path.parent_path() / "backend";
    if (cfg_.web_dir.empty())
      cfg_.web_dir = cfg_.registry_path.parent_path() / "web";

    if (cfg_.backend == "fixture") {
      fixture_ = std::make_unique<FixtureBackend>(cfg_.fixture_dir);
      search_inner_ = fixture_.get();
      impact_inner_ = fixture_.get();
    } else if (cfg_.backend == "live:http") {
      live_ = std::make_unique<LiveHttpBackend>(cfg_.live);
      limiter_ = std::make_unique<RateLimiter>(cfg_.live_rate_limit);
      limited_ = std::make_unique<RateLimitedSearchBackend>(*live_, *limiter_);
      RetryPolicy retry;
      retry.seed = cfg_.seed;
      retry_search_ =
          std::make_unique<RetryingSearchBackend>(*limited_, retry);
      retry_impact_ = std::make_unique<RetryingImpactBackend>(*live_, retry);
      search_inner_ = retry_search_.get();
      impact_inner_ = retry_impact_.get();
    } else {
      throw UsageError("unknown backend '" + cfg_.backend +
                       "' (expected fixture or live:http)");
    }
    search_ = std::make_unique<CachedSearchBackend>(*search_inner_, cache_);
    impact_ = std::make_unique<CachedImpactBackend>(*impact_inner_, cache_);
  }

  const WorkspaceConfig& config() const { return cfg_; }
  const std::vector<OrganizationRecord>& orgs() const { return orgs_; }
  SearchBackend& search() { return *search_; }
  ImpactBackend& impact() { return *impact_; }
  QueryCache& cache() { return cache_; }

  /// Calls that reached the real backend (cache misses).
  std::int64_t backend_calls() const {
    return search_->inner_calls() + impact_->inner_calls();
  }

  std::vector<std::string> backend_ids() const {
    return {search_->id()};
  }

 private:
  WorkspaceConfig cfg_;
  QueryCache cache_;
  std::vector<OrganizationRecord> orgs_;
  std::unique_ptr<FixtureBackend> fixture_;
  std::unique_ptr<LiveHttpBackend> live_;
  std::unique_ptr<RateLimiter> limiter_;
  std::unique_ptr<RateLimitedSearchBackend> limited_;
  std::unique_ptr<RetryingSearchBackend> retry_search_;
  std::unique_ptr<RetryingImpactBackend> retry_impact_;
  SearchBackend* search_inner_ = nullptr;
  ImpactBackend* impact_inner_ = nullptr;
  std::unique_ptr<CachedSearchBackend> search_;
  std::unique_ptr<CachedImpactBackend> impact_;
};

namespace pipeline_detail {

inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  std::size_t n_threads = std::min<std::size_t>(jobs, count);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

}  // namespace pipeline_detail

// --- stages -----------------------------------------------------------

/// Crawl every organization and write the candidate review queue.
inline std::vector<std::pair<std::string, CrawlResult>> stage_discover(
    Workspace& ws) {
  std::unique_ptr<Fetcher> fetcher;
  if (ws.config().backend == "fixture" ||
      std::filesystem::exists(ws.config().web_dir))
    fetcher = std::make_unique<FixtureFetcher>(ws.config().web_dir);
  else
    fetcher = std::make_unique<LiveFetcher>(ws.config().user_agent,
                                            ws.config().crawl.fetch_timeout);

  std::vector<std::pair<std::string, CrawlResult>> results;
  for (const auto& org : ws.orgs())
    results.emplace_back(
        org.id, crawl_organization(org, ws.config().crawl, *fetcher,
                                   ws.config().user_agent));

  std::string out;
  for (const auto& [org_id, crawl] : results) {
    const OrganizationRecord* org = nullptr;
    for (const auto& o : ws.orgs())
      if (o.id == org_id) org = &o;
    std::set<std::string> corporate;
    for (const auto& d : org->domains)
      if (d.category == Category::Corporate) corporate.insert(d.host);
    for (const auto& cand : crawl.candidates) {
      CategorySuggestion suggestion = suggest_category(cand.host, corporate);
      nlohmann::json j;
      j["org"] = org_id;
      j["host"] = cand.host;
      j["first_seen"] = cand.first_seen;
      j["suggested_category"] = std::string(to_string(suggestion.category));
      j["confidence"] = suggestion.confidence;
      j["needs_review"] = suggestion.confidence < 0.5;
      j["evidence"] = nlohmann::json::array();
      for (const auto& ev : cand.evidence)
        j["evidence"].push_back(
            {{"page", ev.source_page}, {"anchor", ev.anchor}});
      out += j.dump() + "\n";
    }
  }
  pipeline_detail::write_text(ws.config().out_dir / "candidates.jsonl", out);
  return results;
}

/// Impact snapshots for every registered domain, written through the cache.
inline std::map<std::string, ImpactSnapshot> stage_measure(Workspace& ws) {
  std::set<std::string> host_set;
  for (const auto& org : ws.orgs())
    for (const auto& d : org.domains) host_set.insert(d.host);
  std::vector<std::string> hosts(host_set.begin(), host_set.end());

  std::vector<ImpactSnapshot> snapshots(hosts.size());
  pipeline_detail::parallel_for(hosts.size(), ws.config().jobs,
                                [&](std::size_t i) {
                                  snapshots[i] = ws.impact().impact(hosts[i]);
                                });
  std::map<std::string, ImpactSnapshot> by_host;
  std::string out;
  for (const auto& s : snapshots) {
    by_host[s.host] = s;
    nlohmann::json j = snapshot_to_value(s);
    j["host"] = s.host;
    j["captured_at"] = s.captured_at;
    j["backend_id"] = s.backend_id;
    out += j.dump() + "\n";
  }
  pipeline_detail::write_text(ws.config().out_dir / "snapshots.jsonl", out);
  return by_host;
}

struct MentionStage {
  struct OrgEdges {
    std::string org_id;
    bool skipped = false;
    int domain_count = 0;
    std::vector<std::string> hosts;
    std::vector<MentionEdge> edges;
  };
  std::vector<OrgEdges> orgs;
};

/// Pairwise mention queries for every eligible organization.
inline MentionStage stage_mentions(Workspace& ws) {
  MentionStage stage;
  for (const auto& org : ws.orgs()) {
    MentionStage::OrgEdges entry;
    entry.org_id = org.id;
    entry.domain_count = static_cast<int>(org.domains.size());
    auto plan = build_query_plan(org, ws.config().min_domains);
    if (!plan) {
      entry.skipped = true;
      stage.orgs.push_back(std::move(entry));
      continue;
    }
    std::set<std::string> domains;
    for (const auto& d : org.domains) domains.insert(d.host);
    entry.hosts.assign(domains.begin(), domains.end());
    entry.edges.resize(plan->pairs.size());
    pipeline_detail::parallel_for(
        plan->pairs.size(), ws.config().jobs, [&](std::size_t i) {
          entry.edges[i] =
              corrected_mention_count(plan->pairs[i].first,
                                      plan->pairs[i].second, domains,
                                      ws.search());
        });
    stage.orgs.push_back(std::move(entry));
  }
  for (const auto& entry : stage.orgs) {
    if (entry.skipped) continue;
    pipeline_detail::write_text(
        ws.config().out_dir / "mentions" / (entry.org_id + "_edges.csv"),
        to_edge_csv(entry.edges));
  }
  return stage;
}

/// Graphs plus node/network indicators for every eligible organization.
inline std::vector<OrgNetworkResult> stage_graph(Workspace& ws,
                                                 const MentionStage& mentions) {
  std::vector<OrgNetworkResult> networks;
  for (const auto& entry : mentions.orgs) {
    OrgNetworkResult net;
    net.org_id = entry.org_id;
    net.skipped = entry.skipped;
    net.domain_count = entry.domain_count;
    if (!entry.skipped) {
      net.graph = build_domain_graph(entry.hosts, entry.edges);
      net.edges = entry.edges;
      net.nodes = node_metrics(net.graph, ws.config().jobs);
      net.network = network_metrics(net.graph);
      const OrganizationRecord* org = nullptr;
      for (const auto& o : ws.orgs())
        if (o.id == entry.org_id) org = &o;
      if (org && org->corporate())
        net.corporate_intensity =
            intensity_totals(net.graph, org->corporate()->host);
    }
    networks.push_back(std::move(net));
  }
  return networks;
}

/// Ten-column indicator matrix over every analyzed node.
inline IndicatorMatrix build_indicator_matrix(
    const std::map<std::string, ImpactSnapshot>& snapshots,
    const std::vector<OrgNetworkResult>& networks) {
  IndicatorMatrix m;
  m.columns = {"Pco", "Alexa", "OSE", "Aut", "InD",
               "OutD", "Clo", "Bet", "Cco", "Eve"};
  for (const auto& net : networks) {
    if (net.skipped) continue;
    for (const auto& nm : net.nodes) {
      std::vector<std::optional<double>> row(10);
      auto snap = snapshots.find(nm.host);
      if (snap != snapshots.end()) {
        const ImpactSnapshot& s = snap->second;
        if (s.page_count) row[0] = static_cast<double>(*s.page_count);
        if (s.sites_linking_in)
          row[1] = static_cast<double>(*s.sites_linking_in);
        if (s.root_domains_linking)
          row[2] = static_cast<double>(*s.root_domains_linking);
        row[3] = s.authority;
      }
      row[4] = nm.in_degree;
      row[5] = nm.out_degree;
      row[6] = nm.closeness;
      row[7] = nm.betweenness;
      row[8] = nm.clustering;
      row[9] = nm.eigenvector;
      m.row_ids.push_back(nm.host);
      m.values.push_back(std::move(row));
    }
  }
  return m;
}

struct StatsStage {
  std::optional<CorrelationResult> correlation;
  std::optional<PcaResult> pca;
  std::vector<std::string> warnings;
};

inline StatsStage stage_stats(Workspace& ws, const IndicatorMatrix& matrix) {
  StatsStage stage;
  pipeline_detail::write_text(ws.config().out_dir / "indicators.csv",
                              indicator_matrix_to_csv(matrix));
  if (matrix.rows() < 3) {
    stage.warnings.push_back(
        "statistics skipped: fewer than 3 analyzed nodes");
    return stage;
  }
  stage.correlation = spearman(matrix, ws.config().alpha);
  try {
    int k = std::min<int>(ws.config().pca_components,
                          static_cast<int>(matrix.cols()));
    stage.pca = pca_varimax(matrix, k);
  } catch (const SingularMatrix& e) {
    stage.warnings.push_back(std::string("PCA skipped: ") + e.what());
  }
  return stage;
}

struct PipelineOutcome {
  std::int64_t backend_calls = 0;
  std::filesystem::path report_dir;
  int organizations = 0;
  int networks_analyzed = 0;
  int networks_skipped = 0;
};

inline void write_manifest(Workspace& ws, double started_at,
                           double finished_at) {
  // the byte-stable JSON mirror of the registry travels with every run
  pipeline_detail::write_text(ws.config().out_dir / "registry.json",
                              registry_to_json(ws.orgs()));
  nlohmann::json j;
  j["tool"] = "domainscope";
  j["config_hash"] = to_hex(fnv1a64(ws.config().canonical()));
  j["suffix_snapshot"] = std::string(kPslSnapshotVersion);
  j["backend_ids"] = ws.backend_ids();
  j["backend_calls"] = ws.backend_calls();
  j["cache_entries"] = ws.cache().size();
  j["started_at"] = to_iso8601(static_cast<std::int64_t>(started_at));
  j["finished_at"] = to_iso8601(static_cast<std::int64_t>(finished_at));
  pipeline_detail::write_text(ws.config().out_dir / "manifest.json",
                              j.dump(2) + "\n");
}

/// Everything, in order; the report tree is deterministic, the manifest
/// (timestamps, call counts) lives outside it.
inline PipelineOutcome run_pipeline(Workspace& ws, bool with_discover = true,
                                    Clock clock = Clock::system()) {
  double started = clock.now();
  if (with_discover) stage_discover(ws);
  auto snapshots = stage_measure(ws);
  auto mentions = stage_mentions(ws);
  auto networks = stage_graph(ws, mentions);
  auto matrix = build_indicator_matrix(snapshots, networks);
  auto stats = stage_stats(ws, matrix);

  ReportInputs inputs;
  inputs.orgs = ws.orgs();
  inputs.summary = summarize_registry(ws.orgs());
  inputs.snapshots = snapshots;
  inputs.contribution = contribution_table(ws.orgs(), snapshots);
  inputs.performers = best_performers(ws.orgs(), snapshots);
  inputs.networks = networks;
  inputs.correlation = stats.correlation;
  inputs.pca = stats.pca;
  inputs.asymmetry_threshold = ws.config().asymmetry_threshold;
  inputs.suffix_snapshot_version = std::string(kPslSnapshotVersion);
  inputs.backend_ids = ws.backend_ids();
  inputs.warnings = stats.warnings;
  if (auto range = ws.cache().captured_range()) {
    // hit counts drift; flag windows wider than 30 days
    if (from_iso8601(range->second) - from_iso8601(range->first) >
        30 * 86400)
      inputs.warnings.push_back("cache entries span more than 30 days (" +
                                range->first + " .. " + range->second + ")");
  }

  PipelineOutcome outcome;
  outcome.report_dir = ws.config().out_dir / "report";
  render_report(inputs, outcome.report_dir);
  outcome.organizations = static_cast<int>(ws.orgs().size());
  for (const auto& net : networks) {
    if (net.skipped)
      ++outcome.networks_skipped;
    else
      ++outcome.networks_analyzed;
  }
  outcome.backend_calls = ws.backend_calls();
  write_manifest(ws, started, clock.now());
  return outcome;
}

}  // namespace domainscope

// domainscope: discover an organization's additional web domains, measure
// their impact, rebuild the intra-organization URL-mention network, and
// render the full indicator report.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "domainscope/pipeline.hpp"

namespace {

using namespace domainscope;

int run(int argc, char** argv) {
  CLI::App app{"webometric domain toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too

  WorkspaceConfig cfg;
  std::string registry, cache, out = "out";
  std::string backend = "fixture";
  std::string fixture_dir, web_dir, live_endpoint, live_key;

  app.add_option("--registry", registry, "registry file (TOML or JSON)")
      ->required();
  app.add_option("--cache", cache,
                 "query cache path (env DOMAINSCOPE_CACHE overrides)");
  app.add_option("--backend", backend, "fixture or live:http");
  app.add_option("--min-domains", cfg.min_domains,
                 "minimum domains for network analysis");
  app.add_option("--jobs", cfg.jobs, "worker threads");
  app.add_option("--out", out, "output directory");
  app.add_option("--fixture-dir", fixture_dir,
                 "backend fixture records (default: <registry dir>/backend)");
  app.add_option("--web-dir", web_dir,
                 "crawl fixture pages (default: <registry dir>/web)");
  app.add_option("--live-endpoint", live_endpoint,
                 "collector endpoint for live:http");
  app.add_option("--live-key", live_key, "API key passed through to live:http");
  app.add_option("--user-agent", cfg.user_agent, "crawler user agent");
  app.add_option("--max-depth", cfg.crawl.max_depth, "crawl depth");
  app.add_option("--max-pages", cfg.crawl.max_pages_per_domain,
                 "page budget per domain");
  app.add_option("--alpha", cfg.alpha, "significance level");
  app.add_option("--pca-components", cfg.pca_components, "PCA components");
  app.add_option("--seed", cfg.seed, "seed for retry jitter");
  app.add_flag("!--no-robots", cfg.crawl.obey_robots, "ignore robots.txt");
  app.add_flag("!--no-sitemaps", cfg.crawl.include_sitemaps,
               "skip sitemap.xml");

  auto* discover = app.add_subcommand("discover", "crawl for candidate domains");
  auto* measure = app.add_subcommand("measure", "fetch impact snapshots");
  auto* mentions = app.add_subcommand("mentions", "run the pairwise query plan");
  auto* graph = app.add_subcommand("graph", "build graphs and metrics");
  auto* stats = app.add_subcommand("stats", "correlations and PCA");
  auto* report = app.add_subcommand("report", "render every table and export");
  auto* pipeline = app.add_subcommand("pipeline", "all stages in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::fprintf(stderr, "error: code=UsageError msg=\"%s\"\n", e.what());
    std::cerr << app.help();
    return 1;
  }

  cfg.registry_path = registry;
  cfg.cache_path = cache.empty() ? (std::filesystem::path(out) / "cache.jsonl")
                                 : std::filesystem::path(cache);
  cfg.out_dir = out;
  cfg.backend = backend;
  if (!fixture_dir.empty()) cfg.fixture_dir = fixture_dir;
  if (!web_dir.empty()) cfg.web_dir = web_dir;
  cfg.live.base_url = live_endpoint;
  cfg.live.api_key = live_key;

  Clock clock = Clock::system();
  double started = clock.now();
  Workspace ws(cfg);

  if (discover->parsed()) {
    auto results = stage_discover(ws);
    std::size_t total = 0;
    for (const auto& [org, crawl] : results) {
      std::printf("%s: %zu candidates\n", org.c_str(),
                  crawl.candidates.size());
      total += crawl.candidates.size();
    }
    std::printf("wrote %zu candidates to %s\n", total,
                (ws.config().out_dir / "candidates.jsonl").string().c_str());
  } else if (measure->parsed()) {
    auto snapshots = stage_measure(ws);
    std::printf("captured %zu snapshots\n", snapshots.size());
  } else if (mentions->parsed()) {
    auto stage = stage_mentions(ws);
    for (const auto& entry : stage.orgs) {
      if (entry.skipped)
        std::printf("%s: SKIPPED (%d domains, below %d)\n",
                    entry.org_id.c_str(), entry.domain_count,
                    ws.config().min_domains);
      else
        std::printf("%s: %zu pairs\n", entry.org_id.c_str(),
                    entry.edges.size());
    }
  } else if (graph->parsed()) {
    auto stage = stage_mentions(ws);
    auto networks = stage_graph(ws, stage);
    std::filesystem::path report_dir = ws.config().out_dir / "report";
    std::filesystem::create_directories(report_dir / "graphs");
    std::filesystem::create_directories(report_dir / "tables");
    for (const auto& net : networks) {
      if (net.skipped) {
        std::printf("%s: SKIPPED (%d domains, below %d)\n",
                    net.org_id.c_str(), net.domain_count,
                    ws.config().min_domains);
        continue;
      }
      pipeline_detail::write_text(report_dir / "graphs" / (net.org_id + ".net"),
                                  to_net(net.graph));
      pipeline_detail::write_text(
          report_dir / "graphs" / (net.org_id + ".gexf"), to_gexf(net.graph));
      pipeline_detail::write_text(
          report_dir / "tables" / ("node_metrics_" + net.org_id + ".csv"),
          render_node_metrics_csv(net));
      std::printf("%s: n=%d m=%d\n", net.org_id.c_str(), net.network.n,
                  net.network.m);
    }
    pipeline_detail::write_text(report_dir / "tables" / "network_metrics.csv",
                                render_network_metrics_csv(networks));
  } else if (stats->parsed()) {
    auto snapshots = stage_measure(ws);
    auto mention_stage = stage_mentions(ws);
    auto networks = stage_graph(ws, mention_stage);
    auto matrix = build_indicator_matrix(snapshots, networks);
    auto stats_stage = stage_stats(ws, matrix);
    std::filesystem::path tables = ws.config().out_dir / "report" / "tables";
    if (stats_stage.correlation)
      pipeline_detail::write_text(tables / "correlation.csv",
                                  render_correlation_csv(*stats_stage.correlation));
    if (stats_stage.pca)
      pipeline_detail::write_text(tables / "pca.csv",
                                  render_pca_csv(*stats_stage.pca));
    for (const auto& w : stats_stage.warnings)
      std::printf("warning: %s\n", w.c_str());
    std::printf("indicator matrix: %zu rows\n", matrix.rows());
  } else if (report->parsed() || pipeline->parsed()) {
    auto outcome = run_pipeline(ws, pipeline->parsed(), clock);
    std::printf("report: %s\n", outcome.report_dir.string().c_str());
    std::printf("networks: %d analyzed, %d skipped\n",
                outcome.networks_analyzed, outcome.networks_skipped);
    std::printf("backend calls: %lld\n",
                static_cast<long long>(outcome.backend_calls));
    return 0;  // manifest written inside run_pipeline
  }

  write_manifest(ws, started, clock.now());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const domainscope::Error& e) {
    std::fprintf(stderr, "error: code=%s msg=\"%s\"\n", e.code().c_str(),
                 e.what());
    return e.kind() == domainscope::Error::Kind::Backend ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: code=Internal msg=\"%s\"\n", e.what());
    return 1;
  }
}

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "domainscope/backend.hpp"
#include "domainscope/errors.hpp"
#include "domainscope/graph.hpp"
#include "domainscope/graphio.hpp"
#include "domainscope/metrics.hpp"
#include "domainscope/registry.hpp"
#include "domainscope/stats.hpp"
#include "domainscope/text.hpp"

namespace domainscope {

struct ContributionRow {
  std::string org_id;
  std::int64_t corporate_page_count = 0;
  std::int64_t total_page_count = 0;
  std::optional<double> percentage;  // missing when total is 0
  int missing_page_counts = 0;       // domains treated as 0 in the total
};

/// Corporate share of each organization's total indexed pages. Rows sort
/// ascending by percentage (missing rows last); rounding happens at render
/// time only.
inline std::vector<ContributionRow> contribution_table(
    const std::vector<OrganizationRecord>& orgs,
    const std::map<std::string, ImpactSnapshot>& snapshots) {
  std::vector<ContributionRow> rows;
  for (const auto& org : orgs) {
    const WebDomainRecord* corp = org.corporate();
    if (!corp)
      throw MissingCorporateSnapshot("no corporate domain for " + org.id);
    auto corp_snap = snapshots.find(corp->host);
    if (corp_snap == snapshots.end() || !corp_snap->second.page_count)
      throw MissingCorporateSnapshot("no page count for " + corp->host);
    ContributionRow row;
    row.org_id = org.id;
    row.corporate_page_count = *corp_snap->second.page_count;
    for (const auto& d : org.domains) {
      auto it = snapshots.find(d.host);
      if (it == snapshots.end() || !it->second.page_count) {
        ++row.missing_page_counts;
        continue;
      }
      row.total_page_count += *it->second.page_count;
    }
    if (row.total_page_count > 0)
      row.percentage = 100.0 * static_cast<double>(row.corporate_page_count) /
                       static_cast<double>(row.total_page_count);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const ContributionRow& a, const ContributionRow& b) {
              if (a.percentage && b.percentage) {
                if (*a.percentage != *b.percentage)
                  return *a.percentage < *b.percentage;
                return a.org_id < b.org_id;
              }
              if (a.percentage != b.percentage) return bool(a.percentage);
              return a.org_id < b.org_id;
            });
  return rows;
}

enum class ImpactIndicator { PageCount, SitesLinkingIn, RootDomains, Authority };

inline constexpr std::array<ImpactIndicator, 4> kImpactIndicators = {
    ImpactIndicator::PageCount, ImpactIndicator::SitesLinkingIn,
    ImpactIndicator::RootDomains, ImpactIndicator::Authority};

inline constexpr std::string_view to_string(ImpactIndicator i) {
  switch (i) {
    case ImpactIndicator::PageCount:      return "page_count";
    case ImpactIndicator::SitesLinkingIn: return "sites_linking_in";
    case ImpactIndicator::RootDomains:    return "root_domains_linking";
    case ImpactIndicator::Authority:      return "authority";
  }
  return "";
}

inline std::optional<double> indicator_value(const ImpactSnapshot& s,
                                             ImpactIndicator which) {
  switch (which) {
    case ImpactIndicator::PageCount:
      return s.page_count ? std::optional<double>(*s.page_count) : std::nullopt;
    case ImpactIndicator::SitesLinkingIn:
      return s.sites_linking_in ? std::optional<double>(*s.sites_linking_in)
                                : std::nullopt;
    case ImpactIndicator::RootDomains:
      return s.root_domains_linking
                 ? std::optional<double>(*s.root_domains_linking)
                 : std::nullopt;
    case ImpactIndicator::Authority:
      return s.authority;
  }
  return std::nullopt;
}

struct BestPerformerTally {
  // counts[category][indicator]: organizations whose top domain on that
  // indicator belongs to that category
  std::array<std::array<int, 4>, 8> counts{};
  std::array<int, 4> denominators{};  // orgs with data on each indicator
};

/// Per organization and indicator, the arg-max domain's category. Ties go to
/// the corporate domain, then lexicographically smallest host.
inline BestPerformerTally best_performers(
    const std::vector<OrganizationRecord>& orgs,
    const std::map<std::string, ImpactSnapshot>& snapshots) {
  BestPerformerTally tally;
  for (const auto& org : orgs) {
    for (size_t ix = 0; ix < kImpactIndicators.size(); ++ix) {
      const WebDomainRecord* best = nullptr;
      std::optional<double> best_value;
      for (const auto& d : org.domains) {
        auto it = snapshots.find(d.host);
        if (it == snapshots.end()) continue;
        auto value = indicator_value(it->second, kImpactIndicators[ix]);
        if (!value) continue;
        bool wins = false;
        if (!best_value || *value > *best_value) {
          wins = true;
        } else if (*value == *best_value && best) {
          bool cand_corp = d.category == Category::Corporate;
          bool best_corp = best->category == Category::Corporate;
          if (cand_corp != best_corp)
            wins = cand_corp;
          else
            wins = d.host < best->host;
        }
        if (wins) {
          best = &d;
          best_value = value;
        }
      }
      if (best) {
        ++tally.counts[static_cast<size_t>(best->category)][ix];
        ++tally.denominators[ix];
      }
    }
  }
  return tally;
}

// --- rendering --------------------------------------------------------

struct OrgNetworkResult {
  std::string org_id;
  bool skipped = false;
  int domain_count = 0;
  DomainGraph graph;
  std::vector<MentionEdge> edges;
  std::vector<NodeMetrics> nodes;
  NetworkMetrics network;
  IntensityTotals corporate_intensity;
};

struct ReportInputs {
  std::vector<OrganizationRecord> orgs;
  RegistrySummary summary;
  std::map<std::string, ImpactSnapshot> snapshots;
  std::vector<ContributionRow> contribution;
  BestPerformerTally performers;
  std::vector<OrgNetworkResult> networks;
  std::optional<CorrelationResult> correlation;
  std::optional<PcaResult> pca;
  int asymmetry_threshold = 10;
  std::string suffix_snapshot_version;
  std::vector<std::string> backend_ids;
  std::vector<std::string> warnings;
};

namespace report_detail {

inline std::string opt_fixed(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : std::string(kMissingMark);
}

inline std::string opt_int(const std::optional<std::int64_t>& v) {
  return v ? std::to_string(*v) : std::string(kMissingMark);
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

}  // namespace report_detail

inline std::string render_registry_summary_csv(const RegistrySummary& s) {
  std::string out = "org,sector";
  for (Category c : kAllCategories) out += "," + std::string(short_code(c));
  out += ",total\n";
  for (const auto& oc : s.per_org) {
    out += csv_field(oc.id) + "," + csv_field(oc.sector);
    for (int v : oc.by_category) out += "," + std::to_string(v);
    out += "," + std::to_string(oc.total) + "\n";
  }
  out += "TOTAL,";
  for (int v : s.category_totals) out += "," + std::to_string(v);
  out += "," + std::to_string(s.grand_total) + "\n";
  return out;
}

inline std::string render_contribution_csv(
    const std::vector<ContributionRow>& rows) {
  std::string out = "org,corporate,total,percentage,missing_page_counts\n";
  for (const auto& r : rows) {
    out += csv_field(r.org_id) + "," + std::to_string(r.corporate_page_count) +
           "," + std::to_string(r.total_page_count) + "," +
           report_detail::opt_fixed(r.percentage, 3) + "," +
           std::to_string(r.missing_page_counts) + "\n";
  }
  return out;
}

inline std::string render_best_performers_csv(const BestPerformerTally& t) {
  std::string out = "category,page_count,alexa,ose,authority,total\n";
  for (Category c : kAllCategories) {
    size_t ci = static_cast<size_t>(c);
    int row_total = 0;
    out += std::string(to_string(c));
    for (size_t ix = 0; ix < 4; ++ix) {
      out += "," + std::to_string(t.counts[ci][ix]);
      row_total += t.counts[ci][ix];
    }
    out += "," + std::to_string(row_total) + "\n";
  }
  out += "ORGS_WITH_DATA";
  int denom_total = 0;
  for (size_t ix = 0; ix < 4; ++ix) {
    out += "," + std::to_string(t.denominators[ix]);
    denom_total += t.denominators[ix];
  }
  out += "," + std::to_string(denom_total) + "\n";
  return out;
}

inline std::string render_network_metrics_csv(
    const std::vector<OrgNetworkResult>& networks) {
  std::string out =
      "org,n,m,average_degree,diameter,density,average_clustering,"
      "average_path_length,status\n";
  for (const auto& net : networks) {
    if (net.skipped) {
      out += csv_field(net.org_id) + "," + std::to_string(net.domain_count) +
             ",,,,,,,skipped\n";
      continue;
    }
    const NetworkMetrics& nm = net.network;
    std::optional<double> diameter =
        nm.diameter ? std::optional<double>(*nm.diameter) : std::nullopt;
    out += csv_field(net.org_id) + "," + std::to_string(nm.n) + "," +
           std::to_string(nm.m) + "," + format_fixed(nm.average_degree, 3) +
           "," + report_detail::opt_fixed(diameter, 3) + "," +
           format_fixed(nm.density, 3) + "," +
           report_detail::opt_fixed(nm.average_clustering, 3) + "," +
           report_detail::opt_fixed(nm.average_path_length, 3) + ",ok\n";
  }
  return out;
}

/// One row per node with the eight node fields, then one NETWORK summary row
/// with the five network fields.
inline std::string render_node_metrics_csv(const OrgNetworkResult& net) {
  std::string out =
      "host,in_degree,out_degree,degree,asymmetry,betweenness,closeness,"
      "eigenvector,clustering_coefficient\n";
  for (const auto& nm : net.nodes) {
    out += csv_field(nm.host) + "," + std::to_string(nm.in_degree) + "," +
           std::to_string(nm.out_degree) + "," + std::to_string(nm.degree) +
           "," + std::to_string(nm.asymmetry) + "," +
           format_fixed(nm.betweenness, 3) + "," +
           report_detail::opt_fixed(nm.closeness, 3) + "," +
           report_detail::opt_fixed(nm.eigenvector, 3) + "," +
           report_detail::opt_fixed(nm.clustering, 3) + "\n";
  }
  const NetworkMetrics& nm = net.network;
  std::optional<double> diameter =
      nm.diameter ? std::optional<double>(*nm.diameter) : std::nullopt;
  out += "NETWORK," + format_fixed(nm.average_degree, 3) + "," +
         report_detail::opt_fixed(diameter, 3) + "," +
         format_fixed(nm.density, 3) + "," +
         report_detail::opt_fixed(nm.average_clustering, 3) + "," +
         report_detail::opt_fixed(nm.average_path_length, 3) + ",,,\n";
  return out;
}

inline std::string render_asymmetry_csv(
    const std::vector<OrgNetworkResult>& networks, int threshold) {
  std::string out = "org,host,asymmetry,side\n";
  for (const auto& net : networks) {
    if (net.skipped) continue;
    AsymmetryReport rep = asymmetry_report(net.nodes, threshold);
    for (const auto& nm : rep.authorities)
      out += csv_field(net.org_id) + "," + csv_field(nm.host) + "," +
             std::to_string(nm.asymmetry) + ",authority\n";
    for (const auto& nm : rep.hubs)
      out += csv_field(net.org_id) + "," + csv_field(nm.host) + "," +
             std::to_string(nm.asymmetry) + ",hub\n";
  }
  return out;
}

inline std::string render_intensity_csv(
    const std::vector<OrgNetworkResult>& networks) {
  std::string out =
      "org,corporate_host,as_target,as_source,top_target,top_source,"
      "top_count\n";
  for (const auto& net : networks) {
    if (net.skipped) continue;
    const IntensityTotals& t = net.corporate_intensity;
    out += csv_field(net.org_id) + "," + csv_field(t.host) + "," +
           std::to_string(t.as_target_total) + "," +
           std::to_string(t.as_source_total) + ",";
    if (t.top_pair)
      out += csv_field(t.top_pair->target) + "," +
             csv_field(t.top_pair->source) + "," +
             std::to_string(t.top_pair->count);
    else
      out += std::string(kMissingMark) + "," + kMissingMark + "," +
             kMissingMark;
    out += "\n";
  }
  return out;
}

/// Correlation matrix, 2 decimals, `**` prefix on significant cells.
inline std::string render_correlation_csv(const CorrelationResult& c) {
  std::string out = "indicator";
  for (const auto& col : c.columns) out += "," + csv_field(col);
  out += "\n";
  for (size_t i = 0; i < c.columns.size(); ++i) {
    out += csv_field(c.columns[i]);
    for (size_t j = 0; j < c.columns.size(); ++j) {
      out += ",";
      if (j > i) continue;  // lower triangle, matching the table shape
      if (!c.rho[i][j]) {
        out += kMissingMark;
        continue;
      }
      std::string cell = format_fixed(*c.rho[i][j], 2);
      if (i != j && c.significant[i][j]) cell = "**" + cell;
      out += cell;
    }
    out += "\n";
  }
  return out;
}

inline std::string render_pca_csv(const PcaResult& p) {
  std::string out = "indicator";
  for (int j = 0; j < p.components; ++j)
    out += ",loading_" + std::to_string(j + 1);
  for (int j = 0; j < p.components; ++j)
    out += ",rotated_" + std::to_string(j + 1);
  out += "\n";
  for (size_t i = 0; i < p.columns.size(); ++i) {
    out += csv_field(p.columns[i]);
    for (int j = 0; j < p.components; ++j)
      out += "," + format_fixed(p.loadings[i][j], 3);
    for (int j = 0; j < p.components; ++j)
      out += "," + format_fixed(p.rotated_loadings[i][j], 3);
    out += "\n";
  }
  out += "EXPLAINED";
  for (int j = 0; j < p.components; ++j)
    out += "," + format_fixed(p.explained[j], 3);
  for (int j = 0; j < p.components; ++j) out += ",";
  out += "\n";
  return out;
}

inline std::string render_summary_text(const ReportInputs& in) {
  std::string out;
  out += "domainscope report\n";
  out += "==================\n\n";
  out += "suffix snapshot: " + in.suffix_snapshot_version + "\n";
  out += "backends: " + join(in.backend_ids, ", ") + "\n";
  out += "organizations: " + std::to_string(in.orgs.size()) + "\n";
  out += "domains: " + std::to_string(in.summary.grand_total) + "\n";
  out += "mean domains per organization: " +
         format_fixed(in.summary.mean_domains, 3) + "\n";
  out += "population std dev: " + format_fixed(in.summary.stddev_domains, 3) +
         "\n\n";
  int analyzed = 0, skipped = 0;
  for (const auto& net : in.networks) {
    if (net.skipped)
      ++skipped;
    else
      ++analyzed;
  }
  out += "networks analyzed: " + std::to_string(analyzed) + "\n";
  for (const auto& net : in.networks) {
    if (net.skipped)
      out += "  SKIPPED " + net.org_id + " (" +
             std::to_string(net.domain_count) + " domains, below minimum)\n";
  }
  out += "\n";
  int exceed = 0, nodes_total = 0;
  for (const auto& net : in.networks) {
    if (net.skipped) continue;
    for (const auto& nm : net.nodes) {
      ++nodes_total;
      if (std::abs(nm.asymmetry) > in.asymmetry_threshold) ++exceed;
    }
  }
  if (nodes_total > 0)
    out += "degree asymmetry > " + std::to_string(in.asymmetry_threshold) +
           ": " + std::to_string(exceed) + " of " +
           std::to_string(nodes_total) + " nodes (" +
           format_fixed(100.0 * exceed / nodes_total, 1) + "%)\n";
  out += "missing handling: Spearman pairwise-complete, PCA listwise-complete\n";
  out += "tie policy: best-performer ties go to the corporate domain, then "
         "lexicographic\n";
  int missing_counts = 0;
  for (const auto& row : in.contribution) missing_counts += row.missing_page_counts;
  if (missing_counts > 0)
    out += "page counts missing (treated as 0 in totals): " +
           std::to_string(missing_counts) + "\n";
  for (const auto& w : in.warnings) out += "warning: " + w + "\n";
  return out;
}

/// Writes the full report tree: tables/, graphs/ and summary.txt. Same
/// inputs produce byte-identical trees.
inline void render_report(const ReportInputs& in,
                          const std::filesystem::path& report_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(report_dir / "tables");
  fs::create_directories(report_dir / "graphs");
  using report_detail::write_file;
  write_file(report_dir / "tables" / "registry_summary.csv",
             render_registry_summary_csv(in.summary));
  write_file(report_dir / "tables" / "contribution.csv",
             render_contribution_csv(in.contribution));
  write_file(report_dir / "tables" / "best_performers.csv",
             render_best_performers_csv(in.performers));
  write_file(report_dir / "tables" / "network_metrics.csv",
             render_network_metrics_csv(in.networks));
  write_file(report_dir / "tables" / "asymmetry.csv",
             render_asymmetry_csv(in.networks, in.asymmetry_threshold));
  write_file(report_dir / "tables" / "intensity.csv",
             render_intensity_csv(in.networks));
  for (const auto& net : in.networks) {
    if (net.skipped) continue;
    write_file(report_dir / "tables" / ("node_metrics_" + net.org_id + ".csv"),
               render_node_metrics_csv(net));
    write_file(report_dir / "graphs" / (net.org_id + ".net"), to_net(net.graph));
    write_file(report_dir / "graphs" / (net.org_id + ".gexf"),
               to_gexf(net.graph));
    write_file(report_dir / "graphs" / (net.org_id + "_edges.csv"),
               to_edge_csv(net.edges));
  }
  if (in.correlation)
    write_file(report_dir / "tables" / "correlation.csv",
               render_correlation_csv(*in.correlation));
  if (in.pca)
    write_file(report_dir / "tables" / "pca.csv", render_pca_csv(*in.pca));
  write_file(report_dir / "summary.txt", render_summary_text(in));
}

}  // namespace domainscope

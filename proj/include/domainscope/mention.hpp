#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "domainscope/backend.hpp"
#include "domainscope/graph.hpp"
#include "domainscope/registry.hpp"

namespace domainscope {

enum class CollisionKind { None, SelfPrefix, SiblingPrefix };

inline constexpr std::string_view to_string(CollisionKind k) {
  switch (k) {
    case CollisionKind::None:          return "NONE";
    case CollisionKind::SelfPrefix:    return "SELF_PREFIX";
    case CollisionKind::SiblingPrefix: return "SIBLING_PREFIX";
  }
  return "NONE";
}

/// One measured target<-source URL mention. Direction convention: the arc in
/// the graph runs source -> target (source acts as hub, target as authority).
struct MentionEdge {
  std::string source;  // site-restricted domain (the page host)
  std::string target;  // quoted, mentioned domain
  std::int64_t raw_hce = 0;
  std::int64_t sibling_overcount = 0;
  std::int64_t corrected_hce = 0;
  CollisionKind collision = CollisionKind::None;
  bool reliable = true;

  bool has_collision() const { return collision != CollisionKind::None; }
};

struct QueryPlan {
  std::string org_id;
  // ordered (target, source) pairs, lexicographic
  std::vector<std::pair<std::string, std::string>> pairs;
  std::int64_t total_queries = 0;  // n * (n - 1)
};

/// True when `candidate` extends `host` past a label boundary, i.e. the raw
/// string "host" occurs inside every occurrence of "candidate".
inline bool label_boundary_prefix(std::string_view host,
                                  std::string_view candidate) {
  return candidate.size() > host.size() &&
         candidate.substr(0, host.size()) == host &&
         candidate[host.size()] == '.';
}

/// All ordered pairs over the organization's domains, or nullopt (skipped)
/// below the minimum viable network size.
inline std::optional<QueryPlan> build_query_plan(const OrganizationRecord& org,
                                                 int min_domains = 10) {
  const std::int64_t n = static_cast<std::int64_t>(org.domains.size());
  if (n < min_domains) return std::nullopt;
  std::vector<std::string> hosts;
  hosts.reserve(org.domains.size());
  for (const auto& d : org.domains) hosts.push_back(d.host);
  std::sort(hosts.begin(), hosts.end());
  QueryPlan plan;
  plan.org_id = org.id;
  plan.total_queries = n * (n - 1);
  for (const auto& target : hosts)
    for (const auto& source : hosts)
      if (target != source) plan.pairs.emplace_back(target, source);
  return plan;
}

/// Syntax-collision classification for the pair (target, source) within the
/// organization's sibling set. SELF_PREFIX cannot be corrected; the sibling
/// case can, by subtraction.
inline CollisionKind detect_collision(const std::string& target,
                                      const std::string& source,
                                      const std::set<std::string>& siblings) {
  if (label_boundary_prefix(target, source)) return CollisionKind::SelfPrefix;
  for (const auto& s : siblings) {
    if (s == source || s == target) continue;
    if (label_boundary_prefix(target, s)) return CollisionKind::SiblingPrefix;
  }
  return CollisionKind::None;
}

/// Measures one pair: raw estimate for `"target" site:source`, minus the
/// estimates of every sibling whose host string swallows the target string.
/// An absent raw estimate or any sibling failure makes the edge unreliable.
inline MentionEdge corrected_mention_count(const std::string& target,
                                           const std::string& source,
                                           const std::set<std::string>& siblings,
                                           SearchBackend& backend) {
  MentionEdge edge;
  edge.source = source;
  edge.target = target;
  edge.collision = detect_collision(target, source, siblings);

  HitCount raw = backend.hit_count({target, source});
  if (raw.value) {
    edge.raw_hce = *raw.value;
  } else {
    edge.raw_hce = 0;
    edge.reliable = false;
  }

  for (const auto& s : siblings) {
    if (s == source || s == target) continue;
    if (!label_boundary_prefix(target, s)) continue;
    HitCount over = backend.hit_count({s, source});
    if (over.value)
      edge.sibling_overcount += *over.value;
    else
      edge.reliable = false;
  }

  edge.corrected_hce = std::max<std::int64_t>(
      0, edge.raw_hce - edge.sibling_overcount);
  // Self-mention contamination cannot be isolated: the counts stay, the
  // edge is flagged.
  if (edge.collision == CollisionKind::SelfPrefix) edge.reliable = false;
  return edge;
}

/// Executes a plan. Results are positional, so any parallel execution yields
/// the same edge order.
inline std::vector<MentionEdge> execute_query_plan(const QueryPlan& plan,
                                                   SearchBackend& backend) {
  std::set<std::string> domains;
  for (const auto& [t, s] : plan.pairs) {
    domains.insert(t);
    domains.insert(s);
  }
  std::vector<MentionEdge> edges(plan.pairs.size());
  for (size_t i = 0; i < plan.pairs.size(); ++i)
    edges[i] = corrected_mention_count(plan.pairs[i].first,
                                       plan.pairs[i].second, domains, backend);
  return edges;
}

/// Materializes the directed graph: every plan domain is a node, an arc
/// source -> target exists iff the corrected estimate is positive.
inline DomainGraph build_domain_graph(const std::vector<std::string>& hosts,
                                      const std::vector<MentionEdge>& edges) {
  std::vector<std::string> sorted = hosts;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<std::string, int> index;
  for (size_t i = 0; i < sorted.size(); ++i) index[sorted[i]] = static_cast<int>(i);

  std::set<std::pair<std::string, std::string>> seen;
  std::vector<DomainGraph::Arc> arcs;
  for (const auto& e : edges) {
    if (e.source == e.target)
      throw UsageError("self-pair in edge list: " + e.source);
    if (!seen.insert({e.source, e.target}).second)
      throw DuplicateEdge(e.source + " -> " + e.target);
    if (e.corrected_hce <= 0) continue;
    auto si = index.find(e.source);
    auto ti = index.find(e.target);
    if (si == index.end() || ti == index.end())
      throw UsageError("edge endpoint not in node list: " + e.source + " -> " +
                       e.target);
    arcs.push_back({si->second, ti->second, e.corrected_hce, e.reliable});
  }
  return DomainGraph(std::move(sorted), std::move(arcs));
}

}  // namespace domainscope

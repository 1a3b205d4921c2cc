#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "domainscope/errors.hpp"
#include "domainscope/graph.hpp"

namespace domainscope {

struct NodeMetrics {
  std::string host;
  int in_degree = 0;
  int out_degree = 0;
  int degree = 0;     // in + out
  int asymmetry = 0;  // in - out; positive = authority, negative = hub
  double betweenness = 0.0;
  std::optional<double> closeness;    // mean distance to reached nodes
  std::optional<double> eigenvector;  // scaled to max 1
  std::optional<double> clustering;   // undirected neighborhood projection
};

struct NetworkMetrics {
  int n = 0;
  int m = 0;
  double average_degree = 0.0;  // m / n
  std::optional<int> diameter;
  double density = 0.0;  // m / (n (n-1))
  std::optional<double> average_clustering;
  std::optional<double> average_path_length;
};

struct IntensityTotals {
  std::string host;
  std::int64_t as_target_total = 0;  // weight into host, reliable arcs
  std::int64_t as_source_total = 0;  // weight out of host, reliable arcs
  struct TopPair {
    std::string target;
    std::string source;
    std::int64_t count = 0;
  };
  std::optional<TopPair> top_pair;  // heaviest reliable arc graph-wide
};

namespace metrics_detail {

// Single-source BFS; distances of -1 mean unreachable.
inline std::vector<int> bfs_distances(const DomainGraph& g, int source) {
  std::vector<int> dist(g.n(), -1);
  dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : g.out(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

// Brandes' dependency accumulation for one source; adds into `between`.
inline void brandes_from(const DomainGraph& g, int source,
                         std::vector<double>& between) {
  const int n = g.n();
  std::vector<std::vector<int>> pred(n);
  std::vector<double> sigma(n, 0.0);
  std::vector<int> dist(n, -1);
  std::vector<int> order;
  order.reserve(n);
  sigma[source] = 1.0;
  dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (int w : g.out(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
      if (dist[w] == dist[v] + 1) {
        sigma[w] += sigma[v];
        pred[w].push_back(v);
      }
    }
  }
  std::vector<double> delta(n, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int w = *it;
    for (int v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
    if (w != source) between[w] += delta[w];
  }
}

// Power iteration on incoming arcs; max-normalized every step. When the
// iterate collapses to zero (nilpotent structure) the previous vector is
// kept so the max-1 convention survives.
inline std::vector<double> eigenvector_centrality(const DomainGraph& g,
                                                  int max_iter = 100,
                                                  double tol = 1e-9) {
  const int n = g.n();
  std::vector<double> x(n, 1.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<double> y(n, 0.0);
    for (int v = 0; v < n; ++v)
      for (int u : g.in(v)) y[v] += x[u];
    double max = 0.0;
    for (double v : y) max = std::max(max, v);
    if (max <= 0.0) return x;
    double delta = 0.0;
    for (int v = 0; v < n; ++v) {
      y[v] /= max;
      delta = std::max(delta, std::abs(y[v] - x[v]));
    }
    x = std::move(y);
    if (delta < tol) break;
  }
  return x;
}

inline std::vector<std::set<int>> undirected_neighbors(const DomainGraph& g) {
  std::vector<std::set<int>> nb(g.n());
  for (const auto& a : g.arcs()) {
    nb[a.src].insert(a.dst);
    nb[a.dst].insert(a.src);
  }
  return nb;
}

}  // namespace metrics_detail

/// All node-level indicators. Betweenness uses unnormalized directed pair
/// counts; closeness is the mean distance to reachable nodes (lower is
/// better); eigenvector runs on incoming arcs, scaled to max 1; clustering
/// uses the undirected projection. Undefined values are missing, not zero.
inline std::vector<NodeMetrics> node_metrics(const DomainGraph& g,
                                             int jobs = 1) {
  const int n = g.n();
  if (n < 1) throw UsageError("metrics need at least one node");
  std::vector<NodeMetrics> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].host = g.host(i);
    out[i].in_degree = static_cast<int>(g.in(i).size());
    out[i].out_degree = static_cast<int>(g.out(i).size());
    out[i].degree = out[i].in_degree + out[i].out_degree;
    out[i].asymmetry = out[i].in_degree - out[i].out_degree;
  }

  // betweenness: per-source accumulations, summed in fixed source order
  if (jobs > 1 && n > 1) {
    std::vector<std::vector<double>> partial(
        n, std::vector<double>(n, 0.0));
    std::atomic<int> next{0};
    auto worker = [&] {
      while (true) {
        int s = next.fetch_add(1);
        if (s >= n) break;
        metrics_detail::brandes_from(g, s, partial[s]);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (int s = 0; s < n; ++s)
      for (int v = 0; v < n; ++v) out[v].betweenness += partial[s][v];
  } else {
    std::vector<double> between(n, 0.0);
    for (int s = 0; s < n; ++s) metrics_detail::brandes_from(g, s, between);
    for (int v = 0; v < n; ++v) out[v].betweenness = between[v];
  }

  for (int i = 0; i < n; ++i) {
    auto dist = metrics_detail::bfs_distances(g, i);
    long long total = 0;
    int reached = 0;
    for (int v = 0; v < n; ++v) {
      if (v != i && dist[v] > 0) {
        total += dist[v];
        ++reached;
      }
    }
    if (reached > 0)
      out[i].closeness = static_cast<double>(total) / reached;
  }

  if (g.m() > 0) {
    auto eigen = metrics_detail::eigenvector_centrality(g);
    for (int i = 0; i < n; ++i) out[i].eigenvector = eigen[i];
  }

  auto nb = metrics_detail::undirected_neighbors(g);
  for (int i = 0; i < n; ++i) {
    const auto& neighbors = nb[i];
    size_t k = neighbors.size();
    if (k < 2) continue;
    int links = 0;
    for (int u : neighbors)
      for (int v : nb[u])
        if (v != i && neighbors.count(v)) ++links;
    // every undirected pair counted twice in the scan above
    out[i].clustering =
        static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
  }
  return out;
}

/// Network-level indicators. Path statistics run over reachable ordered
/// pairs only; average clustering is over nodes with >= 2 neighbors.
inline NetworkMetrics network_metrics(const DomainGraph& g) {
  NetworkMetrics nm;
  nm.n = g.n();
  nm.m = g.m();
  if (nm.n < 1) throw UsageError("metrics need at least one node");
  nm.average_degree = static_cast<double>(nm.m) / nm.n;
  nm.density = nm.n >= 2 ? static_cast<double>(nm.m) /
                               (static_cast<double>(nm.n) * (nm.n - 1))
                         : 0.0;

  long long pair_total = 0;
  long long pair_count = 0;
  int diameter = 0;
  for (int s = 0; s < nm.n; ++s) {
    auto dist = metrics_detail::bfs_distances(g, s);
    for (int v = 0; v < nm.n; ++v) {
      if (v == s || dist[v] < 0) continue;
      pair_total += dist[v];
      ++pair_count;
      diameter = std::max(diameter, dist[v]);
    }
  }
  if (pair_count > 0) {
    nm.diameter = diameter;
    nm.average_path_length = static_cast<double>(pair_total) / pair_count;
  }

  auto nodes = node_metrics(g);
  double cc_total = 0;
  int cc_count = 0;
  for (const auto& nmx : nodes) {
    if (nmx.clustering) {
      cc_total += *nmx.clustering;
      ++cc_count;
    }
  }
  if (cc_count > 0) nm.average_clustering = cc_total / cc_count;
  return nm;
}

struct AsymmetryReport {
  std::vector<NodeMetrics> authorities;  // asymmetry > threshold, |a| desc
  std::vector<NodeMetrics> hubs;         // asymmetry < -threshold, |a| desc
  double exceedance_fraction = 0.0;      // |asymmetry| > threshold over all
};

inline AsymmetryReport asymmetry_report(const std::vector<NodeMetrics>& nodes,
                                        int threshold) {
  if (threshold < 0) throw UsageError("threshold must be >= 0");
  AsymmetryReport rep;
  int exceed = 0;
  for (const auto& nm : nodes) {
    if (nm.asymmetry > threshold) rep.authorities.push_back(nm);
    if (nm.asymmetry < -threshold) rep.hubs.push_back(nm);
    if (std::abs(nm.asymmetry) > threshold) ++exceed;
  }
  auto by_magnitude = [](const NodeMetrics& a, const NodeMetrics& b) {
    int ma = std::abs(a.asymmetry), mb = std::abs(b.asymmetry);
    return ma != mb ? ma > mb : a.host < b.host;
  };
  std::sort(rep.authorities.begin(), rep.authorities.end(), by_magnitude);
  std::sort(rep.hubs.begin(), rep.hubs.end(), by_magnitude);
  if (!nodes.empty())
    rep.exceedance_fraction =
        static_cast<double>(exceed) / static_cast<double>(nodes.size());
  return rep;
}

/// Mention-intensity sums for one node over the reliable arc subset, plus
/// the heaviest reliable arc in the whole graph (ties: lexicographic by
/// (source, target)).
inline IntensityTotals intensity_totals(const DomainGraph& g,
                                        const std::string& focus) {
  auto idx = g.index(focus);
  if (!idx) throw HostNotInGraph(focus);
  IntensityTotals totals;
  totals.host = focus;
  for (const auto& a : g.arcs()) {
    if (!a.reliable) continue;
    if (a.dst == *idx) totals.as_target_total += a.weight;
    if (a.src == *idx) totals.as_source_total += a.weight;
    if (!totals.top_pair || a.weight > totals.top_pair->count) {
      totals.top_pair = {g.host(a.dst), g.host(a.src), a.weight};
    } else if (a.weight == totals.top_pair->count) {
      auto key = std::make_pair(g.host(a.src), g.host(a.dst));
      auto cur = std::make_pair(totals.top_pair->source, totals.top_pair->target);
      if (key < cur) totals.top_pair = {g.host(a.dst), g.host(a.src), a.weight};
    }
  }
  return totals;
}

}  // namespace domainscope

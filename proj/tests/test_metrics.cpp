#include <catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "domainscope/metrics.hpp"
#include "support/oracles.hpp"

using namespace domainscope;

namespace {

DomainGraph path_abc() {
  // a -> b -> c
  return DomainGraph({"a.com", "b.com", "c.com"},
                     {{0, 1, 1, true}, {1, 2, 1, true}});
}

DomainGraph cycle3() {
  return DomainGraph({"a.com", "b.com", "c.com"},
                     {{0, 1, 1, true}, {1, 2, 1, true}, {2, 0, 1, true}});
}

DomainGraph full_triangle() {
  return DomainGraph({"a.com", "b.com", "c.com"},
                     {{0, 1, 1, true},
                      {1, 0, 1, true},
                      {1, 2, 1, true},
                      {2, 1, 1, true},
                      {0, 2, 1, true},
                      {2, 0, 1, true}});
}

}  // namespace

TEST_CASE("directed path: betweenness, degrees") {
  auto nodes = node_metrics(path_abc());
  std::map<std::string, NodeMetrics> by_host;
  for (auto& nm : nodes) by_host[nm.host] = nm;
  CHECK(by_host["b.com"].betweenness == 1.0);  // the single a->c path
  CHECK(by_host["a.com"].betweenness == 0.0);
  CHECK(by_host["c.com"].in_degree == 1);
  CHECK(by_host["c.com"].out_degree == 0);
  CHECK(by_host["a.com"].out_degree == 1);
  CHECK(by_host["a.com"].asymmetry == -1);
  CHECK(by_host["c.com"].asymmetry == 1);
  // c reaches nothing: closeness missing
  CHECK_FALSE(by_host["c.com"].closeness);
  CHECK(by_host["a.com"].closeness == Catch::Approx(1.5));
}

TEST_CASE("directed 3-cycle: symmetric eigenvector and closeness") {
  auto nodes = node_metrics(cycle3());
  for (const auto& nm : nodes) {
    REQUIRE(nm.eigenvector);
    CHECK(*nm.eigenvector == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(nm.closeness);
    CHECK(*nm.closeness == Catch::Approx(1.5));
  }
}

TEST_CASE("complete triangle: clustering 1 everywhere") {
  auto nodes = node_metrics(full_triangle());
  for (const auto& nm : nodes) {
    REQUIRE(nm.clustering);
    CHECK(*nm.clustering == Catch::Approx(1.0));
  }
  auto nm = network_metrics(full_triangle());
  CHECK(nm.density == Catch::Approx(1.0));
  REQUIRE(nm.diameter);
  CHECK(*nm.diameter == 1);
  REQUIRE(nm.average_path_length);
  CHECK(*nm.average_path_length == Catch::Approx(1.0));
}

TEST_CASE("network metrics identities") {
  auto nm = network_metrics(path_abc());
  CHECK(nm.n == 3);
  CHECK(nm.m == 2);
  CHECK(nm.average_degree == Catch::Approx(2.0 / 3.0));
  CHECK(nm.density == Catch::Approx(2.0 / 6.0));
  // single node: density 0, no diameter
  DomainGraph lonely({"a.com"}, {});
  auto single = network_metrics(lonely);
  CHECK(single.density == 0.0);
  CHECK_FALSE(single.diameter);
  CHECK_FALSE(single.average_path_length);
}

TEST_CASE("synthetic row densities match the published table") {
  // average degree 16.743 over 70 nodes
  {
    const int n = 70;
    const int m = static_cast<int>(std::lround(16.743 * n));
    double density = static_cast<double>(m) / (static_cast<double>(n) * (n - 1));
    CHECK(density == Catch::Approx(0.2426).margin(0.0005));
  }
  // average degree 9.278 over 36 nodes
  {
    const int n = 36;
    const int m = static_cast<int>(std::lround(9.278 * n));
    double density = static_cast<double>(m) / (static_cast<double>(n) * (n - 1));
    CHECK(density == Catch::Approx(0.265).margin(0.0005));
  }
}

TEST_CASE("metrics match brute-force oracles on random digraphs") {
  std::mt19937 rng(20240612);
  for (int round = 0; round < 50; ++round) {
    DomainGraph g = oracles::random_digraph(rng);
    auto nodes = node_metrics(g);
    auto bc = oracles::betweenness(g);
    auto clo = oracles::closeness(g);
    auto eig = oracles::eigenvector(g);
    auto cc = oracles::clustering(g);
    long long in_sum = 0, out_sum = 0;
    for (int i = 0; i < g.n(); ++i) {
      INFO("round " << round << " node " << i << " n=" << g.n()
                    << " m=" << g.m());
      CHECK(nodes[i].betweenness == Catch::Approx(bc[i]).margin(1e-9));
      CHECK(bool(nodes[i].closeness) == bool(clo[i]));
      if (clo[i]) CHECK(*nodes[i].closeness == Catch::Approx(*clo[i]).margin(1e-12));
      if (g.m() > 0) {
        REQUIRE(nodes[i].eigenvector);
        CHECK(*nodes[i].eigenvector == Catch::Approx(eig[i]).margin(1e-6));
      }
      CHECK(bool(nodes[i].clustering) == bool(cc[i]));
      if (cc[i]) CHECK(*nodes[i].clustering == Catch::Approx(*cc[i]).margin(1e-12));
      in_sum += nodes[i].in_degree;
      out_sum += nodes[i].out_degree;
      CHECK(nodes[i].degree == nodes[i].in_degree + nodes[i].out_degree);
    }
    CHECK(in_sum == g.m());
    CHECK(out_sum == g.m());
    auto nm = network_metrics(g);
    if (nm.n >= 2)
      CHECK(nm.density * (nm.n - 1) ==
            Catch::Approx(nm.average_degree).margin(1e-12));

    // diameter and average path length against the all-pairs table
    auto dist = oracles::floyd_warshall(oracles::adjacency(g));
    int diameter = 0;
    long long total = 0, pairs = 0;
    for (int s = 0; s < g.n(); ++s)
      for (int t = 0; t < g.n(); ++t) {
        if (s == t || dist[s][t] >= oracles::kInf) continue;
        diameter = std::max(diameter, dist[s][t]);
        total += dist[s][t];
        ++pairs;
      }
    if (pairs > 0) {
      REQUIRE(nm.diameter);
      CHECK(*nm.diameter == diameter);
      REQUIRE(nm.average_path_length);
      CHECK(*nm.average_path_length ==
            Catch::Approx(double(total) / pairs).margin(1e-12));
    } else {
      CHECK_FALSE(nm.diameter);
    }
  }
}

TEST_CASE("parallel betweenness equals serial") {
  std::mt19937 rng(99);
  for (int round = 0; round < 5; ++round) {
    DomainGraph g = oracles::random_digraph(rng);
    auto serial = node_metrics(g, 1);
    auto parallel = node_metrics(g, 4);
    for (int i = 0; i < g.n(); ++i)
      CHECK(serial[i].betweenness ==
            Catch::Approx(parallel[i].betweenness).margin(1e-12));
  }
}

TEST_CASE("eigenvector ignores weights; relabeling permutes metrics") {
  std::mt19937 rng(7);
  DomainGraph g = oracles::random_digraph(rng);
  // uniform weight scaling leaves the eigenvector unchanged
  std::vector<DomainGraph::Arc> scaled = g.arcs();
  for (auto& a : scaled) a.weight *= 17;
  DomainGraph g2(g.hosts(), scaled);
  auto n1 = node_metrics(g);
  auto n2 = node_metrics(g2);
  for (int i = 0; i < g.n(); ++i) {
    CHECK(bool(n1[i].eigenvector) == bool(n2[i].eigenvector));
    if (n1[i].eigenvector)
      CHECK(*n1[i].eigenvector == Catch::Approx(*n2[i].eigenvector).margin(0));
  }

  // relabeling: metric values survive as a multiset
  std::vector<std::string> renamed;
  for (int i = 0; i < g.n(); ++i)
    renamed.push_back("z" + std::to_string(g.n() - i) + ".com");
  std::vector<DomainGraph::Arc> same_arcs = g.arcs();
  DomainGraph relabeled(renamed, same_arcs);
  auto n3 = node_metrics(relabeled);
  std::multiset<double> before, after;
  for (int i = 0; i < g.n(); ++i) {
    before.insert(n1[i].betweenness);
    after.insert(n3[i].betweenness);
  }
  CHECK(before == after);
}

TEST_CASE("asymmetry report") {
  std::vector<NodeMetrics> nodes(5);
  nodes[0].host = "auth.com";
  nodes[0].in_degree = 20;
  nodes[0].out_degree = 6;
  nodes[0].asymmetry = 14;
  nodes[1].host = "hub.com";
  nodes[1].asymmetry = -29;
  nodes[2].host = "mid.com";
  nodes[2].asymmetry = 10;  // not strictly greater than the threshold
  nodes[3].host = "flat.com";
  nodes[3].asymmetry = 0;
  nodes[4].host = "big.com";
  nodes[4].asymmetry = 17;

  auto rep = asymmetry_report(nodes, 10);
  REQUIRE(rep.authorities.size() == 2);
  CHECK(rep.authorities[0].host == "big.com");  // sorted by |a| descending
  CHECK(rep.authorities[1].host == "auth.com");
  REQUIRE(rep.hubs.size() == 1);
  CHECK(rep.hubs[0].host == "hub.com");
  CHECK(rep.exceedance_fraction == Catch::Approx(3.0 / 5.0));

  auto none = asymmetry_report(std::vector<NodeMetrics>{}, 10);
  CHECK(none.authorities.empty());
  CHECK(none.exceedance_fraction == 0.0);
}

TEST_CASE("synthetic exceedance fraction near 7.3%") {
  std::vector<NodeMetrics> nodes(772);
  for (size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].host = "n" + std::to_string(i) + ".com";
    nodes[i].asymmetry = i < 56 ? 11 : 0;  // 56 exceedances
  }
  auto rep = asymmetry_report(nodes, 10);
  CHECK(rep.exceedance_fraction == Catch::Approx(56.0 / 772.0));
  CHECK(rep.exceedance_fraction == Catch::Approx(0.0725).margin(0.0005));
}

TEST_CASE("intensity totals over reliable arcs") {
  DomainGraph g({"x.com", "y.com", "z.com"},
                {{1, 0, 3, true},     // y -> x
                 {2, 0, 4, true},     // z -> x
                 {0, 1, 9, false},    // x -> y, unreliable
                 {2, 1, 5, true}});   // z -> y
  auto t = intensity_totals(g, "x.com");
  CHECK(t.as_target_total == 7);
  CHECK(t.as_source_total == 0);  // only the unreliable arc leaves x
  REQUIRE(t.top_pair);
  CHECK(t.top_pair->count == 5);
  CHECK(t.top_pair->source == "z.com");
  CHECK(t.top_pair->target == "y.com");

  auto other = intensity_totals(g, "z.com");
  CHECK(other.as_target_total == 0);
  CHECK(other.as_source_total == 9);

  CHECK_THROWS_AS(intensity_totals(g, "absent.com"), HostNotInGraph);
}

TEST_CASE("top pair tie breaks lexicographically by (source, target)") {
  DomainGraph g({"a.com", "b.com", "c.com"},
                {{2, 1, 5, true}, {1, 0, 5, true}});  // c->b and b->a tied
  auto t = intensity_totals(g, "a.com");
  REQUIRE(t.top_pair);
  CHECK(t.top_pair->source == "b.com");
  CHECK(t.top_pair->target == "a.com");
}

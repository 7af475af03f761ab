#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "lrp/model.hpp"
#include "lrp/rng.hpp"

using namespace lrp;

namespace {
ModelParams params(int n, double s = 1.5, double beta = 1.0, std::uint64_t seed = 1) {
  ModelParams p;
  p.n = n;
  p.s = s;
  p.beta = beta;
  p.seed = seed;
  return p;
}

bool has_long_edge_in_graph(const LrpGraph& g, int x, int y) {
  const int m = g.multiplicity(x, y);
  if (m == 0) return false;
  return cyclic_distance(x, y, g.n()) > 1 ? true : m == 2;
}
}  // namespace

TEST_CASE("cyclic distance") {
  CHECK(cyclic_distance(0, 3, 8) == 3);
  CHECK(cyclic_distance(1, 7, 8) == 2);
  CHECK(cyclic_distance(5, 5, 10) == 0);
  for (int x = 0; x < 9; ++x)
    for (int y = 0; y < 9; ++y) {
      CHECK(cyclic_distance(x, y, 9) == cyclic_distance(y, x, 9));
      CHECK(cyclic_distance(x, y, 9) <= 4);
    }
  CHECK_THROWS_AS(cyclic_distance(0, 9, 9), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_distance(-1, 0, 9), std::invalid_argument);
}

TEST_CASE("edge probability values") {
  // frozen: 1 - exp(-d^-s) at d=4, s=1.5 and d=1
  CHECK(edge_probability(0, 4, params(64)) == doctest::Approx(0.11750309741540454).epsilon(1e-14));
  CHECK(edge_probability(3, 4, params(64)) == doctest::Approx(0.6321205588285577).epsilon(1e-14));
  ModelParams p = params(64, 1.2, 0.5);
  CHECK(edge_probability(0, 2, p) == doctest::Approx(0.19558312330213234).epsilon(1e-14));
  CHECK_THROWS_AS(edge_probability(5, 5, params(16)), std::invalid_argument);
  // symmetry + monotone decay in distance
  const ModelParams q = params(64);
  double prev = 1.0;
  for (int d = 1; d <= 32; ++d) {
    const double mu = edge_probability(0, d, q);
    CHECK(mu == edge_probability(d, 0, q));
    CHECK(mu > 0.0);
    CHECK(mu < 1.0);
    CHECK(mu < prev);
    prev = mu;
  }
  // wrap-around distance: mu(0, n-1) = mu at distance 1
  CHECK(edge_probability(0, 63, q) == edge_probability(0, 1, q));
}

TEST_CASE("sampling basics and invariants") {
  const LrpGraph g = sample_graph(params(128, 1.5, 1.0, 7));
  CHECK(g.n() == 128);
  std::int64_t total = 0;
  for (int x = 0; x < g.n(); ++x) {
    int dx = 0;
    int prev = -1;
    for (const auto& [y, m] : g.adjacency[x]) {
      CHECK(y != x);            // no self loops
      CHECK(y > prev);          // sorted, unique
      prev = y;
      CHECK(m >= 1);
      CHECK(m <= 2);
      CHECK(g.multiplicity(y, x) == m);  // symmetric with equal multiplicity
      if (m == 2) CHECK(cyclic_distance(x, y, g.n()) == 1);  // parallels only on cycle pairs
      dx += m;
    }
    CHECK(dx == g.degree[x]);
    CHECK(dx >= 2);
    // cycle edges always present
    CHECK(g.multiplicity(x, (x + 1) % g.n()) >= 1);
    total += dx;
  }
  CHECK(total == g.oriented_edge_count);
  CHECK(total % 2 == 0);
}

TEST_CASE("beta=0 gives the bare cycle") {
  const LrpGraph g = sample_graph(params(50, 1.5, 0.0, 3));
  CHECK(g.oriented_edge_count == 100);
  for (int x = 0; x < 50; ++x) CHECK(g.degree[x] == 2);
  CHECK(degree2_vertices(g).size() == 50);
}

TEST_CASE("long-range membership matches the pair function") {
  const ModelParams p = params(96, 1.3, 0.8, 21);
  const LrpGraph g = sample_graph(p);
  for (int x = 0; x < g.n(); ++x)
    for (int y = x + 1; y < g.n(); ++y)
      CHECK(has_long_edge_in_graph(g, x, y) == pair_has_long_edge(p, x, y));
}

TEST_CASE("pair draws are order-invariant and seed-sensitive") {
  const ModelParams p = params(64);
  int diff = 0;
  for (int y = 1; y < 64; ++y) {
    CHECK(pair_has_long_edge(p, 0, y) == pair_has_long_edge(p, y, 0));
    ModelParams q = p;
    q.seed = 2;
    diff += pair_has_long_edge(p, 0, y) != pair_has_long_edge(q, 0, y) ? 1 : 0;
  }
  CHECK(diff > 0);
}

TEST_CASE("edge frequency matches its probability") {
  // counter-based draws let us re-query one pair across many seeds cheaply
  ModelParams p = params(32);
  const double mu = edge_probability(0, 5, p);
  const int trials = 20000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    p.seed = 1000 + t;
    hits += pair_has_long_edge(p, 0, 5) ? 1 : 0;
  }
  const double freq = static_cast<double>(hits) / trials;
  const double sigma = std::sqrt(mu * (1 - mu) / trials);
  CHECK(std::abs(freq - mu) < 4 * sigma);
}

TEST_CASE("degree-2 vertices are exactly the chord-free ones") {
  const LrpGraph g = sample_graph(params(200, 1.5, 1.0, 5));
  const std::vector<int> d2 = degree2_vertices(g);
  std::set<int> s2(d2.begin(), d2.end());
  CHECK(std::is_sorted(d2.begin(), d2.end()));
  for (int x = 0; x < g.n(); ++x) {
    bool any_long = false;
    for (const auto& [y, m] : g.adjacency[x])
      any_long = any_long || (cyclic_distance(x, y, g.n()) > 1 || m == 2);
    CHECK(s2.count(x) == (any_long ? 0u : 1u));
  }
}

TEST_CASE("determinism: same params, same bytes") {
  const ModelParams p = params(100, 1.4, 0.9, 99);
  CHECK(graph_to_string(sample_graph(p)) == graph_to_string(sample_graph(p)));
  ModelParams q = p;
  q.seed = 100;
  CHECK(graph_to_string(sample_graph(p)) != graph_to_string(sample_graph(q)));
}

TEST_CASE("serialization round trip") {
  const LrpGraph g = sample_graph(params(64, 1.75, 1.25, 17));
  const std::string text = graph_to_string(g);
  // header carries the parameters
  std::istringstream head(text);
  std::string tag;
  head >> tag;
  CHECK(tag == "lrp");
  const LrpGraph h = graph_from_string(text);
  CHECK(h.params.n == g.params.n);
  CHECK(h.params.s == g.params.s);
  CHECK(h.params.beta == g.params.beta);
  CHECK(h.params.seed == g.params.seed);
  CHECK(h.adjacency == g.adjacency);
  CHECK(h.degree == g.degree);
  CHECK(h.oriented_edge_count == g.oriented_edge_count);
  CHECK(graph_to_string(h) == text);  // byte-exact
}

TEST_CASE("serialization rejects malformed input") {
  CHECK_THROWS(graph_from_string("nope 4 1.5 1 0\n0 1 1\n"));
  CHECK_THROWS(graph_from_string("lrp\n"));
  // duplicate edge line
  CHECK_THROWS(graph_from_string("lrp 4 1.5 1 0\n0 1 1\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n"));
  // missing cycle edge {2,3}
  CHECK_THROWS(graph_from_string("lrp 4 1.5 1 0\n0 1 1\n1 2 1\n0 3 1\n"));
  // bad multiplicity
  CHECK_THROWS(graph_from_string("lrp 4 1.5 1 0\n0 1 3\n1 2 1\n2 3 1\n0 3 1\n"));
  // x >= y
  CHECK_THROWS(graph_from_string("lrp 4 1.5 1 0\n1 0 1\n1 2 1\n2 3 1\n0 3 1\n"));
}

TEST_CASE("parameter guards") {
  CHECK_THROWS_AS(sample_graph(params(2)), std::invalid_argument);
  CHECK_THROWS_AS(sample_graph(params(128, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(sample_graph(params(128, 1.5, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(sample_graph(params(1 << 17)), std::runtime_error);  // guard
  CHECK_NOTHROW(sample_graph(params(300), 300));
  CHECK_THROWS_AS(sample_graph(params(301), 300), std::runtime_error);
  CHECK_NOTHROW(sample_graph(params(3)));
  CHECK_NOTHROW(sample_graph(params(4)));
}

TEST_CASE("simple-graph variant collapses parallels") {
  ModelParams p = params(64, 1.5, 2.0, 11);
  p.simple_graph = true;
  const LrpGraph g = sample_graph(p);
  for (int x = 0; x < g.n(); ++x)
    for (const auto& [y, m] : g.adjacency[x]) CHECK(m == 1);
  // same support as the multigraph sample
  ModelParams q = p;
  q.simple_graph = false;
  const LrpGraph h = sample_graph(q);
  for (int x = 0; x < g.n(); ++x) {
    REQUIRE(g.adjacency[x].size() == h.adjacency[x].size());
    for (std::size_t i = 0; i < g.adjacency[x].size(); ++i)
      CHECK(g.adjacency[x][i].first == h.adjacency[x][i].first);
  }
}

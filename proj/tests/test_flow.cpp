#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lrp/chain.hpp"
#include "lrp/flow.hpp"
#include "lrp/model.hpp"
#include "lrp/spectral.hpp"

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

IntervalPartition manual_partition(int n, int L) {
  IntervalPartition part;
  part.n = n;
  part.L = L;
  part.ell = n % L;
  part.k = (n - part.ell) / L;
  return part;
}
}  // namespace

TEST_CASE("partition arithmetic") {
  const IntervalPartition p = make_partition(params(128), 2.0);
  CHECK(p.L == 39);
  CHECK(p.k == 3);
  CHECK(p.ell == 11);
  CHECK(!p.asymptotic_ok);  // 2^1.5 * 39^2 > 128^1.5
  CHECK(p.begin(0) == 0);
  CHECK(p.end(0) == 39);
  CHECK(p.end(2) == 128);
  CHECK(p.length(2) == 50);  // remainder absorbed by the last interval
  CHECK(p.interval_of(0) == 0);
  CHECK(p.interval_of(38) == 0);
  CHECK(p.interval_of(39) == 1);
  CHECK(p.interval_of(127) == 2);
  int total = 0;
  for (int j = 0; j < p.k; ++j) total += p.length(j);
  CHECK(total == 128);

  const IntervalPartition q = make_partition(params(1024), 4.0);
  CHECK(q.L == 314);
  CHECK(q.k == 3);
  CHECK(q.ell == 82);

  const IntervalPartition r = make_partition(params(4096), 0.1);
  CHECK(r.L == 19);
  CHECK(r.k == 215);
  CHECK(r.ell == 11);
  CHECK(r.asymptotic_ok);
}

TEST_CASE("partition guards") {
  CHECK_THROWS_AS(make_partition(params(128, 3.0), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(params(128, 1.0), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(params(128, 2.0), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(params(128, 1.5, 0.0), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(params(128), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(params(3), 2.0), std::invalid_argument);
  // alpha = 4 at n = 128 leaves a single interval
  CHECK_THROWS_AS(make_partition(params(128), 4.0), std::runtime_error);
  // L blows past n entirely
  CHECK_THROWS_AS(make_partition(params(8, 1.9), 50.0), std::runtime_error);
}

TEST_CASE("contraction on singleton intervals reproduces pair probabilities") {
  const ModelParams mp = params(12, 1.5, 1.0, 3);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = make_partition(mp, 0.01);
  REQUIRE(part.L == 1);
  REQUIRE(part.k == 12);
  const ContractedGraph gamma = contract(g, part);
  CHECK(gamma.pair.size() == 66);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) {
      const PairInfo& pi = gamma.info(i, j);
      CHECK(pi.q == doctest::Approx(edge_probability(i, j, mp)).epsilon(1e-15));
      CHECK(pi.crossing == (g.multiplicity(i, j) > 0));
      const bool lr = g.multiplicity(i, j) == 2 ||
                      (g.multiplicity(i, j) == 1 && cyclic_distance(i, j, 12) > 1);
      CHECK(pi.longrange == lr);
      if (pi.crossing) {
        CHECK(pi.witness_u == i);
        CHECK(pi.witness_v == j);
      }
    }
  CHECK(gamma.connected());  // cycle edges alone connect singletons
}

TEST_CASE("crossing probability equals the product over vertex pairs") {
  const ModelParams mp = params(96, 1.4, 0.7, 5);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = make_partition(mp, 2.0);
  REQUIRE(part.k >= 2);
  const ContractedGraph gamma = contract(g, part);
  for (int i = 0; i < part.k; ++i)
    for (int j = i + 1; j < part.k; ++j) {
      double stay = 1.0;  // P[no long-range edge between the blocks]
      for (int x = part.begin(i); x < part.end(i); ++x)
        for (int y = part.begin(j); y < part.end(j); ++y)
          stay *= 1.0 - edge_probability(x, y, mp);
      CHECK(1.0 - gamma.info(i, j).q == doctest::Approx(stay).epsilon(1e-12));
      CHECK(gamma.info(i, j).q >= 0.0);
      CHECK(gamma.info(i, j).q < 1.0);
    }
  CHECK(gamma.min_q() > 0.0);
}

TEST_CASE("witnesses are the lexicographically smallest crossing edges") {
  const ModelParams mp = params(128, 1.5, 1.0, 9);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = make_partition(mp, 2.0);
  const ContractedGraph gamma = contract(g, part);
  for (int i = 0; i < part.k; ++i)
    for (int j = i + 1; j < part.k; ++j) {
      const PairInfo& pi = gamma.info(i, j);
      // independent rebuild of the witness
      int bu = -1, bv = -1;
      for (int x = part.begin(i); x < part.end(i) && bu < 0; ++x)
        for (int y = part.begin(j); y < part.end(j); ++y)
          if (g.multiplicity(x, y) > 0) {
            bu = x;
            bv = y;
            break;
          }
      CHECK(pi.crossing == (bu >= 0));
      if (bu >= 0) {
        CHECK(pi.witness_u == bu);
        CHECK(pi.witness_v == bv);
        CHECK(part.interval_of(pi.witness_u) == i);
        CHECK(part.interval_of(pi.witness_v) == j);
      }
    }
}

TEST_CASE("target density values") {
  CHECK(er_edge_probability(4.0, 3) == doctest::Approx(0.26943791654620236).epsilon(1e-15));
  CHECK(er_edge_probability(2.0, 5) == doctest::Approx(0.1184158239652779).epsilon(1e-15));
  CHECK_THROWS_AS(er_edge_probability(2.0, 1), std::invalid_argument);
}

TEST_CASE("coupling marginal matches p") {
  // resample graph and thinning together: membership frequency must be p
  ModelParams mp = params(48, 1.5, 1.0, 0);
  const IntervalPartition part = make_partition(mp, 2.0);
  REQUIRE(part.k == 2);
  const double p = er_edge_probability(2.0, part.k);
  int hits = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    mp.seed = 10000 + t;
    const LrpGraph g = sample_graph(mp);
    const ContractedGraph gamma = contract(g, part);
    REQUIRE(p <= gamma.min_q());
    const ErCoupling er = couple_er(gamma, p, mp.seed);
    if (er.has(0, 1)) {
      ++hits;
      CHECK(gamma.info(0, 1).longrange);  // subset of the long-range crossings
    }
  }
  const double freq = static_cast<double>(hits) / trials;
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(freq - p) < 4 * sigma);
}

TEST_CASE("coupling is deterministic in the seed and respects guards") {
  const ModelParams mp = params(256, 1.5, 1.0, 4);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = make_partition(mp, 2.0);
  const ContractedGraph gamma = contract(g, part);
  const double p = er_edge_probability(2.0, part.k);
  const ErCoupling a = couple_er(gamma, p, 7);
  const ErCoupling b = couple_er(gamma, p, 7);
  CHECK(a.edge == b.edge);
  // subset property irrespective of seed
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ErCoupling c = couple_er(gamma, p, s);
    for (int i = 0; i < part.k; ++i)
      for (int j = i + 1; j < part.k; ++j)
        if (c.has(i, j)) CHECK(gamma.info(i, j).crossing);
  }
  CHECK_THROWS_AS(couple_er(gamma, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(couple_er(gamma, -0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(couple_er(gamma, 0.999999999, 1), std::runtime_error);
}

TEST_CASE("interval geodesics on the bare cycle are straight runs") {
  ModelParams mp = params(24, 1.5, 0.0, 1);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = manual_partition(24, 6);
  REQUIRE(part.k == 4);
  const GeodesicTable t = interval_geodesics(g, part);
  CHECK(t.delta_max == 5);
  for (int j = 0; j < 4; ++j) {
    CHECK(t.diameter[j] == 5);
    for (int x = part.begin(j); x < part.end(j); ++x)
      for (int y = part.begin(j); y < part.end(j); ++y)
        CHECK(t.distance(part, j, x, y) == std::abs(x - y));
  }
  const std::vector<int> path = t.path(part, 0, 1, 5);
  const std::vector<int> want = {1, 2, 3, 4, 5};
  CHECK(path == want);
  CHECK(t.path(part, 2, 14, 14) == std::vector<int>{14});
}

TEST_CASE("geodesics prefer chords, deterministically") {
  const LrpGraph g = graph_from_string(
      "lrp 8 1.5 1 0\n0 1 1\n0 4 1\n0 7 1\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n"
      "5 6 1\n6 7 1\n");
  const IntervalPartition part = manual_partition(8, 8);  // one interval
  const GeodesicTable t = interval_geodesics(g, part);
  CHECK(t.distance(part, 0, 0, 4) == 1);
  CHECK(t.distance(part, 0, 0, 3) == 2);
  const std::vector<int> want = {0, 4, 3};  // via the chord, fixed tie-break
  CHECK(t.path(part, 0, 0, 3) == want);
  CHECK(t.diameter[0] == 4);  // e.g. dist(2, 6): the chord does not help
}

TEST_CASE("geodesic table size guard") {
  ModelParams mp = params(1 << 16, 1.5, 0.0, 1);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = manual_partition(1 << 16, 1 << 16);
  CHECK_THROWS_AS(interval_geodesics(g, part), std::runtime_error);
}

TEST_CASE("decomposed loads equal the per-commodity reference") {
  for (const std::uint64_t seed : {1ull, 2ull}) {
    const ModelParams mp = params(128, 1.5, 1.0, seed);
    const LrpGraph g = sample_graph(mp);
    const IntervalPartition part = make_partition(mp, 2.0);
    const ContractedGraph gamma = contract(g, part);
    const ErCoupling gp = couple_er(gamma, er_edge_probability(2.0, part.k), seed);
    const FlowPlan a = build_flow(g, part, gamma, gp, LoadMethod::decomposed);
    const FlowPlan b = build_flow(g, part, gamma, gp, LoadMethod::per_commodity);
    REQUIRE(a.load.size() == b.load.size());
    for (std::size_t e = 0; e < a.load.size(); ++e)
      CHECK(a.load[e] == doctest::Approx(b.load[e]).epsilon(1e-9));
    CHECK(a.max_path_len == b.max_path_len);
    CHECK(a.degraded == b.degraded);
    CHECK(congestion(a) == doctest::Approx(congestion(b)).epsilon(1e-9));
  }
}

TEST_CASE("every commodity routes its full mass along a valid walk") {
  const ModelParams mp = params(96, 1.5, 1.0, 6);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = make_partition(mp, 2.0);
  const ContractedGraph gamma = contract(g, part);
  const ErCoupling gp = couple_er(gamma, er_edge_probability(2.0, part.k), 6);
  const FlowPlan plan = build_flow(g, part, gamma, gp);

  double mass = 0;  // sum over commodities of pi pi |path|^2 (each of the
                    // |p| edges carries pi pi |p|)
  for (int x = 0; x < 96; ++x)
    for (int y = 0; y < 96; ++y) {
      if (x == y) continue;
      const std::vector<int> p = plan.route(x, y);
      REQUIRE(p.front() == x);
      REQUIRE(p.back() == y);
      long len = static_cast<long>(p.size()) - 1;
      for (std::size_t a = 0; a + 1 < p.size(); ++a) {
        CHECK(g.multiplicity(p[a], p[a + 1]) > 0);  // consecutive adjacency
        CHECK_NOTHROW(plan.slot(p[a], p[a + 1]));
      }
      CHECK(len <= plan.max_path_len);
      const double pix = g.degree[x] / static_cast<double>(g.oriented_edge_count);
      const double piy = g.degree[y] / static_cast<double>(g.oriented_edge_count);
      mass += pix * piy * static_cast<double>(len) * len;
    }
  const double total = std::accumulate(plan.load.begin(), plan.load.end(), 0.0);
  CHECK(total == doctest::Approx(mass).epsilon(1e-9));
  // length envelope
  CHECK(plan.max_path_len <=
        (static_cast<long>(plan.delta_max) + 1) * plan.max_interval_hops + plan.delta_max);
}

TEST_CASE("congestion bounds the inverse spectral gap") {
  for (const std::uint64_t seed : {3ull, 8ull}) {
    const ModelParams mp = params(128, 1.5, 1.0, seed);
    const LrpGraph g = sample_graph(mp);
    const IntervalPartition part = make_partition(mp, 2.0);
    const ContractedGraph gamma = contract(g, part);
    const ErCoupling gp = couple_er(gamma, er_edge_probability(2.0, part.k), seed);
    const FlowPlan plan = build_flow(g, part, gamma, gp);
    const ChainView c = make_chain(g);
    const SpectralResult r = second_eigenvalue(c);
    CHECK(1.0 / r.gap <= congestion(plan) * (1 + 1e-12));
  }
}

TEST_CASE("degraded fallback and its flag") {
  const ModelParams mp = params(128, 1.5, 1.0, 2);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = make_partition(mp, 2.0);
  const ContractedGraph gamma = contract(g, part);
  // p = 0 keeps Gamma' empty: must fall back to Gamma and say so
  const ErCoupling empty = couple_er(gamma, 0.0, 1);
  CHECK(!empty.connected());
  CHECK(empty.max_degree() == 0);
  const FlowPlan deg = build_flow(g, part, gamma, empty);
  CHECK(deg.degraded);
  CHECK(congestion(deg) > 0);

  // hunt a seed whose coupled graph is connected; routing then uses Gamma'
  const double p = er_edge_probability(2.0, part.k);
  bool found = false;
  for (std::uint64_t s = 0; s < 400 && !found; ++s) {
    const ErCoupling gp = couple_er(gamma, p, s);
    if (!gp.connected()) continue;
    found = true;
    const FlowPlan ok = build_flow(g, part, gamma, gp);
    CHECK(!ok.degraded);
    CHECK(ok.max_interval_hops <= part.k - 1);
  }
  CHECK(found);
}

TEST_CASE("slot lookup rejects absent edges") {
  const ModelParams mp = params(64, 1.5, 0.0, 1);
  const LrpGraph g = sample_graph(mp);
  const IntervalPartition part = manual_partition(64, 16);
  const ContractedGraph gamma = contract(g, part);
  const ErCoupling gp = couple_er(gamma, 0.0, 1);
  const FlowPlan plan = build_flow(g, part, gamma, gp);
  CHECK_NOTHROW(plan.slot(0, 1));
  CHECK_THROWS_AS(plan.slot(0, 2), std::logic_error);
  CHECK(plan.load.size() == 128);  // cycle: two slots per vertex
}

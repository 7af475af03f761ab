#pragma once
// Multicommodity flow built on an interval decomposition of the cycle:
// split into k intervals of length ~ L = ceil(n^{s-1} xi), contract each to
// a vertex (graph Gamma), couple an Erdos-Renyi subgraph Gamma' under the
// exact crossing probabilities, and route every ordered pair (x,y) through
// interval-local geodesics stitched by witness edges. The resulting edge
// congestion rho upper-bounds (1 - lambda)^{-1} for any valid flow.

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

struct IntervalPartition {
  int n = 0;
  double alpha = 0;
  double xi = 0;  // alpha ln(n) / (2^s beta)
  int L = 0;      // ceil(n^{s-1} xi)
  int k = 0;      // intervals; remainder ell absorbed into the last one
  int ell = 0;
  bool asymptotic_ok = false;  // 2^s beta L^2 <= n^s (regime marker, not enforced)

  int interval_of(int v) const {
    const int j = v / L;
    return j >= k ? k - 1 : j;
  }
  int begin(int j) const { return j * L; }
  int end(int j) const { return j == k - 1 ? n : (j + 1) * L; }
  int length(int j) const { return end(j) - begin(j); }
};

// requires 1 < s < 2, beta > 0, alpha > 0 and a resulting k >= 2
IntervalPartition make_partition(const ModelParams& p, double alpha);

struct PairInfo {
  bool crossing = false;   // some G-edge joins the two intervals (Gamma edge)
  bool longrange = false;  // some long-range edge does (probability exactly q)
  int witness_u = -1;      // lex-smallest crossing edge, u in the lower interval
  int witness_v = -1;
  double q = 0;  // 1 - exp(-beta sum_{x in S_i, y in S_j} dist(x,y)^-s)
};

struct ContractedGraph {
  int k = 0;
  std::vector<PairInfo> pair;  // upper triangle, i < j
  int pair_index(int i, int j) const { return i * k - i * (i + 1) / 2 + (j - i - 1); }
  const PairInfo& info(int i, int j) const { return pair[pair_index(i, j)]; }
  double min_q() const;
  bool connected() const;  // on crossing edges
};

ContractedGraph contract(const LrpGraph& g, const IntervalPartition& part);

// target Erdos-Renyi density alpha/(2e) * ln(k)/k
double er_edge_probability(double alpha, int k);

struct ErCoupling {
  int k = 0;
  double p = 0;
  std::vector<char> edge;  // upper triangle, subset of Gamma's crossing pairs
  bool has(int i, int j) const;
  int max_degree() const;
  bool connected() const;
};

// Subset coupling: pair {i,j} enters Gamma' iff its long-range crossing event
// holds and an independent thinning with ratio p/q_ij accepts; the membership
// marginal is exactly p per pair, independent across pairs.
// Requires p <= min q_ij (throws otherwise, listing the violating pair).
ErCoupling couple_er(const ContractedGraph& gamma, double p, std::uint64_t seed);

struct GeodesicTable {
  std::vector<Eigen::MatrixXi> dist;  // per interval, (local src, local dst)
  std::vector<Eigen::MatrixXi> pred;  // BFS predecessor, -1 at sources
  std::vector<int> diameter;
  int delta_max = 0;

  int distance(const IntervalPartition& part, int j, int x, int y) const;
  // vertex list of the canonical x->y geodesic inside interval j
  std::vector<int> path(const IntervalPartition& part, int j, int x, int y) const;
};

// BFS inside each induced interval subgraph (always connected: the cycle
// path survives induction); deterministic predecessor choice
GeodesicTable interval_geodesics(const LrpGraph& g, const IntervalPartition& part);

enum class LoadMethod { decomposed, per_commodity };

struct FlowPlan {
  const LrpGraph* graph = nullptr;
  IntervalPartition part;
  ErCoupling gamma_prime;
  bool degraded = false;  // Gamma' disconnected; interval routing fell back to Gamma
  int delta_max = 0;
  long max_path_len = 0;       // max |p(x,y)| over ordered pairs
  long max_interval_hops = 0;  // max |q| over used interval routes

  // oriented-edge loads f(e) = sum_{p ni e} pi(x) pi(y) |p|
  std::vector<double> load;
  std::vector<std::int64_t> slot_off;
  int slot(int x, int y) const;  // adjacency slot of oriented edge (x,y)

  // materialized canonical path for one ordered commodity
  std::vector<int> route(int x, int y) const;

  // internal routing data (exposed for tests)
  struct CrossRoute {
    std::vector<int> intervals;               // t_0 = i, ..., t_r = j
    std::vector<std::pair<int, int>> hops;    // oriented witness endpoints
    long middle_len = 0;                      // edges between exit of S_i and entry of S_j
  };
  std::vector<CrossRoute> cross;  // index i*k + j
  GeodesicTable geo;
};

// Routes all ordered pairs and accumulates loads. The decomposed method
// streams prefix/middle/suffix contributions in O(n Delta + k^2) per interval
// pair; per_commodity walks every path (reference implementation).
FlowPlan build_flow(const LrpGraph& g, const IntervalPartition& part,
                    const ContractedGraph& gamma, const ErCoupling& gp,
                    LoadMethod method = LoadMethod::decomposed);

// rho(f) = max_e 2|E| f(e) / m(e), |E| the oriented edge count
double congestion(const FlowPlan& plan);

}  // namespace lrp

#include "lrp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "lrp/rng.hpp"

namespace lrp {

IntervalPartition make_partition(const ModelParams& p, double alpha) {
  if (!(p.s > 1.0 && p.s < 2.0))
    throw std::invalid_argument("make_partition: requires 1 < s < 2");
  if (!(p.beta > 0.0))
    throw std::invalid_argument("make_partition: requires beta > 0");
  if (!(alpha > 0.0))
    throw std::invalid_argument("make_partition: requires alpha > 0");
  if (p.n < 4) throw std::invalid_argument("make_partition: n too small");

  IntervalPartition part;
  part.n = p.n;
  part.alpha = alpha;
  const double n = static_cast<double>(p.n);
  part.xi = alpha * std::log(n) / (std::pow(2.0, p.s) * p.beta);
  const double raw = std::pow(n, p.s - 1.0) * part.xi;
  if (raw >= n) throw std::runtime_error("make_partition: L >= n, no valid split");
  part.L = std::max(1, static_cast<int>(std::ceil(raw)));
  part.ell = p.n % part.L;
  part.k = (p.n - part.ell) / part.L;
  if (part.k < 2)
    throw std::runtime_error("make_partition: fewer than 2 intervals (L = " +
                             std::to_string(part.L) + ", n = " + std::to_string(p.n) +
                             "); lower alpha or raise n");
  part.asymptotic_ok = std::pow(2.0, p.s) * p.beta * part.L * static_cast<double>(part.L) <=
                       std::pow(n, p.s);
  return part;
}

double ContractedGraph::min_q() const {
  double m = 1.0;
  for (const auto& pi : pair) m = std::min(m, pi.q);
  return m;
}

static bool components_connected(int k, const std::vector<std::vector<int>>& adj) {
  std::vector<char> seen(k, 0);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = 1;
  int cnt = 1;
  while (!bfs.empty()) {
    const int v = bfs.front();
    bfs.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++cnt;
        bfs.push(w);
      }
  }
  return cnt == k;
}

bool ContractedGraph::connected() const {
  std::vector<std::vector<int>> adj(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (info(i, j).crossing) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  return components_connected(k, adj);
}

ContractedGraph contract(const LrpGraph& g, const IntervalPartition& part) {
  if (g.n() != part.n) throw std::invalid_argument("contract: size mismatch");
  ContractedGraph gamma;
  gamma.k = part.k;
  gamma.pair.assign(static_cast<std::size_t>(part.k) * (part.k - 1) / 2, {});

  // witness = lex-smallest crossing edge; ascending (x, y) scan finds it first
  for (int x = 0; x < g.n(); ++x) {
    const int i = part.interval_of(x);
    for (const auto& [y, m] : g.adjacency[x]) {
      if (y < x) continue;
      const int j = part.interval_of(y);
      if (i == j) continue;
      PairInfo& pi = gamma.pair[gamma.pair_index(std::min(i, j), std::max(i, j))];
      if (!pi.crossing) {
        pi.crossing = true;
        pi.witness_u = x;
        pi.witness_v = y;
      }
      // long-range component: either a chord or a doubled cycle edge
      if (cyclic_distance(x, y, g.n()) > 1 || m == 2) pi.longrange = true;
    }
  }
  // exact long-range crossing probabilities
  const double beta = g.params.beta;
  const double s = g.params.s;
  for (int i = 0; i < part.k; ++i)
    for (int j = i + 1; j < part.k; ++j) {
      double sum = 0;
      for (int x = part.begin(i); x < part.end(i); ++x)
        for (int y = part.begin(j); y < part.end(j); ++y)
          sum += std::pow(static_cast<double>(cyclic_distance(x, y, g.n())), -s);
      gamma.pair[gamma.pair_index(i, j)].q = -std::expm1(-beta * sum);
    }
  return gamma;
}

double er_edge_probability(double alpha, int k) {
  if (k < 2) throw std::invalid_argument("er_edge_probability: k must be >= 2");
  return alpha / (2.0 * std::exp(1.0)) * std::log(static_cast<double>(k)) / k;
}

bool ErCoupling::has(int i, int j) const {
  if (i == j) return false;
  const int lo = std::min(i, j), hi = std::max(i, j);
  return edge[static_cast<std::size_t>(lo) * k - lo * (lo + 1) / 2 + (hi - lo - 1)] != 0;
}

int ErCoupling::max_degree() const {
  int best = 0;
  for (int i = 0; i < k; ++i) {
    int d = 0;
    for (int j = 0; j < k; ++j) d += (j != i && has(i, j)) ? 1 : 0;
    best = std::max(best, d);
  }
  return best;
}

bool ErCoupling::connected() const {
  std::vector<std::vector<int>> adj(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (has(i, j)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  return components_connected(k, adj);
}

ErCoupling couple_er(const ContractedGraph& gamma, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("couple_er: p must lie in [0, 1)");
  ErCoupling er;
  er.k = gamma.k;
  er.p = p;
  er.edge.assign(gamma.pair.size(), 0);
  for (int i = 0; i < gamma.k; ++i)
    for (int j = i + 1; j < gamma.k; ++j) {
      const PairInfo& pi = gamma.info(i, j);
      if (p > pi.q)
        throw std::runtime_error(
            "couple_er: p = " + std::to_string(p) + " exceeds q(" + std::to_string(i) +
            "," + std::to_string(j) + ") = " + std::to_string(pi.q));
      if (!pi.longrange) continue;
      // independent thinning: keep with probability p / q
      const double thin = u01(pair_bits(mix64(seed ^ 0xe2c09b1eull), i, j));
      if (thin < p / pi.q) er.edge[gamma.pair_index(i, j)] = 1;
    }
  return er;
}

int GeodesicTable::distance(const IntervalPartition& part, int j, int x, int y) const {
  return dist[j](x - part.begin(j), y - part.begin(j));
}

std::vector<int> GeodesicTable::path(const IntervalPartition& part, int j, int x,
                                     int y) const {
  const int b = part.begin(j);
  std::vector<int> out;
  int v = y - b;
  const int src = x - b;
  while (v != src) {
    out.push_back(v + b);
    v = pred[j](src, v);
    if (v < 0) throw std::logic_error("GeodesicTable::path: broken predecessor chain");
  }
  out.push_back(x);
  std::reverse(out.begin(), out.end());
  return out;
}

GeodesicTable interval_geodesics(const LrpGraph& g, const IntervalPartition& part) {
  std::size_t bytes = 0;
  for (int j = 0; j < part.k; ++j)
    bytes += 2ull * part.length(j) * part.length(j) * sizeof(int);
  if (bytes > (1ull << 31))
    throw std::runtime_error("interval_geodesics: tables would exceed 2 GiB");

  GeodesicTable t;
  t.dist.resize(part.k);
  t.pred.resize(part.k);
  t.diameter.assign(part.k, 0);
  std::vector<int> q;
  for (int j = 0; j < part.k; ++j) {
    const int b = part.begin(j), len = part.length(j);
    std::vector<std::vector<int>> ladj(len);
    for (int v = 0; v < len; ++v)
      for (const auto& [y, m] : g.adjacency[v + b])
        if (y >= b && y < b + len) ladj[v].push_back(y - b);  // sorted already
    t.dist[j].setConstant(len, len, -1);
    t.pred[j].setConstant(len, len, -1);
    for (int src = 0; src < len; ++src) {
      q.clear();
      q.push_back(src);
      t.dist[j](src, src) = 0;
      for (std::size_t head = 0; head < q.size(); ++head) {
        const int v = q[head];
        const int dv = t.dist[j](src, v);
        for (int w : ladj[v])
          if (t.dist[j](src, w) < 0) {
            t.dist[j](src, w) = dv + 1;
            t.pred[j](src, w) = v;
            q.push_back(w);
          }
      }
      if (static_cast<int>(q.size()) != len)
        throw std::logic_error("interval_geodesics: induced interval disconnected");
      t.diameter[j] = std::max(t.diameter[j], t.dist[j].row(src).maxCoeff());
    }
    t.delta_max = std::max(t.delta_max, t.diameter[j]);
  }
  return t;
}

int FlowPlan::slot(int x, int y) const {
  const auto& row = graph->adjacency[x];
  const auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(y, 0));
  if (it == row.end() || it->first != y)
    throw std::logic_error("FlowPlan::slot: edge not present");
  return static_cast<int>(slot_off[x] + (it - row.begin()));
}

std::vector<int> FlowPlan::route(int x, int y) const {
  const int i = part.interval_of(x), j = part.interval_of(y);
  if (x == y) return {x};
  if (i == j) return geo.path(part, i, x, y);
  const CrossRoute& cr = cross[static_cast<std::size_t>(i) * part.k + j];
  std::vector<int> out = geo.path(part, i, x, cr.hops.front().first);
  for (std::size_t a = 1; a + 1 < cr.intervals.size(); ++a) {
    const auto seg = geo.path(part, cr.intervals[a], cr.hops[a - 1].second,
                              cr.hops[a].first);
    out.insert(out.end(), seg.begin(), seg.end());
  }
  const auto seg = geo.path(part, j, cr.hops.back().second, y);
  out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

namespace {

// interval-level BFS routes on Gamma' (or Gamma when degraded)
std::vector<std::vector<int>> interval_bfs_trees(
    int k, const std::vector<std::vector<int>>& adj) {
  std::vector<std::vector<int>> pred(k, std::vector<int>(k, -1));
  for (int src = 0; src < k; ++src) {
    std::vector<int> dist(k, -1);
    std::queue<int> q;
    q.push(src);
    dist[src] = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          pred[src][w] = v;
          q.push(w);
        }
    }
    for (int j = 0; j < k; ++j)
      if (j != src && dist[j] < 0)
        throw std::logic_error("interval routing graph is disconnected");
  }
  return pred;
}

}  // namespace

FlowPlan build_flow(const LrpGraph& g, const IntervalPartition& part,
                    const ContractedGraph& gamma, const ErCoupling& gp,
                    LoadMethod method) {
  if (g.n() != part.n || gamma.k != part.k || gp.k != part.k)
    throw std::invalid_argument("build_flow: mismatched inputs");
  FlowPlan plan;
  plan.graph = &g;
  plan.part = part;
  plan.gamma_prime = gp;
  plan.geo = interval_geodesics(g, part);
  plan.delta_max = plan.geo.delta_max;

  const int n = g.n();
  const int k = part.k;
  plan.slot_off.assign(n + 1, 0);
  for (int x = 0; x < n; ++x)
    plan.slot_off[x + 1] = plan.slot_off[x] + static_cast<std::int64_t>(g.adjacency[x].size());
  plan.load.assign(static_cast<std::size_t>(plan.slot_off[n]), 0.0);

  // pick the interval routing graph
  plan.degraded = !gp.connected();
  std::vector<std::vector<int>> radj(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const bool present = plan.degraded ? gamma.info(i, j).crossing : gp.has(i, j);
      if (present) {
        radj[i].push_back(j);
        radj[j].push_back(i);
      }
    }
  const auto ipred = interval_bfs_trees(k, radj);

  // canonical interval routes with witness stitching
  plan.cross.assign(static_cast<std::size_t>(k) * k, {});
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      FlowPlan::CrossRoute cr;
      for (int t = j; t != -1; t = ipred[i][t]) {
        cr.intervals.push_back(t);
        if (t == i) break;
      }
      std::reverse(cr.intervals.begin(), cr.intervals.end());
      for (std::size_t a = 0; a + 1 < cr.intervals.size(); ++a) {
        const int ta = cr.intervals[a], tb = cr.intervals[a + 1];
        const PairInfo& pi = gamma.info(std::min(ta, tb), std::max(ta, tb));
        cr.hops.push_back(ta < tb ? std::make_pair(pi.witness_u, pi.witness_v)
                                  : std::make_pair(pi.witness_v, pi.witness_u));
      }
      cr.middle_len = static_cast<long>(cr.hops.size());
      for (std::size_t a = 1; a + 1 < cr.intervals.size(); ++a)
        cr.middle_len += plan.geo.distance(part, cr.intervals[a], cr.hops[a - 1].second,
                                           cr.hops[a].first);
      plan.max_interval_hops =
          std::max(plan.max_interval_hops, static_cast<long>(cr.hops.size()));
      plan.cross[static_cast<std::size_t>(i) * k + j] = std::move(cr);
    }

  std::vector<double> pi(n);
  for (int x = 0; x < n; ++x)
    pi[x] = g.degree[x] / static_cast<double>(g.oriented_edge_count);

  if (method == LoadMethod::per_commodity) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (x == y) continue;
        const std::vector<int> p = plan.route(x, y);
        const long len = static_cast<long>(p.size()) - 1;
        plan.max_path_len = std::max(plan.max_path_len, len);
        const double w = pi[x] * pi[y] * len;
        for (std::size_t a = 0; a + 1 < p.size(); ++a)
          plan.load[plan.slot(p[a], p[a + 1])] += w;
      }
    return plan;
  }

  // decomposed accumulation: prefix (depends on x), shared middle, suffix (y)
  for (int j = 0; j < k; ++j) {
    // same-interval commodities: walk each geodesic once
    const int b = part.begin(j), len = part.length(j);
    const auto& dist = plan.geo.dist[j];
    const auto& pred = plan.geo.pred[j];
    plan.max_path_len = std::max(plan.max_path_len, static_cast<long>(plan.geo.diameter[j]));
    for (int sx = 0; sx < len; ++sx)
      for (int sy = 0; sy < len; ++sy) {
        if (sx == sy) continue;
        const double w = pi[sx + b] * pi[sy + b] * dist(sx, sy);
        for (int v = sy; v != sx;) {
          const int u = pred(sx, v);
          plan.load[plan.slot(u + b, v + b)] += w;
          v = u;
        }
      }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const FlowPlan::CrossRoute& cr = plan.cross[static_cast<std::size_t>(i) * k + j];
      const int out0 = cr.hops.front().first;
      const int inr = cr.hops.back().second;
      const long m = cr.middle_len;

      double Pi = 0, Ai = 0, Pj = 0, Bj = 0;
      long max_a = 0, max_b = 0;
      for (int x = part.begin(i); x < part.end(i); ++x) {
        const long ax = plan.geo.distance(part, i, x, out0);
        Pi += pi[x];
        Ai += pi[x] * ax;
        max_a = std::max(max_a, ax);
      }
      for (int y = part.begin(j); y < part.end(j); ++y) {
        const long by = plan.geo.distance(part, j, inr, y);
        Pj += pi[y];
        Bj += pi[y] * by;
        max_b = std::max(max_b, by);
      }
      plan.max_path_len = std::max(plan.max_path_len, max_a + m + max_b);
      // envelope |p| <= (Delta + 1)|q| + Delta must hold by construction
      const long hops = static_cast<long>(cr.hops.size());
      if (max_a + m + max_b >
          (static_cast<long>(plan.delta_max) + 1) * hops + plan.delta_max)
        throw std::logic_error("build_flow: path length envelope violated");

      // middle edges carry every (x, y) commodity of this interval pair
      const double mid_w = Ai * Pj + static_cast<double>(m) * Pi * Pj + Pi * Bj;
      for (std::size_t a = 0; a < cr.hops.size(); ++a) {
        plan.load[plan.slot(cr.hops[a].first, cr.hops[a].second)] += mid_w;
        if (a > 0) {
          const int t = cr.intervals[a];
          const auto seg = plan.geo.path(part, t, cr.hops[a - 1].second, cr.hops[a].first);
          for (std::size_t v = 0; v + 1 < seg.size(); ++v)
            plan.load[plan.slot(seg[v], seg[v + 1])] += mid_w;
        }
      }
      // prefix edges: geodesic x -> out0 inside S_i
      const int bi = part.begin(i);
      const auto& predi = plan.geo.pred[i];
      for (int x = part.begin(i); x < part.end(i); ++x) {
        const long ax = plan.geo.distance(part, i, x, out0);
        const double w = pi[x] * ((ax + m) * Pj + Bj);
        for (int v = out0 - bi; v != x - bi;) {
          const int u = predi(x - bi, v);
          plan.load[plan.slot(u + bi, v + bi)] += w;
          v = u;
        }
      }
      // suffix edges: geodesic inr -> y inside S_j
      const int bj = part.begin(j);
      const auto& predj = plan.geo.pred[j];
      for (int y = part.begin(j); y < part.end(j); ++y) {
        const long by = plan.geo.distance(part, j, inr, y);
        const double w = pi[y] * (Pi * (m + by) + Ai);
        for (int v = y - bj; v != inr - bj;) {
          const int u = predj(inr - bj, v);
          plan.load[plan.slot(u + bj, v + bj)] += w;
          v = u;
        }
      }
    }
  return plan;
}

double congestion(const FlowPlan& plan) {
  const LrpGraph& g = *plan.graph;
  double rho = 0;
  for (int x = 0; x < g.n(); ++x)
    for (std::size_t idx = 0; idx < g.adjacency[x].size(); ++idx) {
      const double f = plan.load[plan.slot_off[x] + idx];
      rho = std::max(rho, 2.0 * static_cast<double>(g.oriented_edge_count) * f /
                              g.adjacency[x][idx].second);
    }
  return rho;
}

}  // namespace lrp

#include "lrp/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace lrp {

ChainView make_chain(const LrpGraph& g) {
  const int n = g.n();
  ChainView c;
  c.graph = &g;
  c.pi.resize(n);
  const double total = static_cast<double>(g.oriented_edge_count);
  for (int x = 0; x < n; ++x) c.pi[x] = g.degree[x] / total;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(g.oriented_edge_count) + n);
  for (int x = 0; x < n; ++x) {
    trip.emplace_back(x, x, 0.5);
    const double inv = 1.0 / (2.0 * g.degree[x]);
    for (const auto& [y, m] : g.adjacency[x])
      trip.emplace_back(y, x, m * inv);  // pt(y,x) = P(x,y)
  }
  c.pt.resize(n, n);
  c.pt.setFromTriplets(trip.begin(), trip.end());
  c.pt.makeCompressed();
  return c;
}

double transition_prob(const ChainView& c, int x, int y) {
  if (x == y) return 0.5;
  const int m = c.graph->multiplicity(x, y);
  return m / (2.0 * c.graph->degree[x]);
}

Eigen::VectorXd point_mass(int n, int x) {
  if (x < 0 || x >= n) throw std::invalid_argument("point_mass: x out of range");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  d[x] = 1.0;
  return d;
}

Eigen::VectorXd step(const ChainView& c, const Eigen::VectorXd& dist) {
  return c.pt * dist;
}

double tv_distance(const ChainView& c, const Eigen::VectorXd& dist) {
  return 0.5 * (dist - c.pi).lpNorm<1>();
}

TauResult tau_from(const ChainView& c, int x, double eps, long t_max) {
  Eigen::VectorXd d = point_mass(c.graph->n(), x);
  for (long t = 0; t <= t_max; ++t) {
    if (tv_distance(c, d) <= eps) return {t, false};
    if (t < t_max) d = step(c, d);
  }
  return {t_max, true};
}

MixingEstimate mixing_time(const ChainView& c, const std::vector<int>& starts,
                           long t_max, double eps) {
  if (starts.empty()) throw std::invalid_argument("mixing_time: no starts");
  MixingEstimate est;
  est.per_start.reserve(starts.size());
  for (int x : starts) {
    const TauResult r = tau_from(c, x, eps, t_max);
    est.per_start.push_back({x, r.tau});
    est.tau = std::max(est.tau, r.tau);
    est.truncated = est.truncated || r.truncated;
  }
  return est;
}

std::vector<int> all_starts(const LrpGraph& g) {
  std::vector<int> s(g.n());
  for (int i = 0; i < g.n(); ++i) s[i] = i;
  return s;
}

std::vector<int> subset_starts(const LrpGraph& g) {
  const int n = g.n();
  std::vector<int> s;
  const int stride = std::max(1, n / 16);
  for (int x = 0; x < n; x += stride) s.push_back(x);
  s.push_back(static_cast<int>(std::max_element(g.degree.begin(), g.degree.end()) -
                               g.degree.begin()));
  s.push_back(static_cast<int>(std::min_element(g.degree.begin(), g.degree.end()) -
                               g.degree.begin()));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::vector<int> default_starts(const LrpGraph& g) {
  return g.n() <= 1024 ? all_starts(g) : subset_starts(g);
}

}  // namespace lrp

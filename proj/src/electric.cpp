#include "lrp/electric.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

namespace lrp {

int RegionSplit::block_of(int v) const {
  const int label = v == 0 ? n : v;
  for (int i = 0; i < 8; ++i)
    if (label >= block[i].first && label <= block[i].second) return i + 1;
  throw std::logic_error("block_of: label outside all blocks");
}

RegionSplit region_split(int n, bool strict, int u_override) {
  if (n < 8) throw std::invalid_argument("region_split: n must be >= 8");
  if (strict && n % 8 != 0)
    throw std::invalid_argument("region_split: n must be divisible by 8 (strict mode)");
  RegionSplit r;
  r.n = n;
  r.lenient = n % 8 != 0;
  r.a_hi = n / 2;
  r.b_hi = 3 * n / 4;
  for (int i = 1; i <= 8; ++i)
    r.block[i - 1] = {static_cast<int>((static_cast<long>(i) - 1) * n / 8) + 1,
                      static_cast<int>(static_cast<long>(i) * n / 8)};
  r.u_nominal = 3 * n / 8;
  r.u = u_override >= 0 ? u_override : 7 * n / 8;
  if (r.u >= n) throw std::invalid_argument("region_split: u out of range");
  if (r.in_ground(r.u))
    throw std::invalid_argument("region_split: probe u must lie in C, not A u B");
  return r;
}

std::vector<char> ground_mask(const RegionSplit& split) {
  std::vector<char> mask(split.n, 0);
  for (int v = 0; v < split.n; ++v) mask[v] = split.in_ground(v) ? 1 : 0;
  return mask;
}

namespace {

struct FreeIndex {
  std::vector<int> to_global;       // local -> vertex
  std::vector<int> to_local;        // vertex -> local or -1
  explicit FreeIndex(const std::vector<char>& grounded) {
    to_local.assign(grounded.size(), -1);
    for (std::size_t v = 0; v < grounded.size(); ++v)
      if (!grounded[v]) {
        to_local[v] = static_cast<int>(to_global.size());
        to_global.push_back(static_cast<int>(v));
      }
  }
  int size() const { return static_cast<int>(to_global.size()); }
};

Eigen::SparseMatrix<double> restricted_laplacian(const LrpGraph& g, const FreeIndex& f) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int li = 0; li < f.size(); ++li) {
    const int x = f.to_global[li];
    trip.emplace_back(li, li, static_cast<double>(g.degree[x]));
    for (const auto& [y, m] : g.adjacency[x])
      if (f.to_local[y] >= 0) trip.emplace_back(li, f.to_local[y], -static_cast<double>(m));
  }
  Eigen::SparseMatrix<double> lap(f.size(), f.size());
  lap.setFromTriplets(trip.begin(), trip.end());
  lap.makeCompressed();
  return lap;
}

// SPD solve with a residual guarantee; direct up to 512 unknowns, CG above
Eigen::VectorXd laplacian_solve(const Eigen::SparseMatrix<double>& lap,
                                const Eigen::VectorXd& b) {
  Eigen::VectorXd x;
  if (lap.rows() <= 512) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("laplacian_solve: factorization failed");
    x = solver.solve(b);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg(lap);
    cg.setTolerance(1e-14);
    cg.setMaxIterations(20 * lap.rows());
    x = cg.solve(b);
    // one refinement pass mops up what CG leaves behind
    x += cg.solve((b - lap * x).eval());
  }
  const double res = (lap * x - b).lpNorm<Eigen::Infinity>();
  const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  if (!(res <= 1e-8 * scale))
    throw std::runtime_error("laplacian_solve: residual " + std::to_string(res));
  return x;
}

}  // namespace

VoltageSolution solve_voltages(const LrpGraph& g, int source,
                               const std::vector<char>& grounded) {
  const int n = g.n();
  if (static_cast<int>(grounded.size()) != n)
    throw std::invalid_argument("solve_voltages: mask size mismatch");
  if (source < 0 || source >= n || grounded[source])
    throw std::invalid_argument("solve_voltages: source must be a free vertex");
  int n_ground = 0;
  for (char c : grounded) n_ground += c ? 1 : 0;
  if (n_ground == 0) throw std::invalid_argument("solve_voltages: empty ground set");

  const FreeIndex f(grounded);
  const Eigen::SparseMatrix<double> lap = restricted_laplacian(g, f);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(f.size());
  b[f.to_local[source]] = 1.0;
  const Eigen::VectorXd vf = laplacian_solve(lap, b);

  VoltageSolution sol;
  sol.v = Eigen::VectorXd::Zero(n);
  for (int li = 0; li < f.size(); ++li) sol.v[f.to_global[li]] = vf[li];
  sol.residual = (lap * vf - b).lpNorm<Eigen::Infinity>();
  sol.n_free = f.size();
  sol.source = source;
  return sol;
}

double hitting_time_direct(const LrpGraph& g, const std::vector<char>& grounded,
                           int start, bool lazy) {
  const int n = g.n();
  if (start < 0 || start >= n || grounded[start])
    throw std::invalid_argument("hitting_time_direct: start must be free");
  const FreeIndex f(grounded);
  if (f.size() <= 512) {
    // dense (I - P_ff) h = 1, an independent route from the voltage identity
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(f.size(), f.size());
    for (int li = 0; li < f.size(); ++li) {
      const int x = f.to_global[li];
      m(li, li) = lazy ? 0.5 : 1.0;
      const double denom = lazy ? 2.0 * g.degree[x] : static_cast<double>(g.degree[x]);
      for (const auto& [y, mult] : g.adjacency[x])
        if (f.to_local[y] >= 0) m(li, f.to_local[y]) -= mult / denom;
    }
    const Eigen::VectorXd h = m.partialPivLu().solve(Eigen::VectorXd::Ones(f.size()));
    return h[f.to_local[start]];
  }
  // multiply through by deg: (D - A)_ff h = deg_f (doubled under laziness)
  const Eigen::SparseMatrix<double> lap = restricted_laplacian(g, f);
  Eigen::VectorXd b(f.size());
  for (int li = 0; li < f.size(); ++li)
    b[li] = (lazy ? 2.0 : 1.0) * g.degree[f.to_global[li]];
  return laplacian_solve(lap, b)[f.to_local[start]];
}

HittingReport hitting_time(const LrpGraph& g, const RegionSplit& split) {
  if (g.n() != split.n) throw std::invalid_argument("hitting_time: size mismatch");
  HittingReport rep;
  rep.split = split;
  const std::vector<char> grounded = ground_mask(split);
  const VoltageSolution sol = solve_voltages(g, split.u, grounded);
  double t = 0;
  for (int x = 0; x < g.n(); ++x) t += sol.v[x] * g.degree[x];
  rep.t_visits = t;
  rep.t_direct = hitting_time_direct(g, grounded, split.u, false);

  std::int64_t ground_deg = 0;
  for (int x = 0; x < g.n(); ++x)
    if (grounded[x]) ground_deg += g.degree[x];
  rep.pi_ground = static_cast<double>(ground_deg) / g.oriented_edge_count;

  for (int x = 0; x < g.n(); ++x)
    if (g.degree[x] == 2) {
      ++rep.degree2_total;
      ++rep.degree2_per_block[split.block_of(x) - 1];
    }
  return rep;
}

BottleneckReport degree2_bottleneck(const LrpGraph& g, const RegionSplit& split,
                                    const VoltageSolution& sol) {
  const int n = g.n();
  const int u = split.u;
  BottleneckReport rep;
  // side membership: labels b_hi+1..u-1 left of u, u+1..n right of u
  auto side_of = [&](int v) -> int {
    if (split.in_ground(v)) return 0;
    const int label = v == 0 ? n : v;
    if (label > split.b_hi && label < (u == 0 ? n : u)) return -1;
    return +1;
  };
  for (const auto& [y, m] : g.adjacency[u]) {
    const double cur = m * (sol.v[u] - sol.v[y]);
    if (split.in_ground(y))
      rep.current_ground += cur;
    else if (side_of(y) < 0)
      rep.current_left += cur;
    else
      rep.current_right += cur;
  }
  rep.side = rep.current_right >= rep.current_left ? +1 : -1;

  // walk the chosen arc from the ground boundary toward u;
  // right arc in ground->u order is label n (vertex 0), n-1, ..., u+1
  if (rep.side > 0) {
    for (int label = n; label > u; --label) {
      const int v = label % n;
      if (v == u) break;
      if (g.degree[v] == 2) {
        rep.cut_vertices.push_back(v);
        rep.cut_voltages.push_back(sol.v[v]);
      }
    }
  } else {
    for (int v = split.b_hi + 1; v < u; ++v)
      if (g.degree[v] == 2) {
        rep.cut_vertices.push_back(v);
        rep.cut_voltages.push_back(sol.v[v]);
      }
  }
  for (std::size_t i = 1; i < rep.cut_voltages.size(); ++i)
    if (rep.cut_voltages[i] <= rep.cut_voltages[i - 1]) ++rep.inversions;
  return rep;
}

}  // namespace lrp

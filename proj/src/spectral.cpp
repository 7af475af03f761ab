#include "lrp/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lrp/rng.hpp"

namespace lrp {

Eigen::SparseMatrix<double> symmetrized_operator(const ChainView& c) {
  const LrpGraph& g = *c.graph;
  const int n = g.n();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(g.oriented_edge_count) + n);
  for (int x = 0; x < n; ++x) {
    trip.emplace_back(x, x, 0.5);
    for (const auto& [y, m] : g.adjacency[x])
      trip.emplace_back(x, y, m / (2.0 * std::sqrt(static_cast<double>(g.degree[x]) *
                                                   g.degree[y])));
  }
  Eigen::SparseMatrix<double> s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  s.makeCompressed();
  return s;
}

static SpectralResult dense_solve(const ChainView& c) {
  const int n = c.graph->n();
  Eigen::MatrixXd s = Eigen::MatrixXd(symmetrized_operator(c));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("second_eigenvalue: dense solver failed");
  SpectralResult r;
  r.lambda2 = es.eigenvalues()[n - 2];
  r.gap = 1.0 - r.lambda2;
  r.lambda_min = es.eigenvalues()[0];
  r.method = EigMethod::dense;
  return r;
}

static SpectralResult power_solve(const ChainView& c, double tol) {
  const LrpGraph& g = *c.graph;
  const int n = g.n();
  const Eigen::SparseMatrix<double> s = symmetrized_operator(c);
  // exact top eigenvector: phi(x) = sqrt(pi(x)), S phi = phi
  Eigen::VectorXd phi = c.pi.cwiseSqrt();
  phi.normalize();

  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = u01(mix64(g.params.seed ^ (0x5ca1ab1eull + i))) - 0.5;
  v -= phi.dot(v) * phi;
  double norm = v.norm();
  if (norm == 0.0) throw std::runtime_error("second_eigenvalue: degenerate start");
  v /= norm;

  const long max_iter = 200000;
  SpectralResult r;
  r.method = EigMethod::power;
  r.lambda_min = std::numeric_limits<double>::quiet_NaN();
  for (long it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd w = s * v;
    w -= phi.dot(w) * phi;  // re-deflate against fp drift
    const double lambda = v.dot(w);
    const double res = (w - lambda * v).norm();
    r.iterations = it;
    if (res <= tol) {
      r.lambda2 = lambda;
      r.gap = 1.0 - lambda;
      r.residual = res;
      return r;
    }
    norm = w.norm();
    if (norm == 0.0) throw std::runtime_error("second_eigenvalue: iterate vanished");
    v = w / norm;
  }
  Eigen::VectorXd w = s * v;
  w -= phi.dot(w) * phi;
  const double lambda = v.dot(w);
  throw std::runtime_error("second_eigenvalue: power iteration did not converge, residual= " +
                           std::to_string((w - lambda * v).norm()));
}

SpectralResult second_eigenvalue(const ChainView& c, double tol, EigMethod method) {
  if (method == EigMethod::automatic)
    method = c.graph->n() <= 512 ? EigMethod::dense : EigMethod::power;
  SpectralResult r = method == EigMethod::dense ? dense_solve(c) : power_solve(c, tol);
  if (r.gap > tol)
    r.ds_bound = ds_mixing_bound(r, *c.graph);
  else
    r.ds_bound = std::numeric_limits<double>::infinity();
  return r;
}

double ds_mixing_bound(const SpectralResult& r, const LrpGraph& g) {
  if (r.gap <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(4.0 * static_cast<double>(g.oriented_edge_count)) / r.gap;
}

}  // namespace lrp

#pragma once
// Second eigenvalue of the lazy walk via the symmetrized operator
// S = D^{1/2} P D^{-1/2}, S(x,y) = m(x,y) / (2 sqrt(deg x deg y)),
// which shares P's spectrum. Top eigenvector is known exactly
// (phi(x) = sqrt(pi(x))), so the power method runs deflated against it.

#include <Eigen/Sparse>

#include "lrp/chain.hpp"

namespace lrp {

enum class EigMethod { automatic, dense, power };

struct SpectralResult {
  double lambda2 = 0;    // second-largest eigenvalue of P
  double gap = 0;        // 1 - lambda2
  double ds_bound = 0;   // ln(4|E|) / gap, +inf when gap <= tol
  double lambda_min = 0; // smallest eigenvalue (dense method only, else NaN)
  double residual = 0;   // ||S v - lambda v|| at termination (power method)
  long iterations = 0;
  EigMethod method = EigMethod::dense;
};

Eigen::SparseMatrix<double> symmetrized_operator(const ChainView& c);

// automatic: dense up to n = 512, power iteration above.
// Throws std::runtime_error if the power method fails to reach tol.
SpectralResult second_eigenvalue(const ChainView& c, double tol = 1e-8,
                                 EigMethod method = EigMethod::automatic);

// ln(4 |E|) / gap with |E| the oriented edge count
double ds_mixing_bound(const SpectralResult& r, const LrpGraph& g);

}  // namespace lrp

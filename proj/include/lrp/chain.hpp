#pragma once
// Lazy random walk on a sampled graph: P(x,x) = 1/2, P(x,y) = m(x,y)/(2 deg x).
// Stationary distribution pi(x) = deg(x) / sum_z deg(z). Mixing times are
// measured in total variation from worst-case point-mass starts.

#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

struct ChainView {
  const LrpGraph* graph = nullptr;
  Eigen::VectorXd pi;
  Eigen::SparseMatrix<double> pt;  // transpose of P: distributions evolve as pt * d
};

ChainView make_chain(const LrpGraph& g);

double transition_prob(const ChainView& c, int x, int y);

// point mass at x
Eigen::VectorXd point_mass(int n, int x);

// one lazy-walk step of a distribution (mass preserved exactly up to fp)
Eigen::VectorXd step(const ChainView& c, const Eigen::VectorXd& dist);

// total variation distance to stationarity
double tv_distance(const ChainView& c, const Eigen::VectorXd& dist);

struct TauResult {
  long tau = 0;
  bool truncated = false;  // tv still above eps at t_max; tau holds t_max
};

// first t with ||P^t(x,.) - pi||_TV <= eps, by explicit distribution evolution
TauResult tau_from(const ChainView& c, int x, double eps, long t_max);

struct MixingEstimate {
  long tau = 0;  // max over starts
  std::vector<std::pair<int, long>> per_start;
  bool truncated = false;
};

MixingEstimate mixing_time(const ChainView& c, const std::vector<int>& starts,
                           long t_max, double eps = 0.25);

std::vector<int> all_starts(const LrpGraph& g);
// 16 stride-spaced starts plus the max- and min-degree vertices
std::vector<int> subset_starts(const LrpGraph& g);
// all starts up to n = 1024, the deterministic subset above
std::vector<int> default_starts(const LrpGraph& g);

inline long default_t_max(int n) { return 64L * n * n; }

}  // namespace lrp

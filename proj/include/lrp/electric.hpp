#pragma once
// Electrical-network view: conductance of an edge = its multiplicity.
// Ground the arc A u B = {1..3n/4}, inject unit current at a probe u in C,
// and read expected hitting times from the voltage profile:
//   E_u[visits to x before hitting ground] = v(x) deg(x),
//   E_u[T_ground] = sum_x v(x) deg(x)   (simple, non-lazy walk).
// Vertices carry labels 1..n with vertex n stored at index 0.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

struct RegionSplit {
  int n = 0;
  int a_hi = 0;      // A = labels [1, a_hi]
  int b_hi = 0;      // B = labels [a_hi+1, b_hi]; C = the rest
  int u = 0;         // probe vertex index; default 7n/8 (interior of C)
  int u_nominal = 0;   // 3n/8, recorded for reference; lies inside A
  bool lenient = false;
  std::array<std::pair<int, int>, 8> block;  // K_i label ranges, i = 1..8

  bool in_ground(int v) const { return v >= 1 && v <= b_hi; }
  int block_of(int v) const;  // 1..8, vertex index 0 counts as label n
};

// strict: requires n % 8 == 0; lenient rounds boundaries down and flags it.
// u_override picks the probe (must lie in C); -1 keeps the default 7n/8.
RegionSplit region_split(int n, bool strict = true, int u_override = -1);

std::vector<char> ground_mask(const RegionSplit& split);

struct VoltageSolution {
  Eigen::VectorXd v;      // full length, 0 on grounded vertices
  double residual = 0;    // ||L_ff v_f - b||_inf
  int n_free = 0;
  int source = 0;
};

// unit current at source, zero potential on grounded; direct factorization
// up to 512 free vertices, preconditioned CG above
VoltageSolution solve_voltages(const LrpGraph& g, int source,
                               const std::vector<char>& grounded);

// E_start[T_ground] from the first-step system (I - P_ff) h = 1; when lazy,
// P is the lazy kernel (doubles the answer exactly)
double hitting_time_direct(const LrpGraph& g, const std::vector<char>& grounded,
                           int start, bool lazy = false);

struct HittingReport {
  RegionSplit split;
  double t_visits = 0;   // sum_x v(x) deg(x)
  double t_direct = 0;   // (I - P_ff) h = 1 route
  double pi_ground = 0;  // stationary mass of A u B
  std::array<std::int64_t, 8> degree2_per_block{};
  std::int64_t degree2_total = 0;
};

HittingReport hitting_time(const LrpGraph& g, const RegionSplit& split);

struct BottleneckReport {
  int side = 0;  // +1: arc from u toward n (and ground at 1); -1: toward 3n/4
  double current_left = 0, current_right = 0, current_ground = 0;
  std::vector<int> cut_vertices;    // degree-2 vertices, ordered ground -> u
  std::vector<double> cut_voltages;
  int inversions = 0;  // adjacent non-increasing steps (diagnostic)
};

// degree-2 vertices on the side of u carrying the larger current; these are
// the cut points every unit of current must squeeze through
BottleneckReport degree2_bottleneck(const LrpGraph& g, const RegionSplit& split,
                                    const VoltageSolution& sol);

}  // namespace lrp

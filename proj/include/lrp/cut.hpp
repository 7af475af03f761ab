#pragma once
// Arc cuts: A ranges over contiguous cyclic segments. |dA| counts crossing
// edges with multiplicity; the arc constant min |dA|/|A| feeds a
// mixing-time lower bound tau >= ((1-ln 2)/2) (1/(2C) - 1).

#include <cstdint>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

struct CutReport {
  int start = 0;
  int length = 0;
  std::int64_t boundary = 0;
  double ratio = 0;        // boundary / |A|
  double conductance = 0;  // boundary / vol(A), diagnostic only
  double tau_lower = 0;
};

// edges with exactly one endpoint in the arc [start, start+length) mod n,
// counted with multiplicity
std::int64_t arc_boundary(const LrpGraph& g, int start, int length);

// argmin of boundary/|A| over all n starts and the given lengths
// (default: the single length n/2); first minimum in scan order wins
CutReport cheeger_arcs(const LrpGraph& g, std::vector<int> lengths = {});

double cheeger_tau_lower(double ratio);

}  // namespace lrp

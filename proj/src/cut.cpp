#include "lrp/cut.hpp"

#include <cmath>
#include <stdexcept>

namespace lrp {

static bool in_arc(int y, int start, int length, int n) {
  return (y - start + n) % n < length;
}

std::int64_t arc_boundary(const LrpGraph& g, int start, int length) {
  const int n = g.n();
  if (length < 1 || length > n - 1)
    throw std::invalid_argument("arc_boundary: length must be in [1, n-1]");
  if (start < 0 || start >= n)
    throw std::invalid_argument("arc_boundary: start out of range");
  std::int64_t b = 0;
  for (int i = 0; i < length; ++i) {
    const int x = (start + i) % n;
    for (const auto& [y, m] : g.adjacency[x])
      if (!in_arc(y, start, length, n)) b += m;
  }
  return b;
}

CutReport cheeger_arcs(const LrpGraph& g, std::vector<int> lengths) {
  const int n = g.n();
  if (lengths.empty()) lengths = {n / 2};
  CutReport best;
  bool have = false;
  for (int len : lengths) {
    if (len < 1 || len > n - 1)
      throw std::invalid_argument("cheeger_arcs: length must be in [1, n-1]");
    std::int64_t boundary = arc_boundary(g, 0, len);
    std::int64_t vol = 0;
    for (int i = 0; i < len; ++i) vol += g.degree[i];
    for (int start = 0; start < n; ++start) {
      const double ratio = static_cast<double>(boundary) / len;
      if (!have || ratio < best.ratio) {
        have = true;
        best.start = start;
        best.length = len;
        best.boundary = boundary;
        best.ratio = ratio;
        best.conductance = static_cast<double>(boundary) / vol;
      }
      // slide [start, start+len) -> [start+1, start+1+len): vertex `start`
      // leaves, vertex `start+len` enters; O(deg) boundary update
      const int a = start;
      const int b = (start + len) % n;
      const int na = (start + 1) % n;
      for (const auto& [y, m] : g.adjacency[a]) {
        if (y == b) continue;  // {a,b} crosses before and after
        boundary += in_arc(y, na, len, n) ? m : -m;
      }
      for (const auto& [y, m] : g.adjacency[b]) {
        if (y == a) continue;
        boundary += in_arc(y, na, len, n) ? -m : m;
      }
      vol += g.degree[b] - g.degree[a];
    }
  }
  best.tau_lower = cheeger_tau_lower(best.ratio);
  return best;
}

double cheeger_tau_lower(double ratio) {
  if (!(ratio > 0.0)) throw std::invalid_argument("cheeger_tau_lower: ratio must be > 0");
  const double v = 0.5 * (1.0 - std::log(2.0)) * (1.0 / (2.0 * ratio) - 1.0);
  return v > 0.0 ? v : 0.0;
}

}  // namespace lrp

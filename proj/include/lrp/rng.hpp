#pragma once
// Counter-based randomness: every edge indicator is a pure function of
// (seed, x, y), so graphs are reproducible independent of sampling order
// and individual pairs can be re-queried without materializing the graph.

#include <cstdint>

namespace lrp {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

// uniform in [0,1) from 53 high bits
inline double u01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// one word per unordered pair, invariant under argument swap
inline std::uint64_t pair_bits(std::uint64_t seed, std::uint64_t x, std::uint64_t y) {
  const std::uint64_t lo = x < y ? x : y;
  const std::uint64_t hi = x < y ? y : x;
  std::uint64_t h = mix64(seed);
  h = hash_combine(h, lo);
  h = hash_combine(h, hi);
  return h;
}

// small sequential generator for Monte Carlo utilities
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += kGolden;
    return mix64(state - kGolden);
  }
  double next_u01() { return u01(next()); }
};

}  // namespace lrp

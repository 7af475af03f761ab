#pragma once
// Long-range percolation on the N-cycle: cycle edges plus independent
// long-range edges, P[edge {x,y}] = 1 - exp(-beta * dist(x,y)^-s) with
// cyclic distance. Multigraph semantics: a long-range edge parallel to a
// cycle edge keeps multiplicity 2 unless simple_graph collapses it.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lrp {

struct ModelParams {
  int n = 0;
  double s = 1.5;
  double beta = 1.0;
  std::uint64_t seed = 0;
  bool simple_graph = false;  // collapse parallel edges (diagnostic variant)
};

constexpr int kDefaultMaxN = 1 << 16;

struct LrpGraph {
  ModelParams params;
  // adjacency[x] = sorted (neighbor, multiplicity), multiplicity in {1,2}
  std::vector<std::vector<std::pair<int, int>>> adjacency;
  std::vector<int> degree;                 // sum of incident multiplicities
  std::int64_t oriented_edge_count = 0;    // sum of degrees (= 2 * edges)

  int n() const { return params.n; }
  int max_degree() const;
  int min_degree() const;
  // multiplicity of {x,y}, 0 if absent
  int multiplicity(int x, int y) const;
};

int cyclic_distance(int x, int y, int n);

// P[at least one long-range edge between x and y]; throws on x == y
double edge_probability(int x, int y, const ModelParams& p);

// counter-based indicator for the long-range edge at pair {x,y}
bool pair_has_long_edge(const ModelParams& p, int x, int y);

// Samples the graph. Throws std::invalid_argument on bad parameters and
// std::runtime_error when n exceeds max_n (quadratic-work guard).
LrpGraph sample_graph(const ModelParams& p, int max_n = kDefaultMaxN);

// vertices whose total degree is exactly 2 (no long-range edge incident)
std::vector<int> degree2_vertices(const LrpGraph& g);

// Plain-text serialization: header "lrp N S BETA SEED", then one
// "x y multiplicity" line per edge with x < y, sorted lexicographically.
// Byte-for-byte deterministic; floats at 17 significant digits.
void write_graph(const LrpGraph& g, std::ostream& out);
std::string graph_to_string(const LrpGraph& g);
LrpGraph read_graph(std::istream& in);
LrpGraph graph_from_string(const std::string& text);

// %.17g rendering shared by all text outputs
std::string format_double(double v);

}  // namespace lrp

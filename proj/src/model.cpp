#include "lrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lrp/rng.hpp"

namespace lrp {

int cyclic_distance(int x, int y, int n) {
  if (n <= 0) throw std::invalid_argument("cyclic_distance: n must be positive");
  if (x < 0 || x >= n || y < 0 || y >= n)
    throw std::invalid_argument("cyclic_distance: vertex out of range");
  const int d = std::abs(x - y);
  return std::min(d, n - d);
}

double edge_probability(int x, int y, const ModelParams& p) {
  if (x == y) throw std::invalid_argument("edge_probability: x == y");
  const int d = cyclic_distance(x, y, p.n);
  // 1 - exp(-beta d^-s), computed as -expm1 for small arguments
  return -std::expm1(-p.beta * std::pow(static_cast<double>(d), -p.s));
}

bool pair_has_long_edge(const ModelParams& p, int x, int y) {
  const double mu = edge_probability(x, y, p);
  return u01(pair_bits(p.seed, static_cast<std::uint64_t>(std::min(x, y)),
                       static_cast<std::uint64_t>(std::max(x, y)))) < mu;
}

int LrpGraph::max_degree() const {
  return *std::max_element(degree.begin(), degree.end());
}

int LrpGraph::min_degree() const {
  return *std::min_element(degree.begin(), degree.end());
}

int LrpGraph::multiplicity(int x, int y) const {
  const auto& row = adjacency[x];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(y, 0));
  if (it != row.end() && it->first == y) return it->second;
  return 0;
}

static void validate_params(const ModelParams& p, int max_n) {
  if (p.n < 3) throw std::invalid_argument("sample_graph: n must be >= 3");
  if (p.n > max_n)
    throw std::runtime_error("sample_graph: n exceeds max_n guard (" +
                             std::to_string(max_n) + ")");
  if (!(p.s > 0.0)) throw std::invalid_argument("sample_graph: s must be > 0");
  if (!(p.beta >= 0.0)) throw std::invalid_argument("sample_graph: beta must be >= 0");
}

LrpGraph sample_graph(const ModelParams& p, int max_n) {
  validate_params(p, max_n);
  const int n = p.n;
  LrpGraph g;
  g.params = p;
  g.adjacency.assign(n, {});

  // cycle edges
  for (int x = 0; x < n; ++x) {
    g.adjacency[x].push_back({(x + 1) % n, 1});
    g.adjacency[x].push_back({(x - 1 + n) % n, 1});
  }
  // long-range edges, one Bernoulli per unordered pair
  if (p.beta > 0.0) {
    for (int x = 0; x < n; ++x) {
      for (int y = x + 1; y < n; ++y) {
        if (pair_has_long_edge(p, x, y)) {
          g.adjacency[x].push_back({y, 1});
          g.adjacency[y].push_back({x, 1});
        }
      }
    }
  }
  // sort rows, coalesce parallel entries into multiplicities
  g.degree.assign(n, 0);
  for (int x = 0; x < n; ++x) {
    auto& row = g.adjacency[x];
    std::sort(row.begin(), row.end());
    std::vector<std::pair<int, int>> merged;
    merged.reserve(row.size());
    for (const auto& e : row) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
    }
    if (p.simple_graph)
      for (auto& e : merged) e.second = 1;
    row = std::move(merged);
    int d = 0;
    for (const auto& e : row) d += e.second;
    g.degree[x] = d;
    g.oriented_edge_count += d;
  }
  return g;
}

std::vector<int> degree2_vertices(const LrpGraph& g) {
  std::vector<int> out;
  for (int x = 0; x < g.n(); ++x)
    if (g.degree[x] == 2) out.push_back(x);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_graph(const LrpGraph& g, std::ostream& out) {
  out << "lrp " << g.params.n << ' ' << format_double(g.params.s) << ' '
      << format_double(g.params.beta) << ' ' << g.params.seed << '\n';
  for (int x = 0; x < g.n(); ++x)
    for (const auto& [y, m] : g.adjacency[x])
      if (x < y) out << x << ' ' << y << ' ' << m << '\n';
}

std::string graph_to_string(const LrpGraph& g) {
  std::ostringstream os;
  write_graph(g, os);
  return os.str();
}

LrpGraph read_graph(std::istream& in) {
  std::string tag;
  LrpGraph g;
  if (!(in >> tag) || tag != "lrp")
    throw std::runtime_error("read_graph: missing 'lrp' header");
  if (!(in >> g.params.n >> g.params.s >> g.params.beta >> g.params.seed))
    throw std::runtime_error("read_graph: malformed header");
  if (g.params.n < 3) throw std::runtime_error("read_graph: bad n");
  const int n = g.params.n;
  g.adjacency.assign(n, {});
  int x, y, m;
  long long lines = 0;
  while (in >> x >> y >> m) {
    ++lines;
    if (x < 0 || y < 0 || x >= n || y >= n || x >= y || m < 1 || m > 2)
      throw std::runtime_error("read_graph: bad edge line " + std::to_string(lines));
    g.adjacency[x].push_back({y, m});
    g.adjacency[y].push_back({x, m});
  }
  g.degree.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    auto& row = g.adjacency[v];
    std::sort(row.begin(), row.end());
    for (std::size_t i = 1; i < row.size(); ++i)
      if (row[i].first == row[i - 1].first)
        throw std::runtime_error("read_graph: duplicate edge line");
    int d = 0;
    for (const auto& e : row) d += e.second;
    g.degree[v] = d;
    g.oriented_edge_count += d;
  }
  // cycle edges are mandatory
  for (int v = 0; v < n; ++v)
    if (g.multiplicity(v, (v + 1) % n) == 0)
      throw std::runtime_error("read_graph: missing cycle edge at " + std::to_string(v));
  return g;
}

LrpGraph graph_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_graph(is);
}

}  // namespace lrp

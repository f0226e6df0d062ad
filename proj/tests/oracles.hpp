// Slow, independent re-implementations used as test oracles. They share no
// code with the library beyond the graph container.
#ifndef PAMOD_TESTS_ORACLES_HPP
#define PAMOD_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "pamod/graph.hpp"
#include "pamod/rng.hpp"

namespace oracle {

using pamod::Edge;
using pamod::Multigraph;
using pamod::vertex_t;

inline Multigraph make_graph(vertex_t n, std::vector<std::pair<vertex_t, vertex_t>> pairs) {
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v});
  return Multigraph(n, std::move(edges));
}

inline Multigraph two_triangles() {
  return make_graph(6, {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}});
}

/// Multigraph with loops and parallel edges: m uniform endpoint pairs.
inline Multigraph random_multigraph(vertex_t n, std::uint64_t m, pamod::Rng& rng) {
  std::vector<Edge> edges;
  for (std::uint64_t i = 0; i < m; ++i) {
    const auto u = static_cast<vertex_t>(rng.below(n) + 1);
    const auto v = static_cast<vertex_t>(rng.below(n) + 1);
    edges.push_back({u, v});
  }
  return Multigraph(n, std::move(edges));
}

inline bool in_mask(std::uint64_t mask, vertex_t v) { return (mask >> (v - 1)) & 1; }

inline double edges_inside(const Multigraph& g, const std::function<bool(vertex_t)>& in) {
  double e = 0;
  for (const Edge& edge : g.edges()) e += in(edge.u) && in(edge.v);
  return e;
}

inline double volume_of(const Multigraph& g, const std::function<bool(vertex_t)>& in) {
  double vol = 0;
  for (const Edge& edge : g.edges()) vol += double(in(edge.u)) + double(in(edge.v));
  return vol;
}

/// Score of a labelling straight from the definition.
inline double score(const Multigraph& g, const std::vector<int>& label) {
  const double m = static_cast<double>(g.num_edges());
  if (m == 0) return 0.0;
  const int k = *std::max_element(label.begin(), label.end()) + 1;
  double q = 0;
  for (int c = 0; c < k; ++c) {
    auto in = [&](vertex_t v) { return label[v - 1] == c; };
    const double e = edges_inside(g, in);
    const double vol = volume_of(g, in);
    q += e / m - (vol / (2 * m)) * (vol / (2 * m));
  }
  return q;
}

/// Maximum over all set partitions, generated by placing each vertex into an
/// existing block or a new one.
inline double max_modularity(const Multigraph& g) {
  const vertex_t n = g.num_vertices();
  std::vector<int> label(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(vertex_t, int)> place = [&](vertex_t v, int blocks) {
    if (v == n) {
      best = std::max(best, score(g, label));
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      label[v] = b;
      place(v + 1, std::max(blocks, b + 1));
    }
  };
  place(0, 0);
  return best;
}

/// max over S of e(S)/m - vol(S)^2/(2m)^2.
inline double max_single_set_term(const Multigraph& g) {
  const double m = static_cast<double>(g.num_edges());
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.num_vertices()); ++mask) {
    auto in = [&](vertex_t v) { return in_mask(mask, v); };
    const double vol = volume_of(g, in);
    best = std::max(best, edges_inside(g, in) / m - (vol / (2 * m)) * (vol / (2 * m)));
  }
  return best;
}

/// Best partition into at most two parts.
inline double max_bipartition(const Multigraph& g) {
  const vertex_t n = g.num_vertices();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> label(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (vertex_t v = 1; v <= n; ++v) label[v - 1] = in_mask(mask, v) ? 1 : 0;
    if (mask == 0 || mask + 1 == (std::uint64_t{1} << n)) {
      std::fill(label.begin(), label.end(), 0);
    }
    best = std::max(best, score(g, label));
  }
  return best;
}

/// min over 1 <= |S| <= n/2 of e(S, V\S)/|S|.
inline double expansion(const Multigraph& g) {
  const vertex_t n = g.num_vertices();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const int size = __builtin_popcountll(mask);
    if (2 * size > static_cast<int>(n)) continue;
    double cut = 0;
    for (const Edge& e : g.edges()) cut += in_mask(mask, e.u) != in_mask(mask, e.v);
    best = std::min(best, cut / size);
  }
  return best;
}

}  // namespace oracle

#endif  // PAMOD_TESTS_ORACLES_HPP

#ifndef PAMOD_GRAPH_HPP
#define PAMOD_GRAPH_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace pamod {

/// Vertex and mini-vertex identifiers are 1-based, as in [n] = {1, ..., n}.
using vertex_t = std::uint32_t;

/// Unordered pair of endpoints; u == v is a loop.
struct Edge {
  vertex_t u = 0;
  vertex_t v = 0;

  constexpr bool is_loop() const noexcept { return u == v; }
  friend constexpr bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected multigraph on [n]. Loops and parallel edges are kept; a loop
/// contributes 2 to the degree of its vertex. Immutable after construction.
class Multigraph {
 public:
  Multigraph() = default;
  /// Throws std::invalid_argument if an endpoint lies outside [1, n].
  Multigraph(vertex_t n, std::vector<Edge> edges);

  vertex_t num_vertices() const noexcept { return n_; }
  std::uint64_t num_edges() const noexcept { return edges_.size(); }
  /// vol(G) = 2|E|.
  std::uint64_t volume() const noexcept { return 2 * edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::uint64_t degree(vertex_t v) const { return degrees_.at(v - 1); }
  /// Degrees indexed by v - 1.
  std::span<const std::uint64_t> degrees() const noexcept { return degrees_; }

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  vertex_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> degrees_;
};

/// Dense symmetric multiplicity matrix (loops on the diagonal) for the small
/// graphs handled by exhaustive algorithms.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(const Multigraph& graph);

  vertex_t size() const noexcept { return n_; }
  /// Multiplicity of {u, v}, 0-based indices.
  std::uint64_t operator()(vertex_t u, vertex_t v) const noexcept {
    return weights_[static_cast<std::size_t>(u) * n_ + v];
  }

 private:
  vertex_t n_;
  std::vector<std::uint64_t> weights_;
};

/// Compressed rows of distinct neighbours with multiplicities; loops are
/// dropped and counted separately. Indices are 0-based.
struct WeightedAdjacency {
  std::vector<std::uint64_t> offsets;
  std::vector<vertex_t> neighbours;
  std::vector<std::uint64_t> weights;
  std::vector<std::uint64_t> loops;

  explicit WeightedAdjacency(const Multigraph& graph);

  std::span<const vertex_t> row(vertex_t v) const noexcept {
    return {neighbours.data() + offsets[v], neighbours.data() + offsets[v + 1]};
  }
  std::span<const std::uint64_t> row_weights(vertex_t v) const noexcept {
    return {weights.data() + offsets[v], weights.data() + offsets[v + 1]};
  }
};

}  // namespace pamod

#endif  // PAMOD_GRAPH_HPP

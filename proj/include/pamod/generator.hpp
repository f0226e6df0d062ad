#ifndef PAMOD_GENERATOR_HPP
#define PAMOD_GENERATOR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pamod/graph.hpp"

namespace pamod {

/// The random tree T_M on mini-vertices [M] (loops allowed).
///
/// Edge t is added when mini-vertex t arrives and joins t to target(t) <= t;
/// target(t) == t is a loop. Edges are kept in arrival order so prefixes T_t
/// can be replayed without regenerating.
class MiniTree {
 public:
  MiniTree() = default;
  /// Builds a tree from an explicit target sequence (targets[t-1] = target of
  /// mini-vertex t). Throws std::invalid_argument unless targets[0] == 1 and
  /// 1 <= targets[t-1] <= t for every t.
  MiniTree(std::vector<vertex_t> targets, std::uint64_t seed);

  std::uint64_t size() const noexcept { return targets_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }

  vertex_t target(vertex_t t) const { return targets_.at(t - 1); }
  Edge edge(vertex_t t) const { return {t, target(t)}; }
  std::span<const vertex_t> targets() const noexcept { return targets_; }

  /// Degree in T_M, loops counted twice.
  std::uint64_t degree(vertex_t s) const { return degrees_.at(s - 1); }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }

  friend bool operator==(const MiniTree&, const MiniTree&) = default;

 private:
  std::vector<vertex_t> targets_;
  std::vector<std::uint32_t> degrees_;
  std::uint64_t seed_ = 0;
};

/// G_n^h: the multigraph obtained by merging mini-vertices
/// {h(i-1)+1, ..., hi} of T_{hn} into vertex i.
struct PAGraph {
  Multigraph graph;
  std::uint32_t h = 1;
  std::uint64_t seed = 0;

  vertex_t n() const noexcept { return graph.num_vertices(); }
  /// M = hn, the number of edges and of mini-vertices.
  std::uint64_t mini_count() const noexcept { return std::uint64_t{h} * n(); }

  friend bool operator==(const PAGraph&, const PAGraph&) = default;
};

/// The auxiliary graph on [M] where {i, j} is present independently with
/// probability 1/(2 sqrt(ij)); loops {i, i} appear with probability 1/(2i).
struct GHatGraph {
  std::uint64_t M = 0;
  std::vector<Edge> edges;  ///< u <= v, sorted by (u, v)
};

/// Samples T_M. At step t+1 the new mini-vertex joins s <= t with probability
/// deg_{T_t}(s)/(2t+1) and itself with probability 1/(2t+1). O(M) time.
/// Throws std::invalid_argument for M == 0 or M >= 2^32.
MiniTree generate_tree(std::uint64_t M, std::uint64_t seed);

/// Phase-2 merge: mini-vertex m becomes vertex ceil(m/h). Throws
/// std::invalid_argument if h == 0 or h does not divide tree.size().
PAGraph merge(const MiniTree& tree, std::uint32_t h);

/// merge(generate_tree(h * n, seed), h) without keeping the tree alive.
PAGraph generate_graph(vertex_t n, std::uint32_t h, std::uint64_t seed);

enum class GHatMethod {
  skip,   ///< geometric skipping with thinning, O(M + |E|) expected
  naive,  ///< one Bernoulli draw per pair, O(M^2)
};

/// Throws std::invalid_argument for M == 0 or M >= 2^32.
GHatGraph generate_ghat(std::uint64_t M, std::uint64_t seed,
                        GHatMethod method = GHatMethod::skip);

}  // namespace pamod

#endif  // PAMOD_GENERATOR_HPP

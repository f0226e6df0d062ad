#ifndef PAMOD_MODULARITY_HPP
#define PAMOD_MODULARITY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pamod/graph.hpp"

namespace pamod {

/// Assignment of every vertex to a community. labels[v - 1] is the community
/// of v; ids are dense and 0-based.
class Partition {
 public:
  Partition() = default;
  /// Relabels `labels` densely in order of first appearance. Throws
  /// std::invalid_argument when empty.
  explicit Partition(std::vector<std::uint32_t> labels);

  static Partition trivial(vertex_t n) { return Partition(std::vector<std::uint32_t>(n, 0)); }
  static Partition singletons(vertex_t n);

  vertex_t size() const noexcept { return static_cast<vertex_t>(labels_.size()); }
  std::uint32_t community_count() const noexcept { return communities_; }
  std::uint32_t label(vertex_t v) const { return labels_.at(v - 1); }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::uint32_t> labels_;
  std::uint32_t communities_ = 0;
};

/// sum over parts of e(S)/e(G) - (vol(S)/vol(G))^2; 0 for a graph without
/// edges. Throws std::invalid_argument on a size mismatch.
double modularity_score(const Multigraph& graph, const Partition& partition);

struct ModularityResult {
  double score = 0.0;
  Partition partition;
};

/// Exhaustive maximum over all set partitions, enumerated as restricted
/// growth strings. Throws capacity_error for n > 12.
ModularityResult modularity_exact(const Multigraph& graph);

/// Maximum of mod_A over partitions with at most two parts ({V} or
/// {S, V \ S}); exhaustive, throws capacity_error for n > 20.
ModularityResult best_bipartition(const Multigraph& graph);

enum class GreedyBackend { automatic, dense, sparse };

struct GreedyOptions {
  GreedyBackend backend = GreedyBackend::automatic;
  /// Priority of each vertex (indexed by v - 1) used to order communities for
  /// tie-breaking: a community is represented by its member of lowest rank
  /// and equal gains go to the lexicographically smallest (rank, rank) pair.
  /// Empty means rank(v) = v.
  std::vector<std::uint32_t> tie_rank;
};

/// Agglomerative merging from singletons: repeatedly merge the pair of
/// communities with the largest positive gain until none is positive. Gains
/// are compared exactly in integer arithmetic. Falls back to the trivial
/// partition when the result scores below 0. Throws std::invalid_argument for
/// a graph without edges.
ModularityResult modularity_greedy(const Multigraph& graph, const GreedyOptions& options = {});

enum class DinhThaiMode { exact, search };

struct DinhThaiOptions {
  DinhThaiMode mode = DinhThaiMode::exact;
  std::uint32_t restarts = 32;
  std::uint64_t seed = 0;
};

struct DinhThaiResult {
  /// max{0, 4 * inner_max}.
  double bound = 0.0;
  /// max over S of e(S)/e(G) - vol(S)^2/vol(G)^2 (best found in search mode).
  double inner_max = 0.0;
  /// Only exact mode certifies an upper bound on modularity; search mode
  /// under-estimates the inner maximum.
  bool certified = true;
  std::vector<vertex_t> witness;
};

/// Exact mode throws capacity_error for n > 20.
DinhThaiResult dinh_thai_bound(const Multigraph& graph, const DinhThaiOptions& options = {});

/// min{(1+eps) f(h)/sqrt(h), corollary_bound(h), 1}. Throws
/// std::invalid_argument for h == 0 or eps < 0.
double theoretical_upper_bound(std::uint32_t h, double epsilon);

}  // namespace pamod

#endif  // PAMOD_MODULARITY_HPP

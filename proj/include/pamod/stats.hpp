#ifndef PAMOD_STATS_HPP
#define PAMOD_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pamod/generator.hpp"
#include "pamod/graph.hpp"
#include "pamod/subset.hpp"

namespace pamod {

/// vol(S), e(S) and e(S, V \ S) of one subset. A loop inside S counts once in
/// `within`, twice in `volume`, never in `between`.
struct SubsetCounts {
  std::uint64_t volume = 0;
  std::uint64_t within = 0;
  std::uint64_t between = 0;

  friend bool operator==(const SubsetCounts&, const SubsetCounts&) = default;
};

/// One pass over the edge multiset, OpenMP-parallel. Throws
/// std::invalid_argument if the subset universe differs from the graph's.
SubsetCounts subset_counts(const Multigraph& graph, const VertexSubset& subset);

std::uint64_t vol(const Multigraph& graph, const VertexSubset& subset);
std::uint64_t e_within(const Multigraph& graph, const VertexSubset& subset);
std::uint64_t e_between(const Multigraph& graph, const VertexSubset& subset);

/// Counts of S~_t inside the prefix tree T_t, read through subset's mini view.
/// Throws std::invalid_argument if t > tree.size() or the mini universe of the
/// subset is not tree.size().
SubsetCounts prefix_counts(const MiniTree& tree, const VertexSubset& subset, std::uint64_t t);

/// Per-community e(S) and vol(S) for a labelling of [n] (labels indexed by
/// v - 1, values < community_count).
struct CommunityCounts {
  std::vector<std::uint64_t> within;
  std::vector<std::uint64_t> volume;
};
CommunityCounts community_counts(const Multigraph& graph, std::span<const std::uint32_t> labels,
                                 std::uint32_t community_count);

enum class ExpansionMode { exact, heuristic };

struct ExpansionResult {
  double value = 0.0;
  /// True for exhaustive results. Heuristic values only bound delta(G) from
  /// above.
  bool exact = true;
  std::vector<vertex_t> witness;
};

struct ExpansionOptions {
  ExpansionMode mode = ExpansionMode::exact;
  vertex_t exhaustive_cap = 20;
  std::uint32_t restarts = 32;
  std::uint64_t seed = 0;
};

/// delta(G) = min over 1 <= |S| <= n/2 of e(S, V \ S) / |S|.
/// Exact mode throws capacity_error when n exceeds the cap; n < 2 throws
/// std::invalid_argument.
ExpansionResult edge_expansion(const Multigraph& graph, const ExpansionOptions& options = {});

/// 1 - min{delta / (2h), 1/16}, the expansion-based modularity bound.
double expansion_modularity_bound(double delta, std::uint32_t h);

namespace reference {

/// Serial reference for subset_counts.
SubsetCounts subset_counts(const Multigraph& graph, const VertexSubset& subset);

}  // namespace reference

}  // namespace pamod

#endif  // PAMOD_STATS_HPP

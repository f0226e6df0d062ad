#include "pamod/stats.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pamod/errors.hpp"
#include "pamod/rng.hpp"

namespace pamod {

// ---------------------------------------------------------------------------
// VertexSubset

VertexSubset::VertexSubset(vertex_t n, std::uint32_t h) : n_(n), h_(h), members_(n, 0) {
  if (n == 0 || h == 0) throw std::invalid_argument("subset needs n >= 1 and h >= 1");
}

VertexSubset VertexSubset::all(vertex_t n, std::uint32_t h) {
  VertexSubset s(n, h);
  std::fill(s.members_.begin(), s.members_.end(), std::uint8_t{1});
  return s;
}

VertexSubset VertexSubset::prefix(vertex_t n, std::uint32_t h, vertex_t k) {
  if (k > n) throw std::invalid_argument("prefix length exceeds n");
  VertexSubset s(n, h);
  std::fill_n(s.members_.begin(), k, std::uint8_t{1});
  return s;
}

VertexSubset VertexSubset::from_ids(vertex_t n, std::uint32_t h, std::span<const vertex_t> ids) {
  VertexSubset s(n, h);
  for (vertex_t v : ids) {
    if (v < 1 || v > n) throw std::invalid_argument("vertex id " + std::to_string(v) + " outside [1,n]");
    s.members_[v - 1] = 1;
  }
  return s;
}

std::uint64_t VertexSubset::size() const noexcept {
  return static_cast<std::uint64_t>(std::count(members_.begin(), members_.end(), std::uint8_t{1}));
}

std::vector<vertex_t> VertexSubset::ids() const {
  std::vector<vertex_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i]) out.push_back(static_cast<vertex_t>(i + 1));
  }
  return out;
}

VertexSubset VertexSubset::complement() const {
  VertexSubset s(*this);
  for (auto& b : s.members_) b ^= 1;
  return s;
}

// ---------------------------------------------------------------------------
// Subset statistics

namespace {

void check_universe(const Multigraph& graph, const VertexSubset& subset) {
  if (subset.universe() != graph.num_vertices()) {
    throw std::invalid_argument("subset over [" + std::to_string(subset.universe()) +
                                "] used with a graph on [" + std::to_string(graph.num_vertices()) +
                                "]");
  }
}

}  // namespace

SubsetCounts reference::subset_counts(const Multigraph& graph, const VertexSubset& subset) {
  check_universe(graph, subset);
  SubsetCounts counts;
  for (const Edge& e : graph.edges()) {
    const bool a = subset.contains(e.u);
    const bool b = subset.contains(e.v);
    counts.volume += static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b);
    if (a && b) {
      ++counts.within;
    } else if (a != b) {
      ++counts.between;
    }
  }
  return counts;
}

SubsetCounts subset_counts(const Multigraph& graph, const VertexSubset& subset) {
  check_universe(graph, subset);
  const auto edges = graph.edges();
  const auto members = subset.members();
  const auto count = static_cast<std::int64_t>(edges.size());
  std::uint64_t volume = 0, within = 0, between = 0;
#pragma omp parallel for reduction(+ : volume, within, between) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const unsigned a = members[edges[i].u - 1];
    const unsigned b = members[edges[i].v - 1];
    volume += a + b;
    within += a & b;
    between += a ^ b;
  }
  return {volume, within, between};
}

std::uint64_t vol(const Multigraph& graph, const VertexSubset& subset) {
  return subset_counts(graph, subset).volume;
}

std::uint64_t e_within(const Multigraph& graph, const VertexSubset& subset) {
  return subset_counts(graph, subset).within;
}

std::uint64_t e_between(const Multigraph& graph, const VertexSubset& subset) {
  return subset_counts(graph, subset).between;
}

SubsetCounts prefix_counts(const MiniTree& tree, const VertexSubset& subset, std::uint64_t t) {
  if (t > tree.size()) throw std::invalid_argument("t exceeds the number of mini-vertices");
  if (subset.mini_universe() != tree.size()) {
    throw std::invalid_argument("subset mini universe differs from the tree size");
  }
  const auto targets = tree.targets();
  SubsetCounts counts;
  for (std::uint64_t i = 0; i < t; ++i) {
    const bool a = subset.contains_mini(i + 1);
    const bool b = subset.contains_mini(targets[i]);
    counts.volume += static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b);
    if (a && b) {
      ++counts.within;
    } else if (a != b) {
      ++counts.between;
    }
  }
  return counts;
}

CommunityCounts community_counts(const Multigraph& graph, std::span<const std::uint32_t> labels,
                                 std::uint32_t community_count) {
  if (labels.size() != graph.num_vertices()) {
    throw std::invalid_argument("label array length differs from the number of vertices");
  }
  CommunityCounts out{std::vector<std::uint64_t>(community_count, 0),
                      std::vector<std::uint64_t>(community_count, 0)};
  for (std::uint32_t label : labels) {
    if (label >= community_count) throw std::invalid_argument("community label out of range");
  }
  for (const Edge& e : graph.edges()) {
    const std::uint32_t a = labels[e.u - 1];
    const std::uint32_t b = labels[e.v - 1];
    ++out.volume[a];
    ++out.volume[b];
    if (a == b) ++out.within[a];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge expansion

namespace {

// Candidate ratio cross/size compared exactly; ties go to the smaller mask.
struct Ratio {
  std::uint64_t cross = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t size = 1;
  std::uint64_t mask = std::numeric_limits<std::uint64_t>::max();

  bool better_than(const Ratio& other) const {
    const auto lhs = static_cast<unsigned __int128>(cross) * other.size;
    const auto rhs = static_cast<unsigned __int128>(other.cross) * size;
    if (lhs != rhs) return lhs < rhs;
    return mask < other.mask;
  }
};

ExpansionResult exact_expansion(const Multigraph& graph) {
  const vertex_t n = graph.num_vertices();
  const AdjacencyMatrix adj(graph);
  std::vector<std::uint64_t> outer(n);  // non-loop degree
  for (vertex_t v = 0; v < n; ++v) outer[v] = graph.degrees()[v] - 2 * adj(v, v);

  const unsigned high_bits = std::min<unsigned>(n, 6);
  const unsigned low_bits = n - high_bits;
  const std::int64_t prefixes = std::int64_t{1} << high_bits;
  std::vector<Ratio> best(prefixes);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t p = 0; p < prefixes; ++p) {
    std::uint64_t mask = static_cast<std::uint64_t>(p) << low_bits;
    std::vector<std::uint64_t> toward(n, 0);  // toward[u] = edges from u into S (u excluded)
    std::uint64_t cross = 0, size = 0;
    for (vertex_t v = 0; v < n; ++v) {
      if (!(mask >> v & 1)) continue;
      ++size;
      for (vertex_t u = 0; u < n; ++u) {
        if (u != v) toward[u] += adj(u, v);
      }
    }
    for (vertex_t v = 0; v < n; ++v) {
      if (mask >> v & 1) cross += outer[v] - toward[v];
    }
    Ratio local;
    const std::uint64_t steps = std::uint64_t{1} << low_bits;
    for (std::uint64_t i = 0;; ++i) {
      if (size >= 1 && 2 * size <= n) {
        const Ratio candidate{cross, size, mask};
        if (candidate.better_than(local)) local = candidate;
      }
      if (i + 1 == steps) break;
      const auto v = static_cast<vertex_t>(std::countr_zero(i + 1));
      const bool adding = !(mask >> v & 1);
      if (adding) {
        cross = cross + outer[v] - 2 * toward[v];
        ++size;
      } else {
        cross = cross + 2 * toward[v] - outer[v];
        --size;
      }
      mask ^= std::uint64_t{1} << v;
      for (vertex_t u = 0; u < n; ++u) {
        if (u == v) continue;
        if (adding) {
          toward[u] += adj(u, v);
        } else {
          toward[u] -= adj(u, v);
        }
      }
    }
    best[p] = local;
  }

  Ratio overall;
  for (const Ratio& r : best) {
    if (r.mask != std::numeric_limits<std::uint64_t>::max() && r.better_than(overall)) overall = r;
  }
  ExpansionResult result;
  result.value = static_cast<double>(overall.cross) / static_cast<double>(overall.size);
  result.exact = true;
  for (vertex_t v = 0; v < n; ++v) {
    if (overall.mask >> v & 1) result.witness.push_back(v + 1);
  }
  return result;
}

ExpansionResult heuristic_expansion(const Multigraph& graph, const ExpansionOptions& options) {
  const vertex_t n = graph.num_vertices();
  const WeightedAdjacency adj(graph);
  std::vector<std::uint64_t> outer(n, 0);
  for (vertex_t v = 0; v < n; ++v) {
    for (std::uint64_t k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) outer[v] += adj.weights[k];
  }
  const std::uint64_t max_size = n / 2;
  const std::uint32_t restarts = std::max<std::uint32_t>(options.restarts, 1);
  std::vector<Ratio> best(restarts);
  std::vector<std::vector<std::uint8_t>> best_sets(restarts);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(restarts); ++r) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
    std::vector<std::uint8_t> in(n, 0);
    std::vector<std::uint64_t> toward(n, 0);
    std::uint64_t size = 0, cross = 0;
    const std::uint64_t target = 1 + rng.below(max_size);
    std::vector<vertex_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::uint64_t k = 0; k < target; ++k) {
      std::swap(order[k], order[k + rng.below(n - k)]);
    }
    auto flip = [&](vertex_t v) {
      const bool adding = !in[v];
      if (adding) {
        cross = cross + outer[v] - 2 * toward[v];
        ++size;
      } else {
        cross = cross + 2 * toward[v] - outer[v];
        --size;
      }
      in[v] ^= 1;
      for (std::uint64_t k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) {
        if (adding) {
          toward[adj.neighbours[k]] += adj.weights[k];
        } else {
          toward[adj.neighbours[k]] -= adj.weights[k];
        }
      }
    };
    for (std::uint64_t k = 0; k < target; ++k) flip(order[k]);

    Ratio current{cross, size, 0};
    for (std::uint64_t iteration = 0; iteration < 4 * std::uint64_t{n} + 16; ++iteration) {
      Ratio step;
      vertex_t chosen = n;
      for (vertex_t v = 0; v < n; ++v) {
        const bool adding = !in[v];
        const std::uint64_t new_size = adding ? size + 1 : size - 1;
        if (new_size < 1 || new_size > max_size) continue;
        const std::uint64_t new_cross =
            adding ? cross + outer[v] - 2 * toward[v] : cross + 2 * toward[v] - outer[v];
        const Ratio candidate{new_cross, new_size, v};
        if (candidate.better_than(step)) {
          step = candidate;
          chosen = v;
        }
      }
      const Ratio cmp{step.cross, step.size, 0};
      if (chosen == n || !cmp.better_than(current)) break;
      flip(chosen);
      current = Ratio{cross, size, 0};
    }
    best[r] = Ratio{cross, size, static_cast<std::uint64_t>(r)};
    best_sets[r] = in;
  }

  std::size_t winner = 0;
  for (std::size_t r = 1; r < best.size(); ++r) {
    if (best[r].better_than(best[winner])) winner = r;
  }
  ExpansionResult result;
  result.value = static_cast<double>(best[winner].cross) / static_cast<double>(best[winner].size);
  result.exact = false;
  for (vertex_t v = 0; v < n; ++v) {
    if (best_sets[winner][v]) result.witness.push_back(v + 1);
  }
  return result;
}

}  // namespace

ExpansionResult edge_expansion(const Multigraph& graph, const ExpansionOptions& options) {
  const vertex_t n = graph.num_vertices();
  if (n < 2) throw std::invalid_argument("edge expansion needs at least two vertices");
  if (options.mode == ExpansionMode::exact) {
    if (n > options.exhaustive_cap || n > 40) {
      throw capacity_error("exact edge expansion is capped at n=" +
                           std::to_string(options.exhaustive_cap) + " (got n=" +
                           std::to_string(n) + "); request heuristic mode");
    }
    return exact_expansion(graph);
  }
  return heuristic_expansion(graph, options);
}

double expansion_modularity_bound(double delta, std::uint32_t h) {
  if (h == 0) throw std::invalid_argument("h must be positive");
  return 1.0 - std::min(delta / (2.0 * h), 1.0 / 16.0);
}

}  // namespace pamod

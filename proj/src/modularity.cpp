#include "pamod/modularity.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pamod/errors.hpp"
#include "pamod/measure.hpp"
#include "pamod/rng.hpp"
#include "pamod/stats.hpp"

namespace pamod {

using wide_t = __int128;

Partition::Partition(std::vector<std::uint32_t> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("partition of an empty vertex set");
  std::vector<std::uint32_t> remap;
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  for (auto& label : labels_) {
    if (label >= remap.size()) remap.resize(static_cast<std::size_t>(label) + 1, unset);
    if (remap[label] == unset) remap[label] = communities_++;
    label = remap[label];
  }
}

Partition Partition::singletons(vertex_t n) {
  std::vector<std::uint32_t> labels(n);
  for (vertex_t v = 0; v < n; ++v) labels[v] = v;
  return Partition(std::move(labels));
}

double modularity_score(const Multigraph& graph, const Partition& partition) {
  if (partition.size() != graph.num_vertices()) {
    throw std::invalid_argument("partition covers " + std::to_string(partition.size()) +
                                " vertices, graph has " + std::to_string(graph.num_vertices()));
  }
  const std::uint64_t m = graph.num_edges();
  if (m == 0) return 0.0;
  const CommunityCounts counts =
      community_counts(graph, partition.labels(), partition.community_count());
  const double total_volume = static_cast<double>(graph.volume());
  double score = 0.0;
  for (std::uint32_t c = 0; c < partition.community_count(); ++c) {
    const double share = static_cast<double>(counts.volume[c]) / total_volume;
    score += static_cast<double>(counts.within[c]) / static_cast<double>(m) - share * share;
  }
  return score;
}

namespace {

// Scores are kept as the integer numerator sum_S (4m e(S) - vol(S)^2) of
// mod_A = numerator / (4 m^2), so maxima and ties are exact.
double numerator_to_score(wide_t numerator, std::uint64_t m) {
  const long double denom = 4.0L * static_cast<long double>(m) * static_cast<long double>(m);
  return static_cast<double>(static_cast<long double>(numerator) / denom);
}

struct GraphTables {
  vertex_t n;
  std::uint64_t m;
  AdjacencyMatrix adj;
  std::vector<std::uint64_t> degree;

  explicit GraphTables(const Multigraph& graph)
      : n(graph.num_vertices()),
        m(graph.num_edges()),
        adj(graph),
        degree(graph.degrees().begin(), graph.degrees().end()) {}
};

// Depth-first enumeration of restricted growth strings below a fixed prefix.
struct RgsSearch {
  const GraphTables& g;
  std::vector<std::uint32_t> labels;
  std::vector<std::uint64_t> within;
  std::vector<std::uint64_t> volume;
  wide_t numerator = 0;
  wide_t best = 0;
  std::vector<std::uint32_t> best_labels;
  bool found = false;

  explicit RgsSearch(const GraphTables& tables)
      : g(tables), labels(tables.n, 0), within(tables.n, 0), volume(tables.n, 0) {}

  wide_t term(std::uint32_t c) const {
    return wide_t{4} * g.m * within[c] - wide_t{volume[c]} * volume[c];
  }

  void assign(vertex_t k, std::uint32_t c) {
    numerator -= term(c);
    std::uint64_t added = g.adj(k, k);
    for (vertex_t l = 0; l < k; ++l) {
      if (labels[l] == c) added += g.adj(k, l);
    }
    within[c] += added;
    volume[c] += g.degree[k];
    labels[k] = c;
    numerator += term(c);
  }

  void unassign(vertex_t k, std::uint32_t c) {
    numerator -= term(c);
    std::uint64_t added = g.adj(k, k);
    for (vertex_t l = 0; l < k; ++l) {
      if (labels[l] == c) added += g.adj(k, l);
    }
    within[c] -= added;
    volume[c] -= g.degree[k];
    numerator += term(c);
  }

  void descend(vertex_t k, std::uint32_t used) {
    if (k == g.n) {
      if (!found || numerator > best) {
        best = numerator;
        best_labels = labels;
        found = true;
      }
      return;
    }
    for (std::uint32_t c = 0; c <= used && c < g.n; ++c) {
      assign(k, c);
      descend(k + 1, std::max(used, c + 1));
      unassign(k, c);
    }
  }
};

void collect_prefixes(vertex_t depth, std::vector<std::uint32_t>& current, std::uint32_t used,
                      std::vector<std::vector<std::uint32_t>>& out) {
  if (current.size() == depth) {
    out.push_back(current);
    return;
  }
  for (std::uint32_t c = 0; c <= used; ++c) {
    current.push_back(c);
    collect_prefixes(depth, current, std::max(used, c + 1), out);
    current.pop_back();
  }
}

// Gray-code walk over all 2^n subsets, split by the top bits for OpenMP.
// `value(e, vol)` scores subset S from e(S) and vol(S); the best value wins
// and ties go to the smaller mask.
template <typename Value>
std::pair<wide_t, std::uint64_t> best_subset(const GraphTables& g, Value value) {
  const vertex_t n = g.n;
  const unsigned high_bits = std::min<unsigned>(n, 6);
  const unsigned low_bits = n - high_bits;
  const std::int64_t prefixes = std::int64_t{1} << high_bits;
  std::vector<std::pair<wide_t, std::uint64_t>> best(prefixes);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t p = 0; p < prefixes; ++p) {
    std::uint64_t mask = static_cast<std::uint64_t>(p) << low_bits;
    std::vector<std::uint64_t> toward(n, 0);
    std::uint64_t e = 0, volume = 0;
    for (vertex_t v = 0; v < n; ++v) {
      if (!(mask >> v & 1)) continue;
      e += g.adj(v, v) + toward[v];
      volume += g.degree[v];
      for (vertex_t u = 0; u < n; ++u) {
        if (u != v) toward[u] += g.adj(u, v);
      }
    }
    std::pair<wide_t, std::uint64_t> local{value(e, volume), mask};
    const std::uint64_t steps = std::uint64_t{1} << low_bits;
    for (std::uint64_t i = 1; i < steps; ++i) {
      const auto v = static_cast<vertex_t>(std::countr_zero(i));
      const bool adding = !(mask >> v & 1);
      if (adding) {
        e += g.adj(v, v) + toward[v];
        volume += g.degree[v];
      } else {
        e -= g.adj(v, v) + toward[v];
        volume -= g.degree[v];
      }
      mask ^= std::uint64_t{1} << v;
      for (vertex_t u = 0; u < n; ++u) {
        if (u == v) continue;
        if (adding) {
          toward[u] += g.adj(u, v);
        } else {
          toward[u] -= g.adj(u, v);
        }
      }
      const wide_t score = value(e, volume);
      if (score > local.first || (score == local.first && mask < local.second)) {
        local = {score, mask};
      }
    }
    best[p] = local;
  }
  auto winner = best.front();
  for (const auto& candidate : best) {
    if (candidate.first > winner.first ||
        (candidate.first == winner.first && candidate.second < winner.second)) {
      winner = candidate;
    }
  }
  return winner;
}

std::vector<vertex_t> mask_ids(std::uint64_t mask, vertex_t n) {
  std::vector<vertex_t> ids;
  for (vertex_t v = 0; v < n; ++v) {
    if (mask >> v & 1) ids.push_back(v + 1);
  }
  return ids;
}

}  // namespace

ModularityResult modularity_exact(const Multigraph& graph) {
  const vertex_t n = graph.num_vertices();
  if (n > 12) {
    throw capacity_error("exact modularity is capped at n=12 (got n=" + std::to_string(n) + ")");
  }
  if (n == 0) throw std::invalid_argument("graph has no vertices");
  if (graph.num_edges() == 0) return {0.0, Partition::trivial(n)};

  const GraphTables tables(graph);
  std::vector<std::vector<std::uint32_t>> prefixes;
  std::vector<std::uint32_t> scratch;
  collect_prefixes(std::min<vertex_t>(n, 5), scratch, 0, prefixes);

  std::vector<wide_t> best(prefixes.size());
  std::vector<std::vector<std::uint32_t>> best_labels(prefixes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(prefixes.size()); ++i) {
    RgsSearch search(tables);
    std::uint32_t used = 0;
    for (vertex_t k = 0; k < prefixes[i].size(); ++k) {
      search.assign(k, prefixes[i][k]);
      used = std::max(used, prefixes[i][k] + 1);
    }
    search.descend(static_cast<vertex_t>(prefixes[i].size()), used);
    best[i] = search.best;
    best_labels[i] = std::move(search.best_labels);
  }
  // Prefixes are in lexicographic order; the first maximum wins.
  std::size_t winner = 0;
  for (std::size_t i = 1; i < best.size(); ++i) {
    if (best[i] > best[winner]) winner = i;
  }
  return {numerator_to_score(best[winner], tables.m), Partition(std::move(best_labels[winner]))};
}

ModularityResult best_bipartition(const Multigraph& graph) {
  const vertex_t n = graph.num_vertices();
  if (n > 20) {
    throw capacity_error("bipartition enumeration is capped at n=20 (got n=" + std::to_string(n) +
                         ")");
  }
  if (n == 0) throw std::invalid_argument("graph has no vertices");
  const GraphTables tables(graph);
  const std::uint64_t m = tables.m;
  if (m == 0) return {0.0, Partition::trivial(n)};
  const std::uint64_t total_volume = 2 * m;
  // vol(S) + vol(V\S) = 2m and e(S) + e(V\S) + e(S, V\S) = m, with
  // e(S, V\S) = vol(S) - 2 e(S).
  const auto [numerator, mask] = best_subset(tables, [&](std::uint64_t e, std::uint64_t volume) {
    const std::uint64_t cross = volume - 2 * e;
    const std::uint64_t e_rest = m - e - cross;
    const std::uint64_t vol_rest = total_volume - volume;
    return wide_t{4} * m * e - wide_t{volume} * volume + wide_t{4} * m * e_rest -
           wide_t{vol_rest} * vol_rest;
  });
  std::vector<std::uint32_t> labels(n, 0);
  for (vertex_t v = 0; v < n; ++v) labels[v] = static_cast<std::uint32_t>(mask >> v & 1);
  return {numerator_to_score(numerator, m), Partition(std::move(labels))};
}

DinhThaiResult dinh_thai_bound(const Multigraph& graph, const DinhThaiOptions& options) {
  const vertex_t n = graph.num_vertices();
  const std::uint64_t m = graph.num_edges();
  if (n == 0) throw std::invalid_argument("graph has no vertices");
  if (m == 0) return {0.0, 0.0, options.mode == DinhThaiMode::exact, {}};

  DinhThaiResult result;
  if (options.mode == DinhThaiMode::exact) {
    if (n > 20) {
      throw capacity_error("exact Dinh-Thai bound is capped at n=20 (got n=" + std::to_string(n) +
                           "); use search mode");
    }
    const GraphTables tables(graph);
    const auto [numerator, mask] = best_subset(tables, [&](std::uint64_t e, std::uint64_t volume) {
      return wide_t{4} * m * e - wide_t{volume} * volume;
    });
    result.inner_max = numerator_to_score(numerator, m);
    result.certified = true;
    result.witness = mask_ids(mask, n);
  } else {
    // Steepest ascent over single-vertex flips of 4m e(S) - vol(S)^2.
    const WeightedAdjacency adj(graph);
    const auto degrees = graph.degrees();
    const std::uint32_t restarts = std::max<std::uint32_t>(options.restarts, 1);
    std::vector<wide_t> best(restarts);
    std::vector<std::vector<std::uint8_t>> best_sets(restarts);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(restarts); ++r) {
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
      std::vector<std::uint8_t> in(n, 0);
      std::vector<std::uint64_t> toward(n, 0);
      std::uint64_t e = 0, volume = 0;
      auto flip = [&](vertex_t v) {
        const bool adding = !in[v];
        if (adding) {
          e += adj.loops[v] + toward[v];
          volume += degrees[v];
        } else {
          e -= adj.loops[v] + toward[v];
          volume -= degrees[v];
        }
        in[v] ^= 1;
        const auto row = adj.row(v);
        const auto w = adj.row_weights(v);
        for (std::size_t k = 0; k < row.size(); ++k) {
          if (adding) {
            toward[row[k]] += w[k];
          } else {
            toward[row[k]] -= w[k];
          }
        }
      };
      for (vertex_t v = 0; v < n; ++v) {
        if (rng.bernoulli(0.5)) flip(v);
      }
      auto value = [&](std::uint64_t ee, std::uint64_t vv) {
        return wide_t{4} * m * ee - wide_t{vv} * vv;
      };
      wide_t current = value(e, volume);
      for (std::uint64_t iteration = 0; iteration < 4 * std::uint64_t{n} + 16; ++iteration) {
        wide_t step_best = current;
        vertex_t chosen = n;
        for (vertex_t v = 0; v < n; ++v) {
          const wide_t candidate = in[v] ? value(e - adj.loops[v] - toward[v], volume - degrees[v])
                                         : value(e + adj.loops[v] + toward[v], volume + degrees[v]);
          if (candidate > step_best) {
            step_best = candidate;
            chosen = v;
          }
        }
        if (chosen == n) break;
        flip(chosen);
        current = step_best;
      }
      best[r] = current;
      best_sets[r] = std::move(in);
    }
    std::size_t winner = 0;
    for (std::size_t r = 1; r < best.size(); ++r) {
      if (best[r] > best[winner]) winner = r;
    }
    result.inner_max = numerator_to_score(best[winner], m);
    result.certified = false;
    for (vertex_t v = 0; v < n; ++v) {
      if (best_sets[winner][v]) result.witness.push_back(v + 1);
    }
  }
  result.bound = std::max(0.0, 4.0 * result.inner_max);
  return result;
}

double theoretical_upper_bound(std::uint32_t h, double epsilon) {
  BoundParams{h, epsilon}.validate();
  const double x = static_cast<double>(h);
  const double main_form = (1.0 + epsilon) * f_bound(x) / std::sqrt(x);
  return std::min({main_form, corollary_bound(x), 1.0});
}

}  // namespace pamod

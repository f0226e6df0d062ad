#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "pamod/modularity.hpp"

namespace pamod {

namespace {

using wide_t = __int128;

constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

// Dense backend: full community-by-community multiplicity matrix.
class DenseRows {
 public:
  explicit DenseRows(vertex_t n) : n_(n), cells_(static_cast<std::size_t>(n) * n, 0) {}

  void add(std::uint32_t a, std::uint32_t b, std::uint64_t w) {
    cell(a, b) += static_cast<std::uint32_t>(w);
    cell(b, a) += static_cast<std::uint32_t>(w);
  }

  // Folds row b into row a; visits every community adjacent to the merge.
  template <typename Visit>
  void merge(std::uint32_t a, std::uint32_t b, Visit visit) {
    cell(a, b) = 0;
    cell(b, a) = 0;
    for (std::uint32_t c = 0; c < n_; ++c) {
      const std::uint32_t moved = cell(b, c);
      if (moved) {
        cell(a, c) += moved;
        cell(c, a) = cell(a, c);
        cell(b, c) = 0;
        cell(c, b) = 0;
      }
      if (cell(a, c)) visit(c, static_cast<std::uint64_t>(cell(a, c)));
    }
  }

  template <typename Visit>
  void for_row(std::uint32_t a, Visit visit) const {
    const std::uint32_t* row = cells_.data() + static_cast<std::size_t>(a) * n_;
    for (std::uint32_t c = 0; c < n_; ++c) {
      if (row[c]) visit(c, static_cast<std::uint64_t>(row[c]));
    }
  }

 private:
  std::uint32_t& cell(std::uint32_t a, std::uint32_t b) {
    return cells_[static_cast<std::size_t>(a) * n_ + b];
  }

  vertex_t n_;
  std::vector<std::uint32_t> cells_;
};

// Sparse backend: one hash row per community, merged small into large.
class SparseRows {
 public:
  explicit SparseRows(vertex_t n) : rows_(n) {}

  void add(std::uint32_t a, std::uint32_t b, std::uint64_t w) {
    rows_[a][b] += w;
    rows_[b][a] += w;
  }

  template <typename Visit>
  void merge(std::uint32_t a, std::uint32_t b, Visit visit) {
    rows_[a].erase(b);
    rows_[b].erase(a);
    for (const auto& [c, w] : rows_[b]) {
      rows_[a][c] += w;
      auto& back = rows_[c];
      back.erase(b);
      back[a] += w;
    }
    rows_[b] = {};
    for (const auto& [c, w] : rows_[a]) visit(c, w);
  }

  template <typename Visit>
  void for_row(std::uint32_t a, Visit visit) const {
    for (const auto& [c, w] : rows_[a]) visit(c, w);
  }

 private:
  std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> rows_;
};

struct Candidate {
  wide_t gain = 0;
  std::uint32_t lo = none;
  std::uint32_t hi = none;
  std::uint32_t partner = none;
  // An upper bound on the row rather than its true best.
  bool stale = false;

  bool valid() const { return partner != none; }
};

// Larger gain first, then the smaller (rank, rank) key.
bool better(const Candidate& x, const Candidate& y) {
  if (!y.valid()) return x.valid();
  if (!x.valid()) return false;
  if (x.gain != y.gain) return x.gain > y.gain;
  if (x.lo != y.lo) return x.lo < y.lo;
  return x.hi < y.hi;
}

struct QueueEntry {
  Candidate best;
  std::uint32_t row;

  friend bool operator<(const QueueEntry& x, const QueueEntry& y) {
    if (better(x.best, y.best)) return true;
    if (better(y.best, x.best)) return false;
    return x.row < y.row;
  }
};

template <typename Rows>
std::vector<std::uint32_t> agglomerate(const Multigraph& graph, const std::vector<std::uint32_t>& rank,
                                       Rows rows) {
  const vertex_t n = graph.num_vertices();
  const std::uint64_t two_m = graph.volume();
  for (const Edge& e : graph.edges()) {
    if (!e.is_loop()) rows.add(e.u - 1, e.v - 1, 1);
  }

  std::vector<std::uint64_t> volume(graph.degrees().begin(), graph.degrees().end());
  std::vector<std::uint32_t> community_rank = rank;
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  std::vector<std::uint8_t> alive(n, 1);

  auto candidate = [&](std::uint32_t a, std::uint32_t b, std::uint64_t e_ab) {
    Candidate c;
    c.gain = wide_t{two_m} * e_ab - wide_t{volume[a]} * volume[b];
    if (c.gain <= 0) return Candidate{};
    c.lo = std::min(community_rank[a], community_rank[b]);
    c.hi = std::max(community_rank[a], community_rank[b]);
    c.partner = b;
    return c;
  };

  std::vector<Candidate> best(n);
  std::set<QueueEntry> queue;
  auto rescan = [&](std::uint32_t a) {
    Candidate top;
    rows.for_row(a, [&](std::uint32_t c, std::uint64_t w) {
      const Candidate next = candidate(a, c, w);
      if (better(next, top)) top = next;
    });
    return top;
  };
  auto publish = [&](std::uint32_t a, const Candidate& next) {
    if (best[a].valid()) queue.erase({best[a], a});
    best[a] = next;
    if (next.valid()) queue.insert({next, a});
  };

  for (std::uint32_t a = 0; a < n; ++a) publish(a, rescan(a));

  while (!queue.empty()) {
    const QueueEntry top = *queue.begin();
    if (top.best.stale) {
      publish(top.row, rescan(top.row));
      continue;
    }
    std::uint32_t a = top.row;
    std::uint32_t b = top.best.partner;
    if (a > b) std::swap(a, b);

    publish(a, {});
    publish(b, {});
    alive[b] = 0;
    parent[b] = a;
    volume[a] += volume[b];
    volume[b] = 0;
    community_rank[a] = std::min(community_rank[a], community_rank[b]);

    rows.merge(a, b, [&](std::uint32_t c, std::uint64_t w) {
      // Entries of row c other than a and b are unchanged, so the old best
      // still bounds them; rows that lost their best are rescanned lazily.
      const Candidate through_a = candidate(c, a, w);
      if (best[c].stale || best[c].partner == a || best[c].partner == b) {
        Candidate bound = better(through_a, best[c]) ? through_a : best[c];
        if (bound.valid()) bound.stale = true;
        publish(c, bound);
      } else if (better(through_a, best[c])) {
        publish(c, through_a);
      }
    });
    publish(a, rescan(a));
  }

  std::vector<std::uint32_t> labels(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t root = v;
    while (parent[root] != root) root = parent[root];
    labels[v] = root;
  }
  return labels;
}

}  // namespace

ModularityResult modularity_greedy(const Multigraph& graph, const GreedyOptions& options) {
  const vertex_t n = graph.num_vertices();
  if (n == 0 || graph.num_edges() == 0) {
    throw std::invalid_argument("greedy modularity needs at least one edge");
  }
  std::vector<std::uint32_t> rank = options.tie_rank;
  if (rank.empty()) {
    rank.resize(n);
    std::iota(rank.begin(), rank.end(), 0u);
  } else {
    if (rank.size() != n) {
      throw std::invalid_argument("tie_rank has " + std::to_string(rank.size()) +
                                  " entries, graph has " + std::to_string(n) + " vertices");
    }
    std::vector<std::uint32_t> sorted = rank;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("tie_rank values must be distinct");
    }
  }

  GreedyBackend backend = options.backend;
  if (backend == GreedyBackend::automatic) {
    const std::uint64_t cells = std::uint64_t{n} * n;
    backend = cells <= (std::uint64_t{1} << 27) ? GreedyBackend::dense : GreedyBackend::sparse;
  }
  auto labels = backend == GreedyBackend::dense ? agglomerate(graph, rank, DenseRows(n))
                                                : agglomerate(graph, rank, SparseRows(n));
  Partition partition(std::move(labels));
  const double score = modularity_score(graph, partition);
  if (score < 0.0) return {0.0, Partition::trivial(n)};
  return {score, std::move(partition)};
}

}  // namespace pamod

#include "pamod/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pamod {

Multigraph::Multigraph(vertex_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), degrees_(n, 0) {
  for (const Edge& e : edges_) {
    if (e.u < 1 || e.u > n_ || e.v < 1 || e.v > n_) {
      throw std::invalid_argument("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  "} outside [1," + std::to_string(n_) + "]");
    }
    ++degrees_[e.u - 1];
    ++degrees_[e.v - 1];
  }
}

AdjacencyMatrix::AdjacencyMatrix(const Multigraph& graph)
    : n_(graph.num_vertices()), weights_(static_cast<std::size_t>(n_) * n_, 0) {
  for (const Edge& e : graph.edges()) {
    const std::size_t a = e.u - 1;
    const std::size_t b = e.v - 1;
    ++weights_[a * n_ + b];
    if (a != b) ++weights_[b * n_ + a];
  }
}

WeightedAdjacency::WeightedAdjacency(const Multigraph& graph) {
  const vertex_t n = graph.num_vertices();
  loops.assign(n, 0);
  std::vector<std::pair<vertex_t, vertex_t>> pairs;
  pairs.reserve(2 * graph.num_edges());
  for (const Edge& e : graph.edges()) {
    if (e.is_loop()) {
      ++loops[e.u - 1];
      continue;
    }
    pairs.emplace_back(e.u - 1, e.v - 1);
    pairs.emplace_back(e.v - 1, e.u - 1);
  }
  std::sort(pairs.begin(), pairs.end());
  offsets.assign(n + 1, 0);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (k > 0 && pairs[k] == pairs[k - 1]) {
      ++weights.back();
      continue;
    }
    neighbours.push_back(pairs[k].second);
    weights.push_back(1);
    ++offsets[pairs[k].first + 1];
  }
  for (vertex_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
}

}  // namespace pamod

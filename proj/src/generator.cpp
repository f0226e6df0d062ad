#include "pamod/generator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pamod/rng.hpp"

namespace pamod {

namespace {

void check_mini_count(std::uint64_t M) {
  if (M == 0) throw std::invalid_argument("number of mini-vertices must be positive");
  if (M >= std::numeric_limits<vertex_t>::max()) {
    throw std::invalid_argument("number of mini-vertices must be below 2^32");
  }
}

}  // namespace

MiniTree::MiniTree(std::vector<vertex_t> targets, std::uint64_t seed)
    : targets_(std::move(targets)), degrees_(targets_.size(), 0), seed_(seed) {
  check_mini_count(targets_.size());
  if (targets_[0] != 1) throw std::invalid_argument("T_1 must be a single loop at mini-vertex 1");
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    const vertex_t t = static_cast<vertex_t>(i + 1);
    const vertex_t s = targets_[i];
    if (s < 1 || s > t) {
      throw std::invalid_argument("target of mini-vertex " + std::to_string(t) + " is " +
                                  std::to_string(s));
    }
    ++degrees_[t - 1];
    ++degrees_[s - 1];
  }
}

MiniTree generate_tree(std::uint64_t M, std::uint64_t seed) {
  check_mini_count(M);
  std::vector<vertex_t> targets(M);
  Rng rng(seed);
  targets[0] = 1;
  // Half-edge slots 2e and 2e+1 (0-based) are the endpoints of edge e+1:
  // the arriving mini-vertex e+1 and targets[e]. With t edges present, a
  // uniform draw in [0, 2t] picks one of the 2t slots (degree-proportional)
  // or, for 2t, the self-loop.
  for (std::uint64_t t = 1; t < M; ++t) {
    const std::uint64_t u = rng.below(2 * t + 1);
    vertex_t s;
    if (u == 2 * t) {
      s = static_cast<vertex_t>(t + 1);
    } else {
      const std::uint64_t e = u >> 1;
      s = (u & 1) ? targets[e] : static_cast<vertex_t>(e + 1);
    }
    targets[t] = s;
  }
  return MiniTree(std::move(targets), seed);
}

PAGraph merge(const MiniTree& tree, std::uint32_t h) {
  if (h == 0) throw std::invalid_argument("h must be positive");
  if (tree.size() % h != 0) {
    throw std::invalid_argument("h=" + std::to_string(h) + " does not divide M=" +
                                std::to_string(tree.size()));
  }
  const auto n = static_cast<vertex_t>(tree.size() / h);
  std::vector<Edge> edges(tree.size());
  const auto targets = tree.targets();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto t = static_cast<vertex_t>(i + 1);
    edges[i] = Edge{(t - 1) / h + 1, (targets[i] - 1) / h + 1};
  }
  return PAGraph{Multigraph(n, std::move(edges)), h, tree.seed()};
}

PAGraph generate_graph(vertex_t n, std::uint32_t h, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (h == 0) throw std::invalid_argument("h must be positive");
  return merge(generate_tree(std::uint64_t{n} * h, seed), h);
}

namespace {

double ghat_probability(std::uint64_t i, std::uint64_t j) {
  return 0.5 / std::sqrt(static_cast<double>(i) * static_cast<double>(j));
}

}  // namespace

GHatGraph generate_ghat(std::uint64_t M, std::uint64_t seed, GHatMethod method) {
  check_mini_count(M);
  GHatGraph g{M, {}};
  Rng rng(seed);
  if (method == GHatMethod::naive) {
    for (std::uint64_t i = 1; i <= M; ++i) {
      for (std::uint64_t j = i; j <= M; ++j) {
        if (rng.bernoulli(ghat_probability(i, j))) {
          g.edges.push_back({static_cast<vertex_t>(i), static_cast<vertex_t>(j)});
        }
      }
    }
    return g;
  }
  // Row i scans j = i..M. p(i, j) decreases in j, so p(i, j) bounds every later
  // pair in the row: jump ahead by a Geometric(p(i, j)) skip, then accept the
  // landing pair with probability p(i, j') / p(i, j). Each pair is thereby
  // kept with probability exactly p(i, j'), independently.
  for (std::uint64_t i = 1; i <= M; ++i) {
    std::uint64_t j = i;
    while (j <= M) {
      const double bound = ghat_probability(i, j);
      const std::uint64_t skip = rng.geometric(bound);
      if (skip > M - j) break;
      const std::uint64_t candidate = j + skip;
      if (rng.uniform() * bound < ghat_probability(i, candidate)) {
        g.edges.push_back({static_cast<vertex_t>(i), static_cast<vertex_t>(candidate)});
      }
      j = candidate + 1;
    }
  }
  return g;
}

}  // namespace pamod

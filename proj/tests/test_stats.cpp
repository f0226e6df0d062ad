#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "pamod/errors.hpp"
#include "pamod/generator.hpp"
#include "pamod/stats.hpp"

using namespace pamod;

namespace {

VertexSubset random_subset(vertex_t n, std::uint32_t h, Rng& rng) {
  VertexSubset s(n, h);
  for (vertex_t v = 1; v <= n; ++v) {
    if (rng.bernoulli(0.5)) s.insert(v);
  }
  return s;
}

}  // namespace

TEST_CASE("subset views") {
  const VertexSubset s = VertexSubset::from_ids(5, 3, std::vector<vertex_t>{2, 5});
  CHECK(s.size() == 2);
  CHECK(s.mini_size() == 6);
  CHECK(s.mini_universe() == 15);
  for (std::uint64_t m = 1; m <= 15; ++m) {
    const vertex_t v = static_cast<vertex_t>((m + 2) / 3);
    CHECK(s.contains_mini(m) == s.contains(v));
  }
  CHECK(s.ids() == std::vector<vertex_t>{2, 5});
  CHECK(s.complement().ids() == std::vector<vertex_t>{1, 3, 4});
  CHECK(VertexSubset::prefix(5, 1, 5) == VertexSubset::all(5, 1));
  CHECK_THROWS_AS(VertexSubset::prefix(5, 1, 6), std::invalid_argument);
  CHECK_THROWS_AS(VertexSubset::from_ids(5, 1, std::vector<vertex_t>{0}), std::invalid_argument);
  CHECK_THROWS_AS(VertexSubset(0, 1), std::invalid_argument);
}

TEST_CASE("fixture counts") {
  const Multigraph tri = oracle::two_triangles();
  const VertexSubset first = VertexSubset::prefix(6, 1, 3);
  CHECK(e_within(tri, first) == 3);
  CHECK(e_between(tri, first) == 0);
  CHECK(vol(tri, first) == 6);

  const Multigraph path = oracle::make_graph(3, {{1, 2}, {2, 3}});
  const VertexSubset middle = VertexSubset::from_ids(3, 1, std::vector<vertex_t>{2});
  CHECK(e_between(path, middle) == 2);
  CHECK(e_within(path, middle) == 0);

  // Loops count once inside, twice in the volume, never across.
  const Multigraph loopy = oracle::make_graph(2, {{1, 1}, {1, 2}});
  const VertexSubset one = VertexSubset::prefix(2, 1, 1);
  CHECK(subset_counts(loopy, one) == SubsetCounts{3, 1, 1});

  CHECK_THROWS_AS(vol(tri, VertexSubset::all(5, 1)), std::invalid_argument);
}

TEST_CASE("whole and empty subsets on generated graphs") {
  const PAGraph g = generate_graph(300, 4, 12);
  const auto all = VertexSubset::all(300, 4);
  const auto none = VertexSubset::none(300, 4);
  CHECK(vol(g.graph, all) == 2 * 4 * 300);
  CHECK(e_within(g.graph, all) == 4 * 300);
  CHECK(e_between(g.graph, all) == 0);
  CHECK(subset_counts(g.graph, none) == SubsetCounts{});
}

TEST_CASE("identities on random graphs and subsets") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<vertex_t>(2 + rng.below(60));
    const auto h = static_cast<std::uint32_t>(1 + rng.below(5));
    const PAGraph g = generate_graph(n, h, rng.next());
    const VertexSubset s = random_subset(n, h, rng);
    const SubsetCounts c = subset_counts(g.graph, s);
    const SubsetCounts rest = subset_counts(g.graph, s.complement());
    CHECK(2 * c.within + c.between == c.volume);
    CHECK(c.within + rest.within + c.between == std::uint64_t{h} * n);
    CHECK(c.between == rest.between);
    CHECK(c == reference::subset_counts(g.graph, s));
  }
}

TEST_CASE("graph counts agree with the tree") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<vertex_t>(5 + rng.below(200));
    const auto h = static_cast<std::uint32_t>(1 + rng.below(6));
    const MiniTree tree = generate_tree(std::uint64_t{h} * n, rng.next());
    const PAGraph g = merge(tree, h);
    const VertexSubset s = random_subset(n, h, rng);
    CHECK(prefix_counts(tree, s, tree.size()) == subset_counts(g.graph, s));

    // Prefix view: counts on T_t equal counts on the first t merged edges.
    const std::uint64_t t = 1 + rng.below(tree.size());
    SubsetCounts manual;
    for (std::uint64_t i = 0; i < t; ++i) {
      const Edge e = g.graph.edges()[i];
      const bool a = s.contains(e.u), b = s.contains(e.v);
      manual.volume += a + b;
      manual.within += a && b;
      manual.between += a != b;
    }
    CHECK(prefix_counts(tree, s, t) == manual);
  }
  const MiniTree tree = generate_tree(10, 1);
  CHECK_THROWS_AS(prefix_counts(tree, VertexSubset::all(10, 1), 11), std::invalid_argument);
}

TEST_CASE("edge expansion fixtures") {
  CHECK(edge_expansion(oracle::make_graph(2, {{1, 2}})).value == 1.0);
  const Multigraph c4 = oracle::make_graph(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  const ExpansionResult r = edge_expansion(c4);
  CHECK(r.value == 1.0);
  CHECK(r.exact);
  CHECK(expansion_modularity_bound(r.value, 1) == doctest::Approx(1 - 1.0 / 16));
  CHECK(expansion_modularity_bound(0.05, 1) == doctest::Approx(1 - 0.025));
  CHECK_THROWS_AS(edge_expansion(oracle::make_graph(1, {{1, 1}})), std::invalid_argument);

  const PAGraph big = generate_graph(21, 2, 1);
  CHECK_THROWS_AS(edge_expansion(big.graph), capacity_error);
  ExpansionOptions heuristic;
  heuristic.mode = ExpansionMode::heuristic;
  const ExpansionResult hr = edge_expansion(big.graph, heuristic);
  CHECK_FALSE(hr.exact);
  CHECK(hr.value >= 0.0);
}

TEST_CASE("edge expansion matches brute force") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<vertex_t>(2 + rng.below(7));
    const Multigraph g = oracle::random_multigraph(n, 1 + rng.below(3 * n), rng);
    const ExpansionResult exact = edge_expansion(g);
    CHECK(exact.value == doctest::Approx(oracle::expansion(g)).epsilon(1e-12));

    // The witness realizes the value.
    REQUIRE(!exact.witness.empty());
    REQUIRE(2 * exact.witness.size() <= n);
    const VertexSubset w = VertexSubset::from_ids(n, 1, exact.witness);
    CHECK(double(e_between(g, w)) / exact.witness.size() == doctest::Approx(exact.value));

    ExpansionOptions heuristic;
    heuristic.mode = ExpansionMode::heuristic;
    heuristic.seed = trial;
    CHECK(edge_expansion(g, heuristic).value >= exact.value - 1e-12);
  }
}

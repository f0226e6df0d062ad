#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "pamod/errors.hpp"
#include "pamod/generator.hpp"
#include "pamod/io.hpp"
#include "pamod/measure.hpp"
#include "pamod/modularity.hpp"

using namespace pamod;

TEST_CASE("partition relabels by first appearance") {
  const Partition p({7, 7, 2, 9, 2});
  CHECK(p.community_count() == 3);
  CHECK(std::vector<std::uint32_t>(p.labels().begin(), p.labels().end()) ==
        std::vector<std::uint32_t>{0, 0, 1, 2, 1});
  CHECK(p.label(4) == 2);
  CHECK(Partition::singletons(3).community_count() == 3);
  CHECK_THROWS_AS(Partition(std::vector<std::uint32_t>{}), std::invalid_argument);
}

TEST_CASE("score fixtures") {
  const Multigraph tri = oracle::two_triangles();
  CHECK(modularity_score(tri, Partition::trivial(6)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(modularity_score(tri, Partition({0, 0, 0, 1, 1, 1})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(modularity_score(Multigraph(4, {}), Partition::singletons(4)) == 0.0);
  CHECK_THROWS_AS(modularity_score(tri, Partition::trivial(5)), std::invalid_argument);
}

TEST_CASE("exact fixtures") {
  const auto k2 = oracle::make_graph(2, {{1, 2}});
  const auto k3 = oracle::make_graph(3, {{1, 2}, {2, 3}, {1, 3}});
  CHECK(modularity_exact(k2).score == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(modularity_exact(k3).score == doctest::Approx(0.0).epsilon(1e-15));
  const ModularityResult tri = modularity_exact(oracle::two_triangles());
  CHECK(tri.score == 0.5);
  CHECK(tri.partition == Partition({0, 0, 0, 1, 1, 1}));
  CHECK_THROWS_AS(modularity_exact(generate_graph(13, 1, 0).graph), capacity_error);
  CHECK(modularity_exact(Multigraph(3, {})).score == 0.0);
}

TEST_CASE("dinh-thai fixtures") {
  const auto k2 = oracle::make_graph(2, {{1, 2}});
  CHECK(dinh_thai_bound(k2).bound == doctest::Approx(0.0).epsilon(1e-15));
  const DinhThaiResult tri = dinh_thai_bound(oracle::two_triangles());
  CHECK(tri.bound == 1.0);
  CHECK(tri.certified);
  CHECK(tri.witness == std::vector<vertex_t>{1, 2, 3});
  CHECK_THROWS_AS(dinh_thai_bound(generate_graph(21, 1, 0).graph), capacity_error);

  DinhThaiOptions search;
  search.mode = DinhThaiMode::search;
  const DinhThaiResult s = dinh_thai_bound(oracle::two_triangles(), search);
  CHECK_FALSE(s.certified);
  CHECK(s.bound == doctest::Approx(1.0));
}

TEST_CASE("exact algorithms agree with brute force") {
  Rng rng(2718);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<vertex_t>(2 + rng.below(6));
    const Multigraph g = oracle::random_multigraph(n, 1 + rng.below(3 * n), rng);
    INFO("trial " << trial << " n=" << n);

    const ModularityResult exact = modularity_exact(g);
    CHECK(std::abs(exact.score - oracle::max_modularity(g)) < 1e-12);
    CHECK(modularity_score(g, exact.partition) == doctest::Approx(exact.score).epsilon(1e-12));
    CHECK(exact.score >= 0.0);
    CHECK(exact.score < 1.0);

    const DinhThaiResult dt = dinh_thai_bound(g);
    CHECK(std::abs(dt.inner_max - oracle::max_single_set_term(g)) < 1e-12);
    CHECK(dt.bound >= exact.score - 1e-12);

    const ModularityResult bi = best_bipartition(g);
    CHECK(std::abs(bi.score - oracle::max_bipartition(g)) < 1e-12);
    CHECK(exact.score <= 2 * bi.score + 1e-12);

    DinhThaiOptions search;
    search.mode = DinhThaiMode::search;
    search.seed = trial;
    CHECK(dinh_thai_bound(g, search).inner_max <= dt.inner_max + 1e-12);

    const ModularityResult greedy = modularity_greedy(g);
    CHECK(greedy.score <= exact.score + 1e-12);
    CHECK(greedy.score >= 0.0);
  }
}

TEST_CASE("greedy on fixtures") {
  const ModularityResult tri = modularity_greedy(oracle::two_triangles());
  CHECK(tri.score == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tri.partition == Partition({0, 0, 0, 1, 1, 1}));
  CHECK_THROWS_AS(modularity_greedy(Multigraph(3, {})), std::invalid_argument);

  // A single loop: singletons are already optimal and merging never helps.
  const ModularityResult loop = modularity_greedy(oracle::make_graph(2, {{1, 1}}));
  CHECK(loop.score >= 0.0);
}

TEST_CASE("greedy backends agree") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<vertex_t>(5 + rng.below(150));
    const auto h = static_cast<std::uint32_t>(1 + rng.below(4));
    const PAGraph g = generate_graph(n, h, rng.next());
    GreedyOptions dense{GreedyBackend::dense, {}};
    GreedyOptions sparse{GreedyBackend::sparse, {}};
    const ModularityResult a = modularity_greedy(g.graph, dense);
    const ModularityResult b = modularity_greedy(g.graph, sparse);
    CHECK(a.partition == b.partition);
    CHECK(a.score == b.score);
    CHECK(a.score == doctest::Approx(modularity_score(g.graph, a.partition)));
    CHECK(a.score <= theoretical_upper_bound(h, 0.1) + 1e-12);
  }
}

TEST_CASE("greedy finds positive modularity below the upper bound") {
  for (std::uint32_t h : {2u, 16u, 900u}) {
    const PAGraph g = generate_graph(1500, h, 40 + h);
    const double score = modularity_greedy(g.graph).score;
    INFO("h=" << h << " greedy " << score);
    CHECK(score > 0.0);
    CHECK(score < theoretical_upper_bound(h, 0.1));
  }
}

TEST_CASE("greedy is invariant under relabelling with the tie order") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<vertex_t>(4 + rng.below(60));
    const Multigraph g = oracle::random_multigraph(n, 2 * n, rng);
    std::vector<vertex_t> perm(n);  // perm[v-1] = new id of v
    std::iota(perm.begin(), perm.end(), 1u);
    for (vertex_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

    std::vector<Edge> relabelled;
    for (const Edge& e : g.edges()) relabelled.push_back({perm[e.u - 1], perm[e.v - 1]});
    const Multigraph h(n, relabelled);
    // Ranks follow the vertices: new vertex perm[v-1] keeps rank v-1.
    GreedyOptions opts;
    opts.tie_rank.resize(n);
    for (vertex_t v = 1; v <= n; ++v) opts.tie_rank[perm[v - 1] - 1] = v - 1;

    const ModularityResult base = modularity_greedy(g);
    const ModularityResult moved = modularity_greedy(h, opts);
    CHECK(base.score == doctest::Approx(moved.score).epsilon(1e-12));
    for (vertex_t u = 1; u <= n; ++u) {
      for (vertex_t v = u + 1; v <= n; ++v) {
        REQUIRE((base.partition.label(u) == base.partition.label(v)) ==
                (moved.partition.label(perm[u - 1]) == moved.partition.label(perm[v - 1])));
      }
    }
  }
  GreedyOptions bad;
  bad.tie_rank = {0, 0, 1};
  CHECK_THROWS_AS(modularity_greedy(oracle::make_graph(3, {{1, 2}}), bad), std::invalid_argument);
  bad.tie_rank = {0, 1};
  CHECK_THROWS_AS(modularity_greedy(oracle::make_graph(3, {{1, 2}}), bad), std::invalid_argument);
}

TEST_CASE("theoretical upper bound") {
  CHECK(theoretical_upper_bound(810, 0.0) < 1.0);
  CHECK(f_bound(809) / std::sqrt(809.0) >= 1.0);
  CHECK(theoretical_upper_bound(809, 0.0) == 1.0);
  CHECK(theoretical_upper_bound(1, 0.0) == 1.0);
  const double h = 10000;
  CHECK(theoretical_upper_bound(10000, 0.1) ==
        std::min({1.1 * f_bound(h) / std::sqrt(h), corollary_bound(h), 1.0}));
  CHECK_THROWS_AS(theoretical_upper_bound(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_upper_bound(5, -1.0), std::invalid_argument);
}

TEST_CASE("partition file round trip") {
  const std::vector<std::uint32_t> labels = {0, 1, 1, 0, 2};
  std::stringstream buffer;
  write_partition(buffer, labels);
  CHECK(buffer.str() == "1 0\n2 1\n3 1\n4 0\n5 2\n");
  CHECK(read_partition(buffer, 5) == labels);
  std::stringstream missing("1 0\n2 1\n");
  CHECK_THROWS_AS(read_partition(missing, 3), std::invalid_argument);
}

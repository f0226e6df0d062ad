#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "pamod/generator.hpp"
#include "pamod/io.hpp"
#include "pamod/rng.hpp"

using namespace pamod;

TEST_CASE("rng is reproducible and bounded") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);

  Rng r(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = r.below(7);
    REQUIRE(v < 7);
    ++hist[v];
  }
  for (int count : hist) CHECK(std::abs(count - 10000) < 500);

  double sum = 0;
  for (int i = 0; i < 100000; ++i) sum += static_cast<double>(r.geometric(0.25));
  CHECK(sum / 100000 == doctest::Approx(3.0).epsilon(0.03));
  CHECK(r.geometric(1.0) == 0);

  CHECK(derive_seed(5, 0) != derive_seed(5, 1));
  CHECK(derive_seed(5, 0, 0) != derive_seed(5, 0, 1));
}

TEST_CASE("generate_tree small cases and invariants") {
  const MiniTree t1 = generate_tree(1, 99);
  REQUIRE(t1.size() == 1);
  CHECK(t1.edge(1) == Edge{1, 1});
  CHECK(t1.degree(1) == 2);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MiniTree t2 = generate_tree(2, seed);
    CHECK(t2.degree(1) + t2.degree(2) == 4);
  }

  const MiniTree t = generate_tree(5000, 7);
  CHECK(t.target(1) == 1);
  std::vector<std::uint64_t> deg(t.size() + 1, 0);
  for (vertex_t s = 1; s <= t.size(); ++s) {
    const vertex_t target = t.target(s);
    REQUIRE(target >= 1);
    REQUIRE(target <= s);
    ++deg[s];
    ++deg[target];
    const std::uint64_t total = std::accumulate(deg.begin(), deg.begin() + s + 1, std::uint64_t{0});
    if (s % 997 == 0) CHECK(total == 2 * s);
  }
  for (vertex_t s = 1; s <= t.size(); ++s) CHECK(deg[s] == t.degree(s));

  CHECK(generate_tree(5000, 7) == t);
  CHECK(!(generate_tree(5000, 8) == t));
}

TEST_CASE("generate_tree rejects bad input") {
  CHECK_THROWS_AS(generate_tree(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_tree(std::uint64_t{1} << 32, 1), std::invalid_argument);
  CHECK_THROWS_AS(MiniTree({2}, 0), std::invalid_argument);
  CHECK_THROWS_AS(MiniTree({1, 3}, 0), std::invalid_argument);
  CHECK_NOTHROW(MiniTree({1, 2, 1}, 0));
}

TEST_CASE("second target is a loop one third of the time") {
  const int seeds = 100000;
  int loops = 0;
  for (int s = 0; s < seeds; ++s) loops += generate_tree(2, derive_seed(11, s)).target(2) == 2;
  CHECK(std::abs(loops / double(seeds) - 1.0 / 3.0) < 0.01);
}

// Exact marginal law of target(t+1) for t <= 4, obtained by enumerating every
// tree prefix together with its probability.
TEST_CASE("attachment frequencies match the enumerated distribution") {
  const int T = 5;
  std::vector<std::map<vertex_t, double>> law(T + 1);
  struct State {
    std::vector<vertex_t> targets;
    double p;
  };
  std::vector<State> frontier{{{1}, 1.0}};
  for (int t = 1; t < T; ++t) {
    std::vector<State> next;
    for (const State& st : frontier) {
      std::vector<int> deg(t + 2, 0);
      for (int s = 1; s <= t; ++s) {
        ++deg[s];
        ++deg[st.targets[s - 1]];
      }
      for (int s = 1; s <= t + 1; ++s) {
        const double q = (s == t + 1 ? 1.0 : deg[s]) / (2.0 * t + 1.0);
        law[t + 1][s] += st.p * q;
        State child = st;
        child.targets.push_back(s);
        child.p *= q;
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }

  const int seeds = 100000;
  std::vector<std::map<vertex_t, int>> hits(T + 1);
  for (int s = 0; s < seeds; ++s) {
    const MiniTree tree = generate_tree(T, derive_seed(2024, s));
    for (int t = 2; t <= T; ++t) ++hits[t][tree.target(t)];
  }
  for (int t = 2; t <= T; ++t) {
    double total = 0;
    for (const auto& [s, p] : law[t]) {
      total += p;
      const double se = std::sqrt(p * (1 - p) / seeds);
      const double freq = hits[t][s] / double(seeds);
      INFO("t=" << t << " s=" << s << " p=" << p << " freq=" << freq);
      CHECK(std::abs(freq - p) <= 3 * se);
    }
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("merge maps mini-vertices by ceiling") {
  const MiniTree tree({1, 1, 2, 3}, 5);
  const PAGraph g = merge(tree, 2);
  REQUIRE(g.n() == 2);
  // Edge of mini 3 goes to mini 2: vertices 2 and 1.
  CHECK(g.graph.edges()[2] == Edge{2, 1});

  const PAGraph same = merge(tree, 1);
  for (vertex_t t = 1; t <= 4; ++t) CHECK(same.graph.edges()[t - 1] == tree.edge(t));

  CHECK_THROWS_AS(merge(tree, 3), std::invalid_argument);
  CHECK_THROWS_AS(merge(tree, 0), std::invalid_argument);
}

TEST_CASE("merged graph has hn edges and matching degrees") {
  for (std::uint32_t h : {1u, 3u, 8u}) {
    const vertex_t n = 500;
    const MiniTree tree = generate_tree(std::uint64_t{h} * n, 31 + h);
    const PAGraph g = merge(tree, h);
    CHECK(g.graph.num_edges() == std::uint64_t{h} * n);
    const auto degs = g.graph.degrees();
    CHECK(std::accumulate(degs.begin(), degs.end(), std::uint64_t{0}) == 2ull * h * n);
    for (vertex_t v = 1; v <= n; ++v) {
      std::uint64_t sum = 0;
      for (std::uint32_t k = 0; k < h; ++k) sum += tree.degree(h * (v - 1) + k + 1);
      CHECK(sum == g.graph.degree(v));
    }
    CHECK(generate_graph(n, h, 31 + h) == g);
  }
}

TEST_CASE("edge list round trip") {
  const PAGraph g = generate_graph(50, 3, 9);
  std::stringstream buffer;
  write_edge_list(buffer, g);
  const std::string text = buffer.str();
  CHECK(text.rfind("# pa-graph n=50 h=3 seed=9\n", 0) == 0);
  const PAGraph back = read_edge_list(buffer);
  CHECK(back == g);

  std::stringstream again;
  write_edge_list(again, back);
  CHECK(again.str() == text);

  std::stringstream short_file("# pa-graph n=2 h=1 seed=0\n1 1\n");
  CHECK_THROWS_AS(read_edge_list(short_file), std::invalid_argument);
  std::stringstream bad_vertex("# pa-graph n=2 h=1 seed=0\n1 1\n1 3\n");
  CHECK_THROWS_AS(read_edge_list(bad_vertex), std::invalid_argument);
  std::stringstream bad_header("pa-graph n=2\n");
  CHECK_THROWS_AS(read_edge_list(bad_header), std::invalid_argument);
}

TEST_CASE("ghat pair and loop frequencies") {
  const int seeds = 100000;
  for (GHatMethod method : {GHatMethod::skip, GHatMethod::naive}) {
    int pair14 = 0, loop11 = 0, pair23 = 0;
    for (int s = 0; s < seeds; ++s) {
      const GHatGraph g = generate_ghat(4, derive_seed(77, s), method);
      for (const Edge& e : g.edges) {
        pair14 += e == Edge{1, 4};
        loop11 += e == Edge{1, 1};
        pair23 += e == Edge{2, 3};
      }
    }
    CHECK(std::abs(pair14 / double(seeds) - 0.25) < 0.01);
    CHECK(std::abs(loop11 / double(seeds) - 0.5) < 0.01);
    CHECK(std::abs(pair23 / double(seeds) - 0.5 / std::sqrt(6.0)) < 0.01);
  }
}

TEST_CASE("ghat sampler output is canonical") {
  const GHatGraph g = generate_ghat(300, 5);
  CHECK(g.M == 300);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(g.edges[i].u <= g.edges[i].v);
    CHECK(g.edges[i].v <= 300);
    if (i > 0) {
      const Edge a = g.edges[i - 1], b = g.edges[i];
      CHECK((a.u < b.u || (a.u == b.u && a.v < b.v)));
    }
  }
  CHECK(generate_ghat(300, 5).edges == g.edges);
  CHECK_THROWS_AS(generate_ghat(0, 1), std::invalid_argument);
}

TEST_CASE("ghat edge count matches the expected total") {
  // Exact mean of |E| on [M] is sum_{i<j} 1/(2 sqrt(ij)) + sum_i 1/(2i).
  const std::uint64_t M = 200;
  double expected = 0;
  for (std::uint64_t i = 1; i <= M; ++i) {
    expected += 0.5 / i;
    for (std::uint64_t j = i + 1; j <= M; ++j) expected += 0.5 / std::sqrt(double(i) * j);
  }
  for (GHatMethod method : {GHatMethod::skip, GHatMethod::naive}) {
    const int samples = 2000;
    double sum = 0, sq = 0;
    for (int s = 0; s < samples; ++s) {
      const double e = static_cast<double>(generate_ghat(M, derive_seed(3, s), method).edges.size());
      sum += e;
      sq += e * e;
    }
    const double mean = sum / samples;
    const double sd = std::sqrt(sq / samples - mean * mean);
    CHECK(std::abs(mean - expected) < 5 * sd / std::sqrt(double(samples)));
  }
}

TEST_CASE("ghat mean edge count for M = 10^4") {
  const std::uint64_t M = 10000;
  double A = 0;
  for (std::uint64_t i = 1; i <= M; ++i) A += 0.5 / std::sqrt(double(i));
  double sum = 0;
  const int samples = 1000;
  for (int s = 0; s < samples; ++s) sum += static_cast<double>(generate_ghat(M, derive_seed(8, s)).edges.size());
  CHECK(std::abs(sum / samples - A * A) <= 10 * std::sqrt(double(M)));
}

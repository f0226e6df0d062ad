#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "pamod/generator.hpp"
#include "pamod/martingale.hpp"
#include "pamod/rng.hpp"
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

TEST_CASE("first step") {
  const MiniTree tree = generate_tree(10, 4);
  const MeasureTable table(10);
  const Trajectory in = replay(tree, VertexSubset::prefix(10, 1, 1), table);
  CHECK(in.Z[0] == 2);
  CHECK(in.Zhat[0] == 0.0);
  const Trajectory out = replay(tree, VertexSubset::from_ids(10, 1, std::vector<vertex_t>{2}), table);
  CHECK(out.Z[0] == 0);
  CHECK(out.Zhat[0] == 0.0);
  CHECK(std::abs(check_conditional_expectation(tree, VertexSubset::prefix(10, 1, 1), 1)) < 1e-12);
}

TEST_CASE("empty subset gives zero processes") {
  const MiniTree tree = generate_tree(500, 2);
  const MeasureTable table(500);
  const Trajectory traj = replay(tree, VertexSubset::none(500, 1), table);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    REQUIRE(traj.Zhat[i] == 0.0);
    REQUIRE(traj.Xhat[i] == 0.0);
  }
  const auto diffs = check_bounded_differences(traj, table);
  CHECK(diffs.max_zhat_step == 0.0);
  CHECK(diffs.ok());
}

TEST_CASE("trajectory endpoints match graph statistics") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<vertex_t>(10 + rng.below(300));
    const auto h = static_cast<std::uint32_t>(1 + rng.below(4));
    const MiniTree tree = generate_tree(std::uint64_t{h} * n, rng.next());
    const PAGraph g = merge(tree, h);
    const VertexSubset s = random_subset(n, h, rng);
    const Trajectory traj = replay(tree, s);
    CHECK(traj.X.back() == e_within(g.graph, s));
    CHECK(traj.Z.back() == vol(g.graph, s));
    const auto diffs = check_bounded_differences(traj, MeasureTable(tree.size()));
    CHECK(diffs.increments_valid);
    CHECK(diffs.ok());
  }
}

TEST_CASE("analytic conditional expectations vanish") {
  Rng rng(33);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<vertex_t>(2 + rng.below(100));
    const MiniTree tree = generate_tree(n, rng.next());
    const VertexSubset s = random_subset(n, 1, rng);
    const std::uint64_t t = 1 + rng.below(n - 1);
    REQUIRE(std::abs(check_conditional_expectation(tree, s, t)) < 1e-9);
  }
  const MiniTree tree = generate_tree(5, 1);
  CHECK_THROWS_AS(check_conditional_expectation(tree, VertexSubset::all(5, 1), 0), std::out_of_range);
  CHECK_THROWS_AS(check_conditional_expectation(tree, VertexSubset::all(5, 1), 5), std::out_of_range);
}

TEST_CASE("all steps of long trajectories") {
  Rng rng(44);
  const std::uint64_t M = 4000;
  const MeasureTable table(M);
  for (int trial = 0; trial < 10; ++trial) {
    const MiniTree tree = generate_tree(M, rng.next());
    const VertexSubset s = random_subset(M / 4, 4, rng);
    const Trajectory traj = replay(tree, s, table);
    const MartingaleReport r = check_all_steps(traj, table);
    CHECK(r.max_abs_zhat_drift < 1e-9);
    CHECK(r.max_abs_xhat_drift < 1e-9);
    CHECK(r.max_variance_excess <= 1e-9);
    CHECK(r.differences.ok());
    CHECK(r.final_W > 0.0);

    for (std::uint64_t t = 1; t < M; ++t) {
      const StepExpectation e = step_expectation(traj, table, t);
      REQUIRE(std::abs(traj.Zhat[t] - traj.Zhat[t - 1]) <= e.step_bound + 1e-9);
    }
  }
}

TEST_CASE("Freedman variance process agrees with the step variances") {
  const std::uint64_t M = 300;
  const MeasureTable table(M);
  const MiniTree tree = generate_tree(M, 9);
  Rng rng(1);
  const Trajectory traj = replay(tree, random_subset(M, 1, rng), table);
  double W = 0;
  for (std::uint64_t t = 1; t < M; ++t) {
    W += step_expectation(traj, table, t).zhat_variance;
    REQUIRE(traj.W[t] == doctest::Approx(W).epsilon(1e-9));
  }
}

TEST_CASE("Zhat has mean zero across trees") {
  const std::uint64_t M = 200;
  const MeasureTable table(M);
  const VertexSubset s = VertexSubset::from_ids(
      M, 1, std::vector<vertex_t>{1, 3, 4, 10, 11, 12, 50, 51, 99, 150, 199});
  const int N = 10000;
  double sum = 0, sq = 0;
  for (int k = 0; k < N; ++k) {
    const Trajectory traj = replay(generate_tree(M, derive_seed(123, k)), s, table);
    const double d = traj.Zhat.back() - traj.Zhat.front();
    sum += d;
    sq += d * d;
  }
  const double mean = sum / N;
  const double sd = std::sqrt((sq - N * mean * mean) / (N - 1));
  CHECK(std::abs(mean) <= 4 * sd / std::sqrt(double(N)));
}

TEST_CASE("trajectory csv") {
  const MiniTree tree({1, 1, 2}, 0);
  const Trajectory traj = replay(tree, VertexSubset::prefix(3, 1, 1));
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  const std::string csv = out.str();
  CHECK(csv.rfind("t,delta_t,Z,Zhat,X,Xhat,D\n", 0) == 0);
  CHECK(csv.find("\n1,1,2,0,1,1,0\n") != std::string::npos);
  // t=2: mini 2 outside S~ attaches to 1.
  CHECK(csv.find("\n2,0,3,") != std::string::npos);

  CHECK_THROWS_AS(replay(tree, VertexSubset::all(4, 1)), std::invalid_argument);
}

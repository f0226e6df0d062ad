#include "pamod/martingale.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pamod {

Trajectory replay(const MiniTree& tree, const VertexSubset& subset, const MeasureTable& table) {
  const std::uint64_t M = tree.size();
  if (subset.mini_universe() != M) {
    throw std::invalid_argument("subset mini universe " + std::to_string(subset.mini_universe()) +
                                " differs from tree size " + std::to_string(M));
  }
  if (table.size() < M) throw std::invalid_argument("measure table shorter than the tree");

  Trajectory traj;
  traj.delta.resize(M);
  traj.Z.resize(M);
  traj.X.resize(M);
  traj.Zhat.resize(M);
  traj.Xhat.resize(M);
  traj.D.resize(M);
  traj.W.resize(M);

  const auto targets = tree.targets();
  std::uint64_t Z = 0, X = 0;
  long double compensator = 0.0L;  // sum_{j<=t} delta_j c_{j-1}
  long double drift_sum = 0.0L;    // sum_{j=2}^{t} D_j
  long double W = 0.0L;
  for (std::uint64_t t = 1; t <= M; ++t) {
    const std::uint64_t delta = subset.contains_mini(t) ? 1 : 0;
    const std::uint64_t hit = subset.contains_mini(targets[t - 1]) ? 1 : 0;
    if (t >= 2) {
      // Conditional variance of the step from t-1 to t, given F_{t-1}.
      const double p = static_cast<double>(Z + delta) / static_cast<double>(2 * t - 1);
      const double ct = table.c(t);
      W += ct * ct * p * (1.0 - p);
    }
    const double D = (t >= 2) ? static_cast<double>(delta * (Z + 1)) / static_cast<double>(2 * t - 1)
                              : 0.0;
    Z += delta + hit;
    X += delta * hit;
    compensator += delta ? table.c(t - 1) : 0.0;
    drift_sum += D;

    const std::size_t i = t - 1;
    traj.delta[i] = static_cast<std::uint8_t>(delta);
    traj.Z[i] = Z;
    traj.X[i] = X;
    traj.Zhat[i] = static_cast<double>(static_cast<long double>(table.c(t)) * Z - compensator);
    traj.D[i] = D;
    traj.Xhat[i] = static_cast<double>(static_cast<long double>(X) - drift_sum);
    traj.W[i] = static_cast<double>(W);
  }
  return traj;
}

Trajectory replay(const MiniTree& tree, const VertexSubset& subset) {
  return replay(tree, subset, MeasureTable(tree.size()));
}

BoundedDifferenceReport check_bounded_differences(const Trajectory& traj,
                                                  const MeasureTable& table) {
  BoundedDifferenceReport report;
  const std::uint64_t M = traj.size();
  if (M == 0) return report;
  if (traj.Z[0] != 2u * traj.delta[0] || traj.X[0] != traj.delta[0]) report.increments_valid = false;
  for (std::uint64_t t = 2; t <= M; ++t) {
    const std::size_t i = t - 1;
    const std::uint64_t dZ = traj.Z[i] - traj.Z[i - 1];
    const std::uint64_t dX = traj.X[i] - traj.X[i - 1];
    if (traj.Z[i] < traj.Z[i - 1] || dZ > 2 || traj.X[i] < traj.X[i - 1] || dX > traj.delta[i] ||
        traj.Z[i] > 2 * t || traj.X[i] > t) {
      report.increments_valid = false;
    }

    const double c_prev = table.c(t - 1);
    const double zstep = table.c(t) * static_cast<double>(traj.Z[i]) -
                         c_prev * static_cast<double>(traj.Z[i - 1]) - traj.delta[i] * c_prev;
    const double normalized =
        std::abs(zstep) * std::sqrt(std::numbers::pi * static_cast<double>(t - 1)) / 2.0;
    report.max_zhat_step = std::max(report.max_zhat_step, normalized);

    const double xstep = static_cast<double>(dX) - traj.D[i];
    const double excess = std::abs(xstep) - traj.delta[i];
    if (t == 2) {
      report.max_xhat_excess = excess;
    } else {
      report.max_xhat_excess = std::max(report.max_xhat_excess, excess);
    }
  }
  return report;
}

StepExpectation step_expectation(const Trajectory& traj, const MeasureTable& table,
                                 std::uint64_t t) {
  if (t < 1 || t >= traj.size()) throw std::out_of_range("step check needs 1 <= t < M");
  const std::size_t i = t - 1;
  const double Z = static_cast<double>(traj.Z[i]);
  const double next_delta = traj.delta[i + 1];
  const double p = (Z + next_delta) / static_cast<double>(2 * t + 1);
  const double c_t = table.c(t);
  const double c_next = table.c(t + 1);

  // Zhat_{t+1} - Zhat_t = c_{t+1} Z_{t+1} - c_t Z_t - delta_{t+1} c_t
  auto zstep = [&](double z_next) { return c_next * z_next - c_t * Z - next_delta * c_t; };
  const double hi = zstep(Z + next_delta + 1.0);
  const double lo = zstep(Z + next_delta);
  StepExpectation out;
  out.zhat_drift = p * hi + (1.0 - p) * lo;
  out.zhat_variance =
      p * (hi - out.zhat_drift) * (hi - out.zhat_drift) +
      (1.0 - p) * (lo - out.zhat_drift) * (lo - out.zhat_drift);

  // The new edge lands inside S~ with the same probability p; it is internal
  // iff the new mini-vertex is in S~ as well.
  const double D_next = traj.D[i + 1];
  out.xhat_drift = p * (next_delta - D_next) + (1.0 - p) * (0.0 - D_next);

  out.variance_bound = 1.0 / (4.0 * std::numbers::pi * static_cast<double>(t + 1));
  out.step_bound = 2.0 / std::sqrt(std::numbers::pi * static_cast<double>(t));
  return out;
}

double check_conditional_expectation(const MiniTree& tree, const VertexSubset& subset,
                                     std::uint64_t t) {
  if (t < 1 || t >= tree.size()) throw std::out_of_range("step check needs 1 <= t < M");
  const MeasureTable table(tree.size());
  return step_expectation(replay(tree, subset, table), table, t).zhat_drift;
}

MartingaleReport check_all_steps(const Trajectory& traj, const MeasureTable& table) {
  MartingaleReport report;
  for (std::uint64_t t = 1; t < traj.size(); ++t) {
    const StepExpectation step = step_expectation(traj, table, t);
    report.max_abs_zhat_drift = std::max(report.max_abs_zhat_drift, std::abs(step.zhat_drift));
    report.max_abs_xhat_drift = std::max(report.max_abs_xhat_drift, std::abs(step.xhat_drift));
    report.max_variance_excess =
        std::max(report.max_variance_excess, step.zhat_variance - step.variance_bound);
  }
  report.differences = check_bounded_differences(traj, table);
  if (traj.size() > 0) report.final_W = traj.W.back();
  return report;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,delta_t,Z,Zhat,X,Xhat,D\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << i + 1 << ',' << unsigned{traj.delta[i]} << ',' << traj.Z[i] << ',' << traj.Zhat[i] << ','
        << traj.X[i] << ',' << traj.Xhat[i] << ',' << traj.D[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace pamod

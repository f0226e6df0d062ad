#ifndef PAMOD_MARTINGALE_HPP
#define PAMOD_MARTINGALE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pamod/generator.hpp"
#include "pamod/measure.hpp"
#include "pamod/subset.hpp"

namespace pamod {

/// Replay of the tree construction for one fixed S~. Entry t-1 holds time t:
///   Z_t    = vol_{T_t}(S~_t)
///   X_t    = e_{T_t}(S~_t)
///   Zhat_t = c_t Z_t - sum_{j<=t} delta_j c_{j-1}
///   D_t    = delta_t (Z_{t-1} + 1) / (2t - 1)   (D_1 = 0)
///   Xhat_t = X_t - sum_{j=2}^{t} D_j
///   W_t    = sum_{j<t} Var(Zhat_{j+1} - Zhat_j | F_j), Freedman's variance
///            process for Zhat.
struct Trajectory {
  std::vector<std::uint8_t> delta;
  std::vector<std::uint64_t> Z;
  std::vector<std::uint64_t> X;
  std::vector<double> Zhat;
  std::vector<double> Xhat;
  std::vector<double> D;
  std::vector<double> W;

  std::uint64_t size() const noexcept { return Z.size(); }
};

/// One O(M) pass over the arrival-ordered edges. Throws std::invalid_argument
/// if the subset's mini universe is not tree.size() or the table is shorter.
Trajectory replay(const MiniTree& tree, const VertexSubset& subset, const MeasureTable& table);
Trajectory replay(const MiniTree& tree, const VertexSubset& subset);

struct BoundedDifferenceReport {
  /// max_t |Zhat_{t+1} - Zhat_t| sqrt(pi t) / 2; at most 1 up to rounding.
  double max_zhat_step = 0.0;
  /// max_t (|Xhat_t - Xhat_{t-1}| - delta_t); never positive.
  double max_xhat_excess = 0.0;
  /// max over steps of |X_t - X_{t-1}| and the Z increments, for the
  /// structural invariants Z_t - Z_{t-1} in {0,1,2}, X_t - X_{t-1} in {0, delta_t}.
  bool increments_valid = true;

  bool ok(double slack = 1e-9) const {
    return increments_valid && max_zhat_step <= 1.0 + slack && max_xhat_excess <= 0.0;
  }
};

/// Steps are recomputed from Z, X and D rather than by differencing the
/// accumulated Zhat and Xhat columns.
BoundedDifferenceReport check_bounded_differences(const Trajectory& trajectory,
                                                  const MeasureTable& table);

/// Analytic one-step check at time t (1 <= t < M): the two outcomes of step
/// t+1 are enumerated with their exact probabilities.
struct StepExpectation {
  double zhat_drift = 0.0;     ///< E[Zhat_{t+1} | F_t] - Zhat_t
  double xhat_drift = 0.0;     ///< E[Xhat_{t+1} | F_t] - Xhat_t
  double zhat_variance = 0.0;  ///< Var(Zhat_{t+1} - Zhat_t | F_t)
  double variance_bound = 0.0; ///< 1 / (4 pi (t+1))
  double step_bound = 0.0;     ///< 2 / sqrt(pi t)
};

/// Uses the trajectory's state at time t.
StepExpectation step_expectation(const Trajectory& trajectory, const MeasureTable& table,
                                 std::uint64_t t);

/// Replays the tree prefix up to t and returns E[Zhat_{t+1} | F_t] - Zhat_t.
/// Throws std::out_of_range unless 1 <= t < M.
double check_conditional_expectation(const MiniTree& tree, const VertexSubset& subset,
                                     std::uint64_t t);

/// Worst values of the per-step checks over every t in [1, M-1].
struct MartingaleReport {
  double max_abs_zhat_drift = 0.0;
  double max_abs_xhat_drift = 0.0;
  double max_variance_excess = -1.0;  ///< max(Var - 1/(4 pi (t+1)))
  BoundedDifferenceReport differences;
  double final_W = 0.0;
};
MartingaleReport check_all_steps(const Trajectory& trajectory, const MeasureTable& table);

/// CSV with columns t,delta_t,Z,Zhat,X,Xhat,D.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace pamod

#endif  // PAMOD_MARTINGALE_HPP

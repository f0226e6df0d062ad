#ifndef PAMOD_MEASURE_HPP
#define PAMOD_MEASURE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pamod/subset.hpp"

namespace pamod {

/// c_j = prod_{i=1}^{j} (2i-1)/(2i), c_0 = 1, by the recurrence
/// c_j = c_{j-1} (2j-1)/(2j) carried out in long double.
double c_coeff(std::uint64_t j);

/// Same value before the final rounding to double.
long double c_coeff_extended(std::uint64_t j);

/// Two-sided envelope for c_j, j >= 1:
///   exp(-1/(8j) - 1/(576 j^2)) / sqrt(pi j) <= c_j <= 1 / sqrt(pi j).
struct CoefficientEnvelope {
  long double lower;
  long double upper;
};
CoefficientEnvelope c_envelope(std::uint64_t j);

/// c_0..c_M and the prefix sums P[t] = sum_{j=1}^{t} c_{j-1} for the measure
/// of prefix sets. Immutable after construction.
class MeasureTable {
 public:
  /// Throws std::invalid_argument for M == 0.
  explicit MeasureTable(std::uint64_t M);

  std::uint64_t size() const noexcept { return M_; }
  /// c_j for 0 <= j <= M.
  double c(std::uint64_t j) const { return c_.at(j); }
  std::span<const double> coefficients() const noexcept { return c_; }
  /// sum_{j=1}^{t} c_{j-1}, 0 <= t <= M.
  double cumulative(std::uint64_t t) const { return cumulative_.at(t); }

  /// mu([t]) = (sqrt(pi)/2) P[t].
  double mu_prefix(std::uint64_t t) const;

  /// mu(S~_t) through block prefix sums: each vertex of S contributes
  /// P[min(hi, t)] - P[h(i-1)]. Throws std::invalid_argument if t > M or the
  /// subset's mini universe differs from M.
  double mu(const VertexSubset& subset, std::uint64_t t) const;

  /// mu(S~_t) by summing delta_j c_{j-1} over every mini-vertex j <= t.
  double mu_direct(const VertexSubset& subset, std::uint64_t t) const;

 private:
  void check(const VertexSubset& subset, std::uint64_t t) const;

  std::uint64_t M_;
  std::vector<double> c_;
  std::vector<double> cumulative_;
};

/// mu(S~) over the full range [M], M = subset.mini_universe().
double mu(const VertexSubset& subset);

/// g_V(h) = (1/6) sqrt(2 ln 2 (9 ln h + 8 ln 2)) + (2/3) ln 2 + 2.
double g_vol(double h);
/// g_E(h) = g_V(h)/2 + sqrt(2 ln 2).
double g_edges(double h);
/// (3/2) g_V(h) + sqrt(2 ln 2), the crossing-edge constant.
double g_between(double h);
/// f(h) = 6 g_V(h) + 4 sqrt(2 ln 2) - g_V(h)^2 / sqrt(h). Callers divide by
/// sqrt(h) for the modularity bound.
double f_bound(double h);
/// (3.54 sqrt(ln h + 0.62) + 19.49) / sqrt(h), already divided by sqrt(h).
double corollary_bound(double h);
/// B_eps = sqrt((1 + eps) 2 ln 2).
double b_epsilon(double epsilon);

/// Smallest h >= 1 with f(h)/sqrt(h) < 1, by linear scan up to `limit`.
std::uint64_t f_threshold(std::uint64_t limit = 1'000'000);
/// Smallest h >= 1 with corollary_bound(h) < 1.
std::uint64_t corollary_threshold(std::uint64_t limit = 1'000'000);

/// Azuma-Hoeffding right-hand side exp(-x^2 / (2 sum b_j^2)).
/// Throws std::invalid_argument unless x > 0 and every b_j > 0.
double azuma_tail(double x, std::span<const double> b);

/// Freedman right-hand side exp(-lambda^2 / (2W + 2A lambda / 3)).
/// Throws std::invalid_argument unless lambda, W, A are all positive.
double freedman_tail(double lambda, double W, double A);

struct BoundParams {
  std::uint32_t h = 1;
  double epsilon = 0.0;

  /// Throws std::invalid_argument if h == 0 or epsilon < 0.
  void validate() const;
};

}  // namespace pamod

#endif  // PAMOD_MEASURE_HPP

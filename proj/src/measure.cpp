#include "pamod/measure.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pamod {

namespace {

const double kLn2 = std::numbers::ln2;
const double kSqrt2Ln2 = std::sqrt(2.0 * std::numbers::ln2);
const double kHalfSqrtPi = std::sqrt(std::numbers::pi) / 2.0;

void require_h(double h) {
  if (!(h >= 1.0)) throw std::invalid_argument("h must be at least 1");
}

}  // namespace

long double c_coeff_extended(std::uint64_t j) {
  long double c = 1.0L;
  for (std::uint64_t i = 1; i <= j; ++i) {
    c *= static_cast<long double>(2 * i - 1) / static_cast<long double>(2 * i);
  }
  return c;
}

double c_coeff(std::uint64_t j) { return static_cast<double>(c_coeff_extended(j)); }

CoefficientEnvelope c_envelope(std::uint64_t j) {
  if (j == 0) throw std::invalid_argument("envelope defined for j >= 1");
  const long double x = static_cast<long double>(j);
  const long double scale = 1.0L / std::sqrt(std::numbers::pi_v<long double> * x);
  return {std::exp(-1.0L / (8.0L * x) - 1.0L / (576.0L * x * x)) * scale, scale};
}

MeasureTable::MeasureTable(std::uint64_t M) : M_(M), c_(M + 1), cumulative_(M + 1) {
  if (M == 0) throw std::invalid_argument("measure table needs M >= 1");
  long double c = 1.0L;
  long double sum = 0.0L;
  c_[0] = 1.0;
  cumulative_[0] = 0.0;
  for (std::uint64_t j = 1; j <= M; ++j) {
    sum += c;  // adds c_{j-1}
    cumulative_[j] = static_cast<double>(sum);
    c *= static_cast<long double>(2 * j - 1) / static_cast<long double>(2 * j);
    c_[j] = static_cast<double>(c);
  }
}

double MeasureTable::mu_prefix(std::uint64_t t) const { return kHalfSqrtPi * cumulative(t); }

void MeasureTable::check(const VertexSubset& subset, std::uint64_t t) const {
  if (t > M_) {
    throw std::invalid_argument("t=" + std::to_string(t) + " exceeds M=" + std::to_string(M_));
  }
  if (subset.mini_universe() != M_) {
    throw std::invalid_argument("subset mini universe " + std::to_string(subset.mini_universe()) +
                                " differs from M=" + std::to_string(M_));
  }
}

double MeasureTable::mu(const VertexSubset& subset, std::uint64_t t) const {
  check(subset, t);
  const std::uint64_t h = subset.h();
  const auto members = subset.members();
  long double sum = 0.0L;
  for (std::uint64_t i = 0; i < members.size(); ++i) {
    const std::uint64_t first = h * i;  // minis h*i+1 .. h*i+h
    if (first >= t) break;
    if (members[i]) {
      const std::uint64_t last = std::min(first + h, t);
      sum += static_cast<long double>(cumulative_[last]) - cumulative_[first];
    }
  }
  return kHalfSqrtPi * static_cast<double>(sum);
}

double MeasureTable::mu_direct(const VertexSubset& subset, std::uint64_t t) const {
  check(subset, t);
  long double sum = 0.0L;
  for (std::uint64_t j = 1; j <= t; ++j) {
    if (subset.contains_mini(j)) sum += c_[j - 1];
  }
  return kHalfSqrtPi * static_cast<double>(sum);
}

double mu(const VertexSubset& subset) {
  const MeasureTable table(subset.mini_universe());
  return table.mu(subset, table.size());
}

double g_vol(double h) {
  require_h(h);
  return std::sqrt(2.0 * kLn2 * (9.0 * std::log(h) + 8.0 * kLn2)) / 6.0 + (2.0 / 3.0) * kLn2 + 2.0;
}

double g_edges(double h) { return g_vol(h) / 2.0 + kSqrt2Ln2; }

double g_between(double h) { return 1.5 * g_vol(h) + kSqrt2Ln2; }

double f_bound(double h) {
  const double g = g_vol(h);
  return 6.0 * g + 4.0 * kSqrt2Ln2 - g * g / std::sqrt(h);
}

double corollary_bound(double h) {
  require_h(h);
  return (3.54 * std::sqrt(std::log(h) + 0.62) + 19.49) / std::sqrt(h);
}

double b_epsilon(double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  return std::sqrt((1.0 + epsilon) * 2.0 * kLn2);
}

std::uint64_t f_threshold(std::uint64_t limit) {
  for (std::uint64_t h = 1; h <= limit; ++h) {
    const double x = static_cast<double>(h);
    if (f_bound(x) / std::sqrt(x) < 1.0) return h;
  }
  throw std::runtime_error("f(h)/sqrt(h) never drops below 1 up to the scan limit");
}

std::uint64_t corollary_threshold(std::uint64_t limit) {
  for (std::uint64_t h = 1; h <= limit; ++h) {
    if (corollary_bound(static_cast<double>(h)) < 1.0) return h;
  }
  throw std::runtime_error("corollary bound never drops below 1 up to the scan limit");
}

double azuma_tail(double x, std::span<const double> b) {
  if (!(x > 0.0)) throw std::invalid_argument("x must be positive");
  if (b.empty()) throw std::invalid_argument("difference bounds must be non-empty");
  double sum_sq = 0.0;
  for (double bj : b) {
    if (!(bj > 0.0)) throw std::invalid_argument("difference bounds must be positive");
    sum_sq += bj * bj;
  }
  return std::exp(-x * x / (2.0 * sum_sq));
}

double freedman_tail(double lambda, double W, double A) {
  if (!(lambda > 0.0) || !(W > 0.0) || !(A > 0.0)) {
    throw std::invalid_argument("lambda, W and A must be positive");
  }
  return std::exp(-lambda * lambda / (2.0 * W + 2.0 * A * lambda / 3.0));
}

void BoundParams::validate() const {
  if (h == 0) throw std::invalid_argument("h must be positive");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
}

}  // namespace pamod

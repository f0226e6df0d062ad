#ifndef PAMOD_HARNESS_HPP
#define PAMOD_HARNESS_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pamod/graph.hpp"
#include "pamod/rng.hpp"
#include "pamod/subset.hpp"

namespace pamod {

enum class Sampler { uniform_half, prefix_k, suffix_k, random_k, high_degree_k };

std::string_view sampler_name(Sampler sampler);
/// Throws std::invalid_argument for an unknown name.
Sampler parse_sampler(std::string_view name);

/// Draws one subset of [n] (mini view with block size h).
///   uniform_half   each vertex independently with probability 1/2 (k unused)
///   prefix_k       [k]
///   suffix_k       [n] \ [n-k]
///   random_k       uniform k-subset
///   high_degree_k  the k largest degrees, ties to the smaller id
/// Throws std::invalid_argument if k > n for the k-samplers, or if
/// high_degree_k gets a degree vector whose length is not n.
VertexSubset sample_subset(Sampler sampler, vertex_t k, vertex_t n, std::uint32_t h, Rng& rng,
                           std::span<const std::uint64_t> degrees = {});

/// t_0 = h * floor(log2 n) (at least 1), then geometric spacing up to M = hn;
/// duplicates after rounding are dropped, so fewer than `count` points may
/// come back for small M.
std::vector<std::uint64_t> default_checkpoints(vertex_t n, std::uint32_t h,
                                               std::size_t count = 20);

struct ExperimentConfig {
  vertex_t n = 1000;
  std::uint32_t h = 16;
  std::uint32_t trials = 1;
  std::uint32_t subsets_per_trial = 10;
  double epsilon = 0.1;
  Sampler sampler = Sampler::uniform_half;
  /// Subset size for the k-samplers; unset means n/2.
  std::optional<vertex_t> k;
  std::uint64_t base_seed = 0;
  /// Checkpoints in [1, hn]; empty means default_checkpoints(n, h,
  /// checkpoint_count).
  std::vector<std::uint64_t> t_grid;
  std::size_t checkpoint_count = 20;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  std::vector<std::uint64_t> checkpoints() const;
  vertex_t subset_size() const { return k.value_or(n / 2); }

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys and mistyped values throw
  /// std::invalid_argument. The result is validated.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// The three concentration inequalities, checked at every checkpoint t on the
/// prefix graph with centers 2 sqrt(t) mu, mu^2 and 2 mu (sqrt(t) - mu), where
/// mu = mu(S~_t), and radius (1 + eps) g(h) t / sqrt(h) for g = g_vol,
/// g_edges and g_between respectively.
enum class Inequality { volume = 0, edges = 1, between = 2 };
inline constexpr std::array<Inequality, 3> all_inequalities{Inequality::volume, Inequality::edges,
                                                            Inequality::between};
std::string_view inequality_name(Inequality which);

struct Observation {
  std::uint32_t trial = 0;
  std::uint32_t subset = 0;
  std::uint64_t t = 0;
  double observed = 0.0;
  double center = 0.0;
  double bound = 0.0;
  /// |observed - center| / (t / sqrt(h)).
  double normalized_deviation = 0.0;
  bool violated = false;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct InequalitySummary {
  std::uint64_t observations = 0;
  std::uint64_t violations = 0;
  double violation_fraction = 0.0;
  /// Nearest-rank quantiles of normalized_deviation.
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

struct ConcentrationReport {
  ExperimentConfig config;
  std::vector<std::uint64_t> checkpoints;
  /// Indexed by Inequality; rows ordered by (trial, subset, t).
  std::array<std::vector<Observation>, 3> rows;
  std::array<InequalitySummary, 3> summary;

  const InequalitySummary& of(Inequality which) const {
    return summary[static_cast<std::size_t>(which)];
  }
  nlohmann::json to_json(bool include_rows = true) const;
  /// Header: inequality,trial,subset,t,observed,center,bound,normalized_deviation,violated
  void write_csv(std::ostream& out) const;
};

/// Trials run concurrently; results are merged in trial order so the report
/// does not depend on the thread count.
ConcentrationReport run_concentration(const ExperimentConfig& config);

struct GHatEstimate {
  std::string quantity;  ///< "e_within", "e_between" or "vol"
  double mean = 0.0;
  double std_error = 0.0;
  /// The closed form built from a = sum_{i in S~} 1/(2 sqrt(i)) and
  /// A = sum_{i in [M]} 1/(2 sqrt(i)): a^2, 2 a (A - a) and 2 A a.
  double closed_form = 0.0;
  /// Exact expectation including the diagonal terms.
  double exact_mean = 0.0;
  double gap = 0.0;  ///< mean - closed_form
  /// |mean - closed_form| / std_error (0 when std_error is 0).
  double z_closed = 0.0;
};

struct GHatFamily {
  std::string name;  ///< "all", "prefix_half", "odd", "random_half"
  std::uint64_t size = 0;
  std::vector<GHatEstimate> estimates;

  const GHatEstimate& estimate(std::string_view quantity) const;
};

struct GHatReport {
  std::uint64_t M = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<GHatFamily> families;

  const GHatFamily& family(std::string_view name) const;
  nlohmann::json to_json() const;
};

/// Samples `trials` copies of G^ on [M] and compares subset statistics with
/// their closed forms. Throws capacity_error for M > 10^4 and
/// std::invalid_argument for M < 2 or trials < 2.
GHatReport run_ghat_comparison(std::uint64_t M, std::uint32_t trials, std::uint64_t seed);

struct GapFit {
  std::string family;
  std::string quantity;
  /// Least-squares slope through the origin of |gap| against ln M.
  double C = 0.0;
  std::vector<double> ratios;  ///< |gap| / ln M per M
};

/// Runs the comparison at each M and fits |gap| <= C ln M. Reported only.
std::vector<GapFit> fit_ghat_gaps(std::span<const std::uint64_t> Ms, std::uint32_t trials,
                                  std::uint64_t seed);

namespace reference {
/// Serial run that recounts each checkpoint with prefix_counts instead of a
/// single incremental sweep.
ConcentrationReport run_concentration(const ExperimentConfig& config);
}  // namespace reference

}  // namespace pamod

#endif  // PAMOD_HARNESS_HPP

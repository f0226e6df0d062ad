#include "pamod/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "pamod/errors.hpp"
#include "pamod/generator.hpp"
#include "pamod/measure.hpp"
#include "pamod/stats.hpp"

namespace pamod {

namespace {

constexpr std::array<std::pair<Sampler, std::string_view>, 5> sampler_names{{
    {Sampler::uniform_half, "uniform_half"},
    {Sampler::prefix_k, "prefix_k"},
    {Sampler::suffix_k, "suffix_k"},
    {Sampler::random_k, "random_k"},
    {Sampler::high_degree_k, "high_degree_k"},
}};

constexpr std::uint64_t graph_stream = 0;
constexpr std::uint64_t subset_stream = 1;

}  // namespace

std::string_view sampler_name(Sampler sampler) {
  for (const auto& [value, name] : sampler_names) {
    if (value == sampler) return name;
  }
  return "unknown";
}

Sampler parse_sampler(std::string_view name) {
  for (const auto& [value, known] : sampler_names) {
    if (known == name) return value;
  }
  throw std::invalid_argument("unknown sampler '" + std::string(name) + "'");
}

std::string_view inequality_name(Inequality which) {
  switch (which) {
    case Inequality::volume:
      return "volume";
    case Inequality::edges:
      return "edges";
    case Inequality::between:
      return "between";
  }
  return "unknown";
}

VertexSubset sample_subset(Sampler sampler, vertex_t k, vertex_t n, std::uint32_t h, Rng& rng,
                           std::span<const std::uint64_t> degrees) {
  if (sampler != Sampler::uniform_half && k > n) {
    throw std::invalid_argument("subset size " + std::to_string(k) + " exceeds n=" +
                                std::to_string(n));
  }
  VertexSubset subset(n, h);
  switch (sampler) {
    case Sampler::uniform_half:
      for (vertex_t v = 1; v <= n; ++v) {
        if (rng.bernoulli(0.5)) subset.insert(v);
      }
      break;
    case Sampler::prefix_k:
      for (vertex_t v = 1; v <= k; ++v) subset.insert(v);
      break;
    case Sampler::suffix_k:
      for (vertex_t v = n - k + 1; v <= n; ++v) subset.insert(v);
      break;
    case Sampler::random_k: {
      // Partial Fisher-Yates.
      std::vector<vertex_t> pool(n);
      std::iota(pool.begin(), pool.end(), 1u);
      for (vertex_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<vertex_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
        subset.insert(pool[i]);
      }
      break;
    }
    case Sampler::high_degree_k: {
      if (degrees.size() != n) {
        throw std::invalid_argument("high_degree_k needs one degree per vertex");
      }
      std::vector<vertex_t> order(n);
      std::iota(order.begin(), order.end(), 1u);
      std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](vertex_t a, vertex_t b) {
        if (degrees[a - 1] != degrees[b - 1]) return degrees[a - 1] > degrees[b - 1];
        return a < b;
      });
      for (vertex_t i = 0; i < k; ++i) subset.insert(order[i]);
      break;
    }
  }
  return subset;
}

std::vector<std::uint64_t> default_checkpoints(vertex_t n, std::uint32_t h, std::size_t count) {
  if (n == 0 || h == 0) throw std::invalid_argument("n and h must be positive");
  if (count == 0) throw std::invalid_argument("checkpoint count must be positive");
  const std::uint64_t M = std::uint64_t{h} * n;
  const std::uint64_t log2n = std::bit_width(n) - 1;
  const std::uint64_t t0 = std::clamp<std::uint64_t>(h * log2n, 1, M);
  std::vector<std::uint64_t> grid;
  if (count == 1 || t0 == M) return {M};
  const double ratio = static_cast<double>(M) / static_cast<double>(t0);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    auto t = static_cast<std::uint64_t>(std::llround(static_cast<double>(t0) * std::pow(ratio, frac)));
    t = std::clamp<std::uint64_t>(t, t0, M);
    if (grid.empty() || t > grid.back()) grid.push_back(t);
  }
  grid.front() = t0;
  grid.back() = M;
  return grid;
}

void ExperimentConfig::validate() const {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (h == 0) throw std::invalid_argument("h must be positive");
  if (std::uint64_t{h} * n >= (std::uint64_t{1} << 32)) {
    throw std::invalid_argument("hn must be below 2^32");
  }
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (subsets_per_trial == 0) throw std::invalid_argument("subsets_per_trial must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be a finite non-negative number");
  }
  if (k && *k > n) throw std::invalid_argument("k must not exceed n");
  if (checkpoint_count == 0) throw std::invalid_argument("checkpoint_count must be positive");
  const std::uint64_t M = std::uint64_t{h} * n;
  for (std::uint64_t t : t_grid) {
    if (t < 1 || t > M) {
      throw std::invalid_argument("checkpoint " + std::to_string(t) + " outside [1, " +
                                  std::to_string(M) + "]");
    }
  }
}

std::vector<std::uint64_t> ExperimentConfig::checkpoints() const {
  if (t_grid.empty()) return default_checkpoints(n, h, checkpoint_count);
  std::vector<std::uint64_t> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {
      {"n", n},
      {"h", h},
      {"trials", trials},
      {"subsets_per_trial", subsets_per_trial},
      {"epsilon", epsilon},
      {"sampler", std::string(sampler_name(sampler))},
      {"k", k ? nlohmann::json(*k) : nlohmann::json(nullptr)},
      {"base_seed", base_seed},
      {"t_grid", t_grid},
      {"checkpoint_count", checkpoint_count},
  };
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig config;
  auto unsigned_field = [&](const std::string& key, auto& target) {
    const auto& value = j.at(key);
    if (!value.is_number_unsigned()) {
      throw std::invalid_argument("config field '" + key + "' must be a non-negative integer");
    }
    const auto raw = value.get<std::uint64_t>();
    using T = std::remove_reference_t<decltype(target)>;
    if (raw > std::numeric_limits<T>::max()) {
      throw std::invalid_argument("config field '" + key + "' is too large");
    }
    target = static_cast<T>(raw);
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "n") {
      unsigned_field(key, config.n);
    } else if (key == "h") {
      unsigned_field(key, config.h);
    } else if (key == "trials") {
      unsigned_field(key, config.trials);
    } else if (key == "subsets_per_trial") {
      unsigned_field(key, config.subsets_per_trial);
    } else if (key == "k") {
      if (!value.is_null()) {
        vertex_t k = 0;
        unsigned_field(key, k);
        config.k = k;
      }
    } else if (key == "base_seed") {
      unsigned_field(key, config.base_seed);
    } else if (key == "checkpoint_count") {
      unsigned_field(key, config.checkpoint_count);
    } else if (key == "epsilon") {
      if (!value.is_number()) throw std::invalid_argument("config field 'epsilon' must be a number");
      config.epsilon = value.get<double>();
    } else if (key == "sampler") {
      if (!value.is_string()) throw std::invalid_argument("config field 'sampler' must be a string");
      config.sampler = parse_sampler(value.get<std::string>());
    } else if (key == "t_grid") {
      if (!value.is_array()) throw std::invalid_argument("config field 't_grid' must be an array");
      for (const auto& t : value) {
        if (!t.is_number_unsigned()) {
          throw std::invalid_argument("t_grid entries must be non-negative integers");
        }
        config.t_grid.push_back(t.get<std::uint64_t>());
      }
    } else {
      throw std::invalid_argument("unknown config field '" + key + "'");
    }
  }
  config.validate();
  return config;
}

namespace {

struct Centers {
  double volume, edges, between;
};

Centers centers(double mu, std::uint64_t t) {
  const double root = std::sqrt(static_cast<double>(t));
  return {2.0 * root * mu, mu * mu, 2.0 * mu * (root - mu)};
}

struct Radii {
  double volume, edges, between;
};

Radii radii(const ExperimentConfig& config) {
  const double h = config.h;
  const double scale = (1.0 + config.epsilon) / std::sqrt(h);
  return {scale * g_vol(h), scale * g_edges(h), scale * g_between(h)};
}

using TrialRows = std::array<std::vector<Observation>, 3>;

void record(TrialRows& rows, const ExperimentConfig& config, const Radii& r, std::uint32_t trial,
            std::uint32_t subset, std::uint64_t t, const SubsetCounts& counts, double mu) {
  const Centers c = centers(mu, t);
  const double unit = static_cast<double>(t) / std::sqrt(static_cast<double>(config.h));
  const double observed[3] = {static_cast<double>(counts.volume),
                              static_cast<double>(counts.within),
                              static_cast<double>(counts.between)};
  const double center[3] = {c.volume, c.edges, c.between};
  const double radius[3] = {r.volume, r.edges, r.between};
  for (std::size_t q = 0; q < 3; ++q) {
    Observation row;
    row.trial = trial;
    row.subset = subset;
    row.t = t;
    row.observed = observed[q];
    row.center = center[q];
    row.bound = radius[q] * static_cast<double>(t);
    const double deviation = std::abs(observed[q] - center[q]);
    row.normalized_deviation = deviation / unit;
    row.violated = deviation > row.bound;
    rows[q].push_back(row);
  }
}

std::vector<std::uint64_t> vertex_degrees(const MiniTree& tree, std::uint32_t h) {
  const std::uint64_t n = tree.size() / h;
  std::vector<std::uint64_t> degrees(n, 0);
  const auto mini = tree.degrees();
  for (std::uint64_t m = 0; m < mini.size(); ++m) degrees[m / h] += mini[m];
  return degrees;
}

std::vector<VertexSubset> trial_subsets(const ExperimentConfig& config, const MiniTree& tree,
                                        std::uint32_t trial) {
  Rng rng(derive_seed(config.base_seed, trial, subset_stream));
  std::vector<std::uint64_t> degrees;
  if (config.sampler == Sampler::high_degree_k) degrees = vertex_degrees(tree, config.h);
  std::vector<VertexSubset> subsets;
  subsets.reserve(config.subsets_per_trial);
  for (std::uint32_t s = 0; s < config.subsets_per_trial; ++s) {
    subsets.push_back(
        sample_subset(config.sampler, config.subset_size(), config.n, config.h, rng, degrees));
  }
  return subsets;
}

// One forward sweep over the tree edges per subset, snapshotting the counts
// at every checkpoint.
TrialRows run_trial(const ExperimentConfig& config, const std::vector<std::uint64_t>& grid,
                    const MeasureTable& table, const Radii& r, std::uint32_t trial) {
  const MiniTree tree = generate_tree(std::uint64_t{config.h} * config.n,
                                      derive_seed(config.base_seed, trial, graph_stream));
  const auto subsets = trial_subsets(config, tree, trial);
  const auto targets = tree.targets();
  const std::uint32_t h = config.h;
  TrialRows rows;
  for (std::uint32_t s = 0; s < subsets.size(); ++s) {
    const auto members = subsets[s].members();
    SubsetCounts counts;
    std::uint64_t t = 0;
    for (std::uint64_t checkpoint : grid) {
      for (; t < checkpoint; ++t) {
        const bool a = members[t / h] != 0;
        const bool b = members[(targets[t] - 1) / h] != 0;
        counts.volume += a + b;
        counts.within += a && b;
        counts.between += a != b;
      }
      record(rows, config, r, trial, s, checkpoint, counts, table.mu(subsets[s], checkpoint));
    }
  }
  return rows;
}

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

ConcentrationReport assemble(const ExperimentConfig& config, std::vector<std::uint64_t> grid,
                             std::vector<TrialRows> per_trial) {
  ConcentrationReport report;
  report.config = config;
  report.checkpoints = std::move(grid);
  for (std::size_t q = 0; q < 3; ++q) {
    auto& rows = report.rows[q];
    for (auto& trial_rows : per_trial) {
      rows.insert(rows.end(), trial_rows[q].begin(), trial_rows[q].end());
    }
    InequalitySummary& summary = report.summary[q];
    summary.observations = rows.size();
    std::vector<double> deviations;
    deviations.reserve(rows.size());
    for (const auto& row : rows) {
      summary.violations += row.violated;
      deviations.push_back(row.normalized_deviation);
    }
    std::sort(deviations.begin(), deviations.end());
    if (!rows.empty()) {
      summary.violation_fraction =
          static_cast<double>(summary.violations) / static_cast<double>(rows.size());
    }
    summary.p50 = nearest_rank(deviations, 0.50);
    summary.p90 = nearest_rank(deviations, 0.90);
    summary.p99 = nearest_rank(deviations, 0.99);
    summary.max = deviations.empty() ? 0.0 : deviations.back();
  }
  return report;
}

}  // namespace

ConcentrationReport run_concentration(const ExperimentConfig& config) {
  config.validate();
  const auto grid = config.checkpoints();
  const MeasureTable table(std::uint64_t{config.h} * config.n);
  const Radii r = radii(config);
  std::vector<TrialRows> per_trial(config.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t trial = 0; trial < static_cast<std::int64_t>(config.trials); ++trial) {
    per_trial[trial] = run_trial(config, grid, table, r, static_cast<std::uint32_t>(trial));
  }
  return assemble(config, grid, std::move(per_trial));
}

namespace reference {

ConcentrationReport run_concentration(const ExperimentConfig& config) {
  config.validate();
  const auto grid = config.checkpoints();
  const MeasureTable table(std::uint64_t{config.h} * config.n);
  const Radii r = radii(config);
  std::vector<TrialRows> per_trial(config.trials);
  for (std::uint32_t trial = 0; trial < config.trials; ++trial) {
    const MiniTree tree = generate_tree(std::uint64_t{config.h} * config.n,
                                        derive_seed(config.base_seed, trial, graph_stream));
    const auto subsets = trial_subsets(config, tree, trial);
    for (std::uint32_t s = 0; s < subsets.size(); ++s) {
      for (std::uint64_t t : grid) {
        record(per_trial[trial], config, r, trial, s, t, prefix_counts(tree, subsets[s], t),
               table.mu(subsets[s], t));
      }
    }
  }
  return assemble(config, grid, std::move(per_trial));
}

}  // namespace reference

nlohmann::json ConcentrationReport::to_json(bool include_rows) const {
  nlohmann::json out;
  out["config"] = config.to_json();
  out["checkpoints"] = checkpoints;
  for (Inequality which : all_inequalities) {
    const auto q = static_cast<std::size_t>(which);
    const InequalitySummary& s = summary[q];
    nlohmann::json entry = {
        {"observations", s.observations},
        {"violations", s.violations},
        {"violation_fraction", s.violation_fraction},
        {"quantiles", {{"p50", s.p50}, {"p90", s.p90}, {"p99", s.p99}, {"max", s.max}}},
    };
    if (include_rows) {
      nlohmann::json rows_json = nlohmann::json::array();
      for (const Observation& row : rows[q]) {
        rows_json.push_back({{"trial", row.trial},
                             {"subset", row.subset},
                             {"t", row.t},
                             {"observed", row.observed},
                             {"center", row.center},
                             {"bound", row.bound},
                             {"normalized_deviation", row.normalized_deviation},
                             {"violated", row.violated}});
      }
      entry["rows"] = std::move(rows_json);
    }
    out["inequalities"][std::string(inequality_name(which))] = std::move(entry);
  }
  return out;
}

void ConcentrationReport::write_csv(std::ostream& out) const {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out.precision(17);
  out << "inequality,trial,subset,t,observed,center,bound,normalized_deviation,violated\n";
  for (Inequality which : all_inequalities) {
    for (const Observation& row : rows[static_cast<std::size_t>(which)]) {
      out << inequality_name(which) << ',' << row.trial << ',' << row.subset << ',' << row.t << ','
          << row.observed << ',' << row.center << ',' << row.bound << ','
          << row.normalized_deviation << ',' << (row.violated ? 1 : 0) << '\n';
    }
  }
  out.flags(flags);
  out.precision(precision);
}

// ---------------------------------------------------------------------------
// G^ comparison

const GHatEstimate& GHatFamily::estimate(std::string_view quantity) const {
  for (const auto& e : estimates) {
    if (e.quantity == quantity) return e;
  }
  throw std::out_of_range("no estimate named '" + std::string(quantity) + "'");
}

const GHatFamily& GHatReport::family(std::string_view name) const {
  for (const auto& f : families) {
    if (f.name == name) return f;
  }
  throw std::out_of_range("no family named '" + std::string(name) + "'");
}

nlohmann::json GHatReport::to_json() const {
  nlohmann::json out = {{"M", M}, {"trials", trials}, {"seed", seed}};
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& f : families) {
    nlohmann::json est = nlohmann::json::object();
    for (const auto& e : f.estimates) {
      est[e.quantity] = {{"mean", e.mean},
                         {"std_error", e.std_error},
                         {"closed_form", e.closed_form},
                         {"exact_mean", e.exact_mean},
                         {"gap", e.gap},
                         {"z_closed", e.z_closed}};
    }
    fams.push_back({{"name", f.name}, {"size", f.size}, {"estimates", std::move(est)}});
  }
  out["families"] = std::move(fams);
  return out;
}

namespace {

struct Family {
  std::string name;
  std::vector<std::uint8_t> members;  // indexed by i - 1
};

std::vector<Family> ghat_families(std::uint64_t M, std::uint64_t seed) {
  std::vector<Family> families;
  families.push_back({"all", std::vector<std::uint8_t>(M, 1)});
  Family prefix{"prefix_half", std::vector<std::uint8_t>(M, 0)};
  for (std::uint64_t i = 0; i < M / 2; ++i) prefix.members[i] = 1;
  families.push_back(std::move(prefix));
  Family odd{"odd", std::vector<std::uint8_t>(M, 0)};
  for (std::uint64_t i = 0; i < M; i += 2) odd.members[i] = 1;
  families.push_back(std::move(odd));
  Family random{"random_half", std::vector<std::uint8_t>(M, 0)};
  Rng rng(derive_seed(seed, 0, subset_stream));
  for (auto& bit : random.members) bit = rng.bernoulli(0.5);
  families.push_back(std::move(random));
  return families;
}

}  // namespace

GHatReport run_ghat_comparison(std::uint64_t M, std::uint32_t trials, std::uint64_t seed) {
  if (M > 10'000) {
    throw capacity_error("G^ comparison is capped at M=10^4 (got M=" + std::to_string(M) + ")");
  }
  if (M < 2) throw std::invalid_argument("M must be at least 2");
  if (trials < 2) throw std::invalid_argument("need at least 2 trials for a standard error");

  const auto families = ghat_families(M, seed);
  const std::size_t F = families.size();
  // samples[trial][family][quantity]
  std::vector<std::array<double, 3>> samples(std::size_t{trials} * F);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(trials); ++k) {
    const GHatGraph g = generate_ghat(M, derive_seed(seed, static_cast<std::uint64_t>(k), graph_stream));
    for (std::size_t f = 0; f < F; ++f) {
      const auto& in = families[f].members;
      std::uint64_t within = 0, between = 0, volume = 0;
      for (const Edge& e : g.edges) {
        const bool a = in[e.u - 1] != 0;
        const bool b = in[e.v - 1] != 0;
        volume += a + b;
        within += a && b;
        between += a != b;
      }
      samples[k * F + f] = {static_cast<double>(within), static_cast<double>(between),
                            static_cast<double>(volume)};
    }
  }

  long double A = 0.0L;
  for (std::uint64_t i = 1; i <= M; ++i) A += 0.5L / std::sqrt(static_cast<long double>(i));

  GHatReport report{M, trials, seed, {}};
  static const char* names[3] = {"e_within", "e_between", "vol"};
  for (std::size_t f = 0; f < F; ++f) {
    long double a = 0.0L, diag = 0.0L;
    std::uint64_t size = 0;
    for (std::uint64_t i = 1; i <= M; ++i) {
      if (!families[f].members[i - 1]) continue;
      ++size;
      a += 0.5L / std::sqrt(static_cast<long double>(i));
      diag += 0.25L / static_cast<long double>(i);
    }
    // E e(S) = a^2 + diag: off-diagonal pairs give a^2 - diag and loops 2 diag.
    const long double closed[3] = {a * a, 2.0L * a * (A - a), 2.0L * A * a};
    const long double exact[3] = {a * a + diag, 2.0L * a * (A - a), 2.0L * A * a + 2.0L * diag};
    GHatFamily family{families[f].name, size, {}};
    for (std::size_t q = 0; q < 3; ++q) {
      long double sum = 0.0L;
      for (std::uint32_t k = 0; k < trials; ++k) sum += samples[k * F + f][q];
      const long double mean = sum / trials;
      long double ss = 0.0L;
      for (std::uint32_t k = 0; k < trials; ++k) {
        const long double d = samples[k * F + f][q] - mean;
        ss += d * d;
      }
      const long double se = std::sqrt(ss / (trials - 1) / trials);
      GHatEstimate e;
      e.quantity = names[q];
      e.mean = static_cast<double>(mean);
      e.std_error = static_cast<double>(se);
      e.closed_form = static_cast<double>(closed[q]);
      e.exact_mean = static_cast<double>(exact[q]);
      e.gap = static_cast<double>(mean - closed[q]);
      e.z_closed = se > 0 ? static_cast<double>(std::abs(mean - closed[q]) / se) : 0.0;
      family.estimates.push_back(std::move(e));
    }
    report.families.push_back(std::move(family));
  }
  return report;
}

std::vector<GapFit> fit_ghat_gaps(std::span<const std::uint64_t> Ms, std::uint32_t trials,
                                  std::uint64_t seed) {
  std::vector<GHatReport> reports;
  for (std::uint64_t M : Ms) reports.push_back(run_ghat_comparison(M, trials, seed));
  std::vector<GapFit> fits;
  if (reports.empty()) return fits;
  for (const auto& family : reports.front().families) {
    for (const auto& estimate : family.estimates) {
      GapFit fit{family.name, estimate.quantity, 0.0, {}};
      double xy = 0.0, xx = 0.0;
      for (const auto& report : reports) {
        const double x = std::log(static_cast<double>(report.M));
        const double y = std::abs(report.family(family.name).estimate(estimate.quantity).gap);
        xy += x * y;
        xx += x * x;
        fit.ratios.push_back(y / x);
      }
      fit.C = xy / xx;
      fits.push_back(std::move(fit));
    }
  }
  return fits;
}

}  // namespace pamod

#ifndef PAMOD_RNG_HPP
#define PAMOD_RNG_HPP

#include <cstdint>
#include <random>

namespace pamod {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for the `index`-th unit of work (trial, restart, ...) derived from a
/// base seed. `stream` separates independent uses within one unit, e.g.
/// graph generation (0) and subset sampling (1) of the same trial.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index,
                                    std::uint64_t stream = 0) noexcept {
  return mix64(mix64(base ^ mix64(index)) + stream);
}

/// Reproducible random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded integers and reals are derived here rather than through
/// <random> distributions, whose algorithms are implementation-defined, so a
/// given seed yields the same draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Number of failures before the first success of Bernoulli(p) trials,
  /// p in (0, 1].
  std::uint64_t geometric(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pamod

#endif  // PAMOD_RNG_HPP

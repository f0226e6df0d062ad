#include "pamod/rng.hpp"

#include <cmath>
#include <limits>

namespace pamod {

// Lemire's multiply-shift with rejection; unbiased for every bound.
std::uint64_t Rng::below(std::uint64_t bound) {
  unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

std::uint64_t Rng::geometric(double p) {
  if (p >= 1.0) return 0;
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double u = 1.0 - uniform();
  const double skip = std::floor(std::log(u) / std::log1p(-p));
  if (skip >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    return std::numeric_limits<std::uint64_t>::max() / 2;
  }
  return static_cast<std::uint64_t>(skip);
}

}  // namespace pamod

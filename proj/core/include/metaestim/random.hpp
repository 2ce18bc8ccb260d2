#ifndef METAESTIM_RANDOM_HPP
#define METAESTIM_RANDOM_HPP

#include <cstdint>
#include <random>

namespace metaestim {

/// Every run owns one explicitly seeded stream.
using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 161803398;

/// Uniform draw on [lo, hi).
inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// Normal draw that tolerates a zero deviation.
inline double normal(Rng& rng, double mean, double sd) { return sd > 0.0 ? mean + sd * standard_normal(rng) : mean; }

inline bool bernoulli(Rng& rng, double p) { return uniform(rng) < p; }

}  // namespace metaestim

#endif  // METAESTIM_RANDOM_HPP

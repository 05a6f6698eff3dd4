#ifndef MARWEIGHT_RANDOM_HPP
#define MARWEIGHT_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace marweight {

/// The engine used everywhere. std::mt19937_64 output is fully specified by the standard; the
/// transforms below are written out so results do not depend on the library's distributions.
using rng_engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent child seed for stream `index` of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline rng_engine make_rng(std::uint64_t seed, std::uint64_t stream = 0) { return rng_engine(derive_seed(seed, stream)); }

/// Uniform on [0, 1).
inline double uniform01(rng_engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(rng_engine& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform on {0, ..., n-1}; n must be positive.
inline std::uint64_t bounded(rng_engine& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline bool bernoulli(rng_engine& rng, double p) { return uniform01(rng) < p; }

/// Standard normal via Box-Muller (one draw per call).
inline double standard_normal(rng_engine& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double log_normal(rng_engine& rng, double sigma) { return std::exp(sigma * standard_normal(rng)); }

}  // namespace marweight

#endif

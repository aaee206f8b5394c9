#pragma once

// Counter-based random source. Every adjacency entry (i, j) of every
// replicate draws from its own engine whose state is a hash of
// (seed, stream, entry index), so results never depend on traversal order
// or thread scheduling. All variate transforms are implemented here rather
// than taken from <random>, whose distributions are implementation-defined.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace bimmdf {

namespace rng {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of two 64-bit keys.
constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a + 0x9e3779b97f4a7c15ULL) ^ (b * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

/// SplitMix64 generator, seeded per entry.
class Engine {
 public:
  explicit constexpr Engine(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    // Box-Muller, one output per call to keep draws-per-entry fixed.
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential(double mean) { return -mean * std::log(uniform()); }

  double logistic(double location, double scale) {
    const double u = uniform();
    return location + scale * std::log(u / (1.0 - u));
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::int64_t poisson(double mean);
  std::int64_t binomial(std::int64_t trials, double p);

 private:
  std::uint64_t state_;
};

// Mean below this uses sequential inversion, above it transformed rejection.
inline constexpr double kPoissonInversionLimit = 10.0;

inline std::int64_t Engine::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < kPoissonInversionLimit) {
    double p = std::exp(-mean);
    double cdf = p;
    const double u = uniform();
    std::int64_t k = 0;
    // The cap only matters when u rounds above the representable cdf.
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  // PTRS, Hoermann (1993).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double U = uniform() - 0.5;
    const double V = uniform();
    const double us = 0.5 - std::abs(U);
    const double kd = std::floor((2.0 * a / us + b) * U + mean + 0.43);
    if (us >= 0.07 && V <= vr) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && V > us)) continue;
    if (std::log(V) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + kd * loglam - std::lgamma(kd + 1.0)) {
      return static_cast<std::int64_t>(kd);
    }
  }
}

inline std::int64_t Engine::binomial(std::int64_t trials, double p) {
  if (p <= 0.0 || trials <= 0) return 0;
  if (p >= 1.0) return trials;
  if (p > 0.5) return trials - binomial(trials, 1.0 - p);
  const double q = 1.0 - p;
  const double q_pow = std::pow(q, static_cast<double>(trials));
  if (q_pow < 1e-280) {
    std::int64_t k = 0;
    for (std::int64_t t = 0; t < trials; ++t) k += bernoulli(p) ? 1 : 0;
    return k;
  }
  // Sequential inversion (BINV).
  const double s = p / q;
  const double a = static_cast<double>(trials + 1) * s;
  double r = q_pow;
  double u = uniform();
  std::int64_t k = 0;
  while (u > r) {
    u -= r;
    ++k;
    if (k > trials) return trials;
    r *= a / static_cast<double>(k) - s;
  }
  return k;
}

}  // namespace rng

/// Seed plus substream index; identical values yield identical draws.
struct RandomSource {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  rng::Engine engine_for(std::uint64_t index) const {
    return rng::Engine(rng::combine(rng::combine(seed, stream), index));
  }

  RandomSource substream(std::uint64_t s) const { return {rng::combine(seed, stream), s}; }
};

}  // namespace bimmdf

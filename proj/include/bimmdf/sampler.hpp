#pragma once

#include "bimmdf/core.hpp"
#include "bimmdf/distribution.hpp"
#include "bimmdf/model.hpp"
#include "bimmdf/random.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace bimmdf {

namespace detail {

/// Describes the bound `omega` violates for `dist`, or nullopt when admissible.
inline std::optional<std::string> omega_violation(const EdgeDistribution& dist, double omega) {
  if (!std::isfinite(omega)) return "finite mean";
  switch (dist.kind) {
    case DistributionKind::Bernoulli:
      if (omega < 0.0 || omega > 1.0) return "Omega in [0,1]";
      break;
    case DistributionKind::Poisson:
      if (omega < 0.0) return "Omega >= 0";
      break;
    case DistributionKind::Binomial:
      if (omega < 0.0 || omega > *dist.trials) return "Omega in [0,m]";
      break;
    case DistributionKind::Exponential:
      if (!(omega > 0.0)) return "Omega > 0";
      break;
    case DistributionKind::Uniform:
      if (omega < 0.0) return "Omega >= 0";
      break;
    case DistributionKind::Signed:
      if (std::abs(omega) > 1.0) return "|Omega| <= 1";
      break;
    case DistributionKind::Normal:
    case DistributionKind::Logistic: break;
  }
  return std::nullopt;
}

inline double draw_entry(rng::Engine& eng, const EdgeDistribution& dist, double omega) {
  switch (dist.kind) {
    case DistributionKind::Bernoulli: return eng.bernoulli(omega) ? 1.0 : 0.0;
    case DistributionKind::Poisson: return static_cast<double>(eng.poisson(omega));
    case DistributionKind::Binomial: {
      const int m = *dist.trials;
      return static_cast<double>(eng.binomial(m, omega / m));
    }
    case DistributionKind::Normal: {
      // sigma2 == 0 must reproduce Omega exactly.
      const double sd = std::sqrt(*dist.variance);
      const double z = eng.normal();
      return sd == 0.0 ? omega : omega + sd * z;
    }
    case DistributionKind::Exponential: return eng.exponential(omega);
    case DistributionKind::Uniform: return 2.0 * omega * eng.uniform();
    case DistributionKind::Logistic: return eng.logistic(omega, *dist.scale);
    case DistributionKind::Signed: return eng.bernoulli((1.0 + omega) / 2.0) ? 1.0 : -1.0;
  }
  return 0.0;
}

}  // namespace detail

/// Draws A(i,j) ~ F independently with E[A(i,j)] = Omega(i,j).
///
/// Entry (i,j) uses the engine indexed by its row-major position, so the
/// output is a pure function of (omega, dist, rng). The mirrored uniform
/// law Uniform(2*Omega, 0) is obtained by sampling with -Omega and negating.
inline Matrix sample_adjacency(const Matrix& omega, const EdgeDistribution& dist,
                               const RandomSource& rng) {
  dist.check();
  const Index rows = omega.rows();
  const Index cols = omega.cols();
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (auto bound = detail::omega_violation(dist, omega(i, j))) {
        throw DomainError(std::string(to_string(dist.kind)) + ": entry (" + std::to_string(i + 1) +
                          "," + std::to_string(j + 1) + ") = " + std::to_string(omega(i, j)) +
                          " violates " + *bound);
      }
    }
  }
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      auto eng = rng.engine_for(static_cast<std::uint64_t>(i * cols + j));
      a(i, j) = detail::draw_entry(eng, dist, omega(i, j));
    }
  }
  return a;
}

inline Matrix sample_adjacency(const ExpectationMatrix& omega, const EdgeDistribution& dist,
                               const RandomSource& rng) {
  return sample_adjacency(omega.omega, dist, rng);
}

}  // namespace bimmdf

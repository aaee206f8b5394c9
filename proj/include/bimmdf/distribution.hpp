#pragma once

#include "bimmdf/core.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace bimmdf {

enum class DistributionKind {
  Bernoulli,
  Poisson,
  Binomial,
  Normal,
  Exponential,
  Uniform,
  Logistic,
  Signed,
};

inline constexpr std::array<DistributionKind, 8> kAllDistributionKinds = {
    DistributionKind::Bernoulli,   DistributionKind::Poisson,
    DistributionKind::Binomial,    DistributionKind::Normal,
    DistributionKind::Exponential, DistributionKind::Uniform,
    DistributionKind::Logistic,    DistributionKind::Signed,
};

inline std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Bernoulli: return "bernoulli";
    case DistributionKind::Poisson: return "poisson";
    case DistributionKind::Binomial: return "binomial";
    case DistributionKind::Normal: return "normal";
    case DistributionKind::Exponential: return "exponential";
    case DistributionKind::Uniform: return "uniform";
    case DistributionKind::Logistic: return "logistic";
    case DistributionKind::Signed: return "signed";
  }
  return "unknown";
}

inline DistributionKind parse_distribution_kind(std::string_view name) {
  for (auto kind : kAllDistributionKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw ParseError("unknown distribution kind '" + std::string(name) + "'");
}

/// Edge law F with mean Omega(i,j). Only the parameter belonging to `kind`
/// is meaningful; the factory functions below are the supported way to
/// build one, and `check()` rejects stray or missing parameters.
struct EdgeDistribution {
  DistributionKind kind = DistributionKind::Bernoulli;
  std::optional<int> trials;         // Binomial m
  std::optional<double> variance;    // Normal sigma_A^2
  std::optional<double> scale;       // Logistic beta

  static EdgeDistribution of(DistributionKind k) {
    EdgeDistribution d;
    d.kind = k;
    return d;
  }
  static EdgeDistribution bernoulli() { return of(DistributionKind::Bernoulli); }
  static EdgeDistribution poisson() { return of(DistributionKind::Poisson); }
  static EdgeDistribution binomial(int m) {
    auto d = of(DistributionKind::Binomial);
    d.trials = m;
    return d;
  }
  static EdgeDistribution normal(double sigma2) {
    auto d = of(DistributionKind::Normal);
    d.variance = sigma2;
    return d;
  }
  static EdgeDistribution exponential() { return of(DistributionKind::Exponential); }
  static EdgeDistribution uniform() { return of(DistributionKind::Uniform); }
  static EdgeDistribution logistic(double beta) {
    auto d = of(DistributionKind::Logistic);
    d.scale = beta;
    return d;
  }
  static EdgeDistribution signed_edges() { return of(DistributionKind::Signed); }

  /// Throws DomainError when parameters are missing, stray, or out of range.
  void check() const {
    const bool wants_trials = kind == DistributionKind::Binomial;
    const bool wants_variance = kind == DistributionKind::Normal;
    const bool wants_scale = kind == DistributionKind::Logistic;
    const std::string name(to_string(kind));
    if (wants_trials != trials.has_value())
      throw DomainError(name + ": parameter m (trials) must be present exactly for binomial");
    if (wants_variance != variance.has_value())
      throw DomainError(name + ": parameter sigma2 must be present exactly for normal");
    if (wants_scale != scale.has_value())
      throw DomainError(name + ": parameter beta must be present exactly for logistic");
    if (trials && *trials < 1) throw DomainError("binomial: m must be a positive integer");
    if (variance && !(*variance >= 0.0 && std::isfinite(*variance)))
      throw DomainError("normal: sigma2 must be finite and >= 0");
    if (scale && !(*scale > 0.0 && std::isfinite(*scale)))
      throw DomainError("logistic: beta must be finite and > 0");
  }

  friend bool operator==(const EdgeDistribution&, const EdgeDistribution&) = default;
};

/// Interval of admissible rho values; `upper_closed` distinguishes (0,1] from (0,1).
struct RhoInterval {
  double lower = 0.0;  // always open at the lower end
  double upper = std::numeric_limits<double>::infinity();
  bool upper_closed = false;

  bool contains(double rho) const {
    if (!(rho > lower)) return false;
    if (std::isinf(upper)) return std::isfinite(rho);
    return upper_closed ? rho <= upper : rho < upper;
  }

  std::string describe() const {
    std::string s = "(" + std::to_string(lower) + ", ";
    if (std::isinf(upper)) return s + "inf)";
    return s + std::to_string(upper) + (upper_closed ? "]" : ")");
  }
};

inline RhoInterval admissible_rho_interval(const EdgeDistribution& dist) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (dist.kind) {
    case DistributionKind::Bernoulli: return {0.0, 1.0, true};
    case DistributionKind::Binomial:
      return {0.0, static_cast<double>(dist.trials.value_or(1)), true};
    case DistributionKind::Signed: return {0.0, 1.0, false};
    case DistributionKind::Poisson:
    case DistributionKind::Normal:
    case DistributionKind::Exponential:
    case DistributionKind::Uniform:
    case DistributionKind::Logistic: return {0.0, inf, false};
  }
  return {0.0, inf, false};
}

/// Upper bound on gamma = max E[(A - Omega)^2] / rho for each edge law.
inline double distribution_gamma(const EdgeDistribution& dist, double rho) {
  dist.check();
  const auto interval = admissible_rho_interval(dist);
  if (!interval.contains(rho)) {
    throw DomainError(std::string(to_string(dist.kind)) + ": rho=" + std::to_string(rho) +
                      " outside admissible interval " + interval.describe());
  }
  switch (dist.kind) {
    case DistributionKind::Bernoulli:
    case DistributionKind::Poisson:
    case DistributionKind::Binomial: return 1.0;
    case DistributionKind::Normal: return *dist.variance / rho;
    case DistributionKind::Exponential: return rho;
    case DistributionKind::Uniform: return rho / 3.0;
    case DistributionKind::Logistic: {
      const double beta = *dist.scale;
      return std::numbers::pi * std::numbers::pi * beta * beta / (3.0 * rho);
    }
    case DistributionKind::Signed: return 1.0 / rho;
  }
  return 1.0;
}

/// Analytic variance of a single draw with mean `omega`.
inline double edge_variance(const EdgeDistribution& dist, double omega) {
  switch (dist.kind) {
    case DistributionKind::Bernoulli: return omega * (1.0 - omega);
    case DistributionKind::Poisson: return omega;
    case DistributionKind::Binomial: return omega * (1.0 - omega / *dist.trials);
    case DistributionKind::Normal: return *dist.variance;
    case DistributionKind::Exponential: return omega * omega;
    case DistributionKind::Uniform: return omega * omega / 3.0;
    case DistributionKind::Logistic: {
      const double beta = *dist.scale;
      return std::numbers::pi * std::numbers::pi * beta * beta / 3.0;
    }
    case DistributionKind::Signed: return 1.0 - omega * omega;
  }
  return 0.0;
}

}  // namespace bimmdf

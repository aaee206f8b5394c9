#pragma once

#include "bimmdf/core.hpp"
#include "bimmdf/distribution.hpp"
#include "bimmdf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace bimmdf {

inline constexpr Index kMaxPermutationOrder = 10;

/// Bijection on {0..K-1}: column k of a permuted matrix is column mapping[k]
/// of the original.
struct Permutation {
  std::vector<Index> mapping;

  static Permutation identity(Index k) {
    Permutation p;
    p.mapping.resize(static_cast<std::size_t>(k));
    std::iota(p.mapping.begin(), p.mapping.end(), Index{0});
    return p;
  }

  bool is_bijection() const {
    std::vector<bool> seen(mapping.size(), false);
    for (Index m : mapping) {
      if (m < 0 || m >= static_cast<Index>(mapping.size()) || seen[static_cast<std::size_t>(m)])
        return false;
      seen[static_cast<std::size_t>(m)] = true;
    }
    return true;
  }

  Matrix apply_to_columns(const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < mapping.size(); ++k) {
      out.col(static_cast<Index>(k)) = x.col(mapping[k]);
    }
    return out;
  }
};

struct PermutationMatch {
  double distance = 0.0;  // entrywise l1 distance, not normalized
  Permutation permutation;
};

/// min over column permutations of sum |estimate(:, perm) - reference|.
inline PermutationMatch best_column_permutation(const Matrix& estimate, const Matrix& reference) {
  if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols()) {
    throw ShapeError("permutation match: shapes " +
                     detail::shape_string(estimate.rows(), estimate.cols()) + " and " +
                     detail::shape_string(reference.rows(), reference.cols()) + " differ");
  }
  const Index k = estimate.cols();
  if (k > kMaxPermutationOrder) {
    throw DomainError("permutation match: K=" + std::to_string(k) + " exceeds enumeration limit " +
                      std::to_string(kMaxPermutationOrder));
  }
  // cost(a, b) = l1 distance between estimate column a and reference column b.
  Matrix cost(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      cost(a, b) = (estimate.col(a) - reference.col(b)).cwiseAbs().sum();
    }
  }
  PermutationMatch best{std::numeric_limits<double>::infinity(), Permutation::identity(k)};
  auto perm = Permutation::identity(k);
  do {
    double total = 0.0;
    for (Index b = 0; b < k; ++b) total += cost(perm.mapping[static_cast<std::size_t>(b)], b);
    if (total < best.distance) best = {total, perm};
  } while (std::next_permutation(perm.mapping.begin(), perm.mapping.end()));
  return best;
}

inline double permuted_l1_per_node(const MembershipMatrix& estimate, const MembershipMatrix& truth) {
  if (estimate.rows() == 0) throw ShapeError("membership matrices are empty");
  return best_column_permutation(estimate.weights(), truth.weights()).distance /
         static_cast<double>(estimate.rows());
}

/// max of the permutation-minimized, node-averaged l1 discrepancies of the
/// row side and the column side.
inline double error_rate(const MembershipMatrix& Pi_r_hat, const MembershipMatrix& Pi_r,
                         const MembershipMatrix& Pi_c_hat, const MembershipMatrix& Pi_c) {
  if (Pi_r_hat.communities() != Pi_c_hat.communities()) {
    throw ShapeError("error_rate: row and column sides use different K");
  }
  return std::max(permuted_l1_per_node(Pi_r_hat, Pi_r), permuted_l1_per_node(Pi_c_hat, Pi_c));
}

/// Row/column asymmetry of a directed network fit (n_r == n_c).
inline double hamm_rc(const MembershipMatrix& Pi_r_hat, const MembershipMatrix& Pi_c_hat) {
  return permuted_l1_per_node(Pi_r_hat, Pi_c_hat);
}

/// Home-base community per node (0-based), ties toward the smaller index.
inline std::vector<Index> home_base(const MembershipMatrix& Pi_hat) {
  std::vector<Index> out(static_cast<std::size_t>(Pi_hat.rows()));
  for (Index i = 0; i < Pi_hat.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < Pi_hat.communities(); ++k) {
      if (Pi_hat(i, k) > Pi_hat(i, best)) best = k;
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

inline constexpr double kHighlyMixedThreshold = 0.8;

/// Fraction of nodes whose largest membership weight is <= threshold.
inline double mixed_proportion(const MembershipMatrix& Pi_hat,
                               double threshold = kHighlyMixedThreshold) {
  const double K = static_cast<double>(Pi_hat.communities());
  if (!(threshold > 1.0 / K && threshold < 1.0)) {
    throw DomainError("mixed_proportion: threshold must lie in (1/K, 1)");
  }
  if (Pi_hat.rows() == 0) throw ShapeError("mixed_proportion: empty membership matrix");
  Index mixed = 0;
  for (Index i = 0; i < Pi_hat.rows(); ++i) {
    if (Pi_hat.weights().row(i).maxCoeff() <= threshold) ++mixed;
  }
  return static_cast<double>(mixed) / static_cast<double>(Pi_hat.rows());
}

struct TheoreticalRate {
  double row_bound = 0.0;
  double col_bound = 0.0;
};

/// Per-node l1 error bound expressions with the hidden constant dropped:
/// K^2 sqrt(gamma log(n_r+n_c)) / (sigma_K(P) sqrt(rho n_c)), and the n_r twin.
inline TheoreticalRate theoretical_rate(const ModelSpec& spec) {
  const auto report = validate_model(spec);
  if (!report.ok()) throw InvalidSpecError("theoretical_rate: " + report.violations.front());
  const Vector sv = detail::singular_values_of(spec.P.entries());
  const double sigma_k = sv(sv.size() - 1);
  if (sigma_k < 1e-12) throw RankDeficientError("theoretical_rate: sigma_K(P) below 1e-12");
  const double gamma = distribution_gamma(spec.dist, spec.rho);
  const double K = static_cast<double>(spec.K());
  const double n_r = static_cast<double>(spec.n_r());
  const double n_c = static_cast<double>(spec.n_c());
  const double numerator = K * K * std::sqrt(gamma * std::log(n_r + n_c));
  return {numerator / (sigma_k * std::sqrt(spec.rho * n_c)),
          numerator / (sigma_k * std::sqrt(spec.rho * n_r))};
}

/// Margins of the two-block separation condition
///   gamma * max(|a_in|, |a_out|) >= tau^2   and   ||a_in| - |a_out|| >> tau.
/// The magnitude margin is left minus right side; the gap margin is the ratio.
struct SeparationMargins {
  double magnitude_margin = 0.0;
  double gap_margin = 0.0;
  double gamma = 0.0;  // gamma substituted for this law at rho = max|alpha| log(n)/n
  double rho = 0.0;
};

inline SeparationMargins separation_margins(const EdgeDistribution& dist, double alpha_in,
                                            double alpha_out, Index n, double tau) {
  dist.check();
  if (n < 3) throw DomainError("separation_margins: n must be >= 3");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("separation_margins: tau must be > 0");
  if (!std::isfinite(alpha_in) || !std::isfinite(alpha_out))
    throw DomainError("separation_margins: alpha values must be finite");

  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  const double n_over_log = nd / log_n;
  const double top = std::max(std::abs(alpha_in), std::abs(alpha_out));
  const std::string name(to_string(dist.kind));
  auto require = [&](bool ok, const char* domain) {
    if (!ok) throw DomainError("separation_margins: " + name + " requires alpha in " + domain);
  };
  auto in_range = [&](double lo, double hi, bool lo_open) {
    auto ok = [&](double a) { return (lo_open ? a > lo : a >= lo) && a <= hi; };
    return ok(alpha_in) && ok(alpha_out);
  };
  constexpr double inf = std::numeric_limits<double>::infinity();

  switch (dist.kind) {
    case DistributionKind::Bernoulli: require(in_range(0.0, n_over_log, false), "[0, n/log n]"); break;
    case DistributionKind::Poisson:
    case DistributionKind::Exponential: require(in_range(0.0, inf, true), "(0, inf)"); break;
    case DistributionKind::Binomial:
      require(in_range(0.0, *dist.trials * n_over_log, true), "(0, m n/log n]");
      break;
    case DistributionKind::Uniform: require(in_range(0.0, inf, false), "[0, inf)"); break;
    case DistributionKind::Signed:
      require(std::abs(alpha_in) < n_over_log && std::abs(alpha_out) < n_over_log,
              "(-n/log n, n/log n)");
      break;
    case DistributionKind::Normal:
    case DistributionKind::Logistic: break;
  }

  SeparationMargins out;
  out.rho = top * log_n / nd;
  switch (dist.kind) {
    case DistributionKind::Bernoulli:
    case DistributionKind::Poisson:
    case DistributionKind::Binomial: out.gamma = 1.0; break;
    case DistributionKind::Normal: out.gamma = *dist.variance / out.rho; break;
    case DistributionKind::Exponential: out.gamma = out.rho; break;
    case DistributionKind::Uniform: out.gamma = out.rho / 3.0; break;
    case DistributionKind::Logistic: {
      const double beta = *dist.scale;
      out.gamma = std::numbers::pi * std::numbers::pi * beta * beta / (3.0 * out.rho);
      break;
    }
    case DistributionKind::Signed: out.gamma = 1.0 / out.rho; break;
  }
  // gamma * max|alpha|, written so that rho cancels where it does algebraically.
  double magnitude = 0.0;
  switch (dist.kind) {
    case DistributionKind::Bernoulli:
    case DistributionKind::Poisson:
    case DistributionKind::Binomial: magnitude = top; break;
    case DistributionKind::Normal: magnitude = *dist.variance * n_over_log; break;
    case DistributionKind::Exponential: magnitude = top * top * log_n / nd; break;
    case DistributionKind::Uniform: magnitude = top * top * log_n / (3.0 * nd); break;
    case DistributionKind::Logistic: {
      const double beta = *dist.scale;
      magnitude = std::numbers::pi * std::numbers::pi * beta * beta * n_over_log / 3.0;
      break;
    }
    case DistributionKind::Signed: magnitude = n_over_log; break;
  }
  out.magnitude_margin = magnitude - tau * tau;
  out.gap_margin = std::abs(std::abs(alpha_in) - std::abs(alpha_out)) / tau;
  return out;
}

struct EmpiricalNoise {
  double tau_hat = 0.0;
  double gamma_hat = 0.0;
};

/// Single-sample plug-ins: tau_hat = max |A - Omega|, gamma_hat = max (A - Omega)^2 / rho.
inline EmpiricalNoise empirical_tau_gamma(const Matrix& a, const Matrix& omega, double rho) {
  if (a.rows() != omega.rows() || a.cols() != omega.cols()) {
    throw ShapeError("empirical_tau_gamma: A is " + detail::shape_string(a.rows(), a.cols()) +
                     " but Omega is " + detail::shape_string(omega.rows(), omega.cols()));
  }
  if (!(rho > 0.0)) throw DomainError("empirical_tau_gamma: rho must be > 0");
  if (a.size() == 0) return {};
  const double tau = (a - omega).cwiseAbs().maxCoeff();
  return {tau, tau * tau / rho};
}

}  // namespace bimmdf

#pragma once

#include "bimmdf/core.hpp"
#include "bimmdf/distribution.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bimmdf {

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kRelativeRankTolerance = 1e-10;

namespace detail {

inline Vector singular_values_of(const Matrix& m) {
  if (m.size() == 0) return Vector();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

/// Numerical rank using a relative threshold on sigma_1.
inline Index numerical_rank(const Matrix& m, double rel_tol = kRelativeRankTolerance) {
  const Vector s = singular_values_of(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Block matrix P
// ---------------------------------------------------------------------------

enum class SignClass { Nonnegative, StrictlyPositive, AnyReal };

inline std::string_view to_string(SignClass c) {
  switch (c) {
    case SignClass::Nonnegative: return "nonnegative";
    case SignClass::StrictlyPositive: return "strictly-positive";
    case SignClass::AnyReal: return "any-real";
  }
  return "unknown";
}

inline SignClass parse_sign_class(std::string_view name) {
  for (auto c : {SignClass::Nonnegative, SignClass::StrictlyPositive, SignClass::AnyReal}) {
    if (to_string(c) == name) return c;
  }
  throw ParseError("unknown sign class '" + std::string(name) + "'");
}

/// Tightest sign class the entries satisfy.
inline SignClass tightest_sign_class(const Matrix& entries) {
  if (entries.size() > 0 && (entries.array() > 0.0).all()) return SignClass::StrictlyPositive;
  if ((entries.array() >= 0.0).all()) return SignClass::Nonnegative;
  return SignClass::AnyReal;
}

inline bool sign_class_admits(SignClass declared, const Matrix& entries) {
  switch (declared) {
    case SignClass::StrictlyPositive: return (entries.array() > 0.0).all();
    case SignClass::Nonnegative: return (entries.array() >= 0.0).all();
    case SignClass::AnyReal: return true;
  }
  return false;
}

/// Whether edge law `kind` accepts a connectivity matrix of class `c`.
inline bool sign_class_compatible(SignClass c, DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Exponential: return c == SignClass::StrictlyPositive;
    case DistributionKind::Bernoulli:
    case DistributionKind::Poisson:
    case DistributionKind::Binomial:
    case DistributionKind::Uniform: return c != SignClass::AnyReal;
    case DistributionKind::Normal:
    case DistributionKind::Logistic:
    case DistributionKind::Signed: return true;
  }
  return false;
}

/// K x K connectivity matrix with max |P(k,l)| = 1 and full rank.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(Matrix entries, SignClass sign_class)
      : entries_(std::move(entries)), sign_class_(sign_class) {}

  /// Wraps `entries` with the tightest sign class they satisfy.
  static BlockMatrix with_inferred_class(Matrix entries) {
    const SignClass c = tightest_sign_class(entries);
    return BlockMatrix(std::move(entries), c);
  }

  /// Throws InvalidSpecError if any invariant fails.
  static BlockMatrix checked(Matrix entries, SignClass sign_class) {
    BlockMatrix p(std::move(entries), sign_class);
    const auto v = p.violations();
    if (!v.empty()) throw InvalidSpecError("block matrix: " + v.front());
    return p;
  }

  Index order() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  SignClass sign_class() const { return sign_class_; }
  double operator()(Index k, Index l) const { return entries_(k, l); }

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
      out.push_back("P must be a non-empty square matrix, got " +
                    detail::shape_string(entries_.rows(), entries_.cols()));
      return out;
    }
    if (!entries_.allFinite()) {
      out.push_back("P has non-finite entries");
      return out;
    }
    const double max_abs = entries_.cwiseAbs().maxCoeff();
    if (std::abs(max_abs - 1.0) > kStochasticTolerance) {
      out.push_back("P max-abs normalization: max |P(k,l)| = " + std::to_string(max_abs) +
                    ", expected 1");
    }
    if (detail::numerical_rank(entries_) < entries_.rows()) {
      out.push_back("P rank: P is rank deficient (rank < K)");
    }
    if (!sign_class_admits(sign_class_, entries_)) {
      out.push_back("P sign_class: entries violate declared class " +
                    std::string(to_string(sign_class_)));
    }
    return out;
  }

 private:
  Matrix entries_;
  SignClass sign_class_ = SignClass::AnyReal;
};

// ---------------------------------------------------------------------------
// Membership matrices
// ---------------------------------------------------------------------------

/// n x K nonnegative row-stochastic community weights.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  explicit MembershipMatrix(Matrix weights) : weights_(std::move(weights)) {}

  /// Throws InvalidSpecError unless entries lie in [0,1] and rows sum to 1
  /// within `row_sum_tol`. Rank and pure-row checks are opt-in.
  static MembershipMatrix checked(Matrix weights, double row_sum_tol = kStochasticTolerance,
                                  bool ground_truth = false) {
    MembershipMatrix m(std::move(weights));
    const auto v = m.violations(ground_truth, row_sum_tol);
    if (!v.empty()) throw InvalidSpecError("membership matrix: " + v.front());
    return m;
  }

  Index rows() const { return weights_.rows(); }
  Index communities() const { return weights_.cols(); }
  const Matrix& weights() const { return weights_; }
  double operator()(Index i, Index k) const { return weights_(i, k); }

  static bool is_pure_row(const Eigen::Ref<const Vector>& row) {
    Index hits = 0;
    for (Index k = 0; k < row.size(); ++k) {
      if (std::abs(row(k) - 1.0) <= kStochasticTolerance) ++hits;
      else if (std::abs(row(k)) > kStochasticTolerance) return false;
    }
    return hits == 1;
  }

  /// Number of pure rows, per community.
  std::vector<Index> pure_row_counts() const {
    std::vector<Index> counts(static_cast<std::size_t>(communities()), 0);
    for (Index i = 0; i < rows(); ++i) {
      const Vector row = weights_.row(i).transpose();
      if (!is_pure_row(row)) continue;
      Index k = 0;
      row.maxCoeff(&k);
      ++counts[static_cast<std::size_t>(k)];
    }
    return counts;
  }

  /// Every violated invariant, in a stable order. `ground_truth` adds the
  /// rank-K and pure-row-per-community checks.
  std::vector<std::string> violations(bool ground_truth,
                                      double row_sum_tol = kStochasticTolerance) const {
    std::vector<std::string> out;
    if (weights_.cols() == 0 || weights_.rows() == 0) {
      out.push_back("membership matrix is empty");
      return out;
    }
    if (!weights_.allFinite()) {
      out.push_back("membership matrix has non-finite entries");
      return out;
    }
    if (auto bad = first_out_of_range()) {
      const auto [i, k] = *bad;
      out.push_back("entry range: entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) +
                    ") = " + std::to_string(weights_(i, k)) + " outside [0,1]");
    }
    for (Index i = 0; i < rows(); ++i) {
      const double s = weights_.row(i).sum();
      if (std::abs(s - 1.0) > row_sum_tol) {
        out.push_back("row-stochasticity: row " + std::to_string(i + 1) + " sums to " +
                      std::to_string(s));
        break;
      }
    }
    if (ground_truth) {
      if (weights_.rows() < weights_.cols() ||
          detail::numerical_rank(weights_) < weights_.cols()) {
        out.push_back("membership rank: rank is below K");
      }
      const auto counts = pure_row_counts();
      for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) {
          out.push_back("pure-node assumption: community " + std::to_string(k + 1) +
                        " has no pure row");
          break;
        }
      }
    }
    return out;
  }

 private:
  std::optional<std::pair<Index, Index>> first_out_of_range() const {
    for (Index i = 0; i < rows(); ++i) {
      for (Index k = 0; k < communities(); ++k) {
        const double w = weights_(i, k);
        if (w < -kStochasticTolerance || w > 1.0 + kStochasticTolerance) return {{i, k}};
      }
    }
    return std::nullopt;
  }

  Matrix weights_;
};

// ---------------------------------------------------------------------------
// Model specification
// ---------------------------------------------------------------------------

/// Full parameter bundle of a mixed-membership distribution-free bipartite
/// model: Omega = rho * Pi_r * P * Pi_c', A(i,j) ~ F with mean Omega(i,j).
struct ModelSpec {
  BlockMatrix P;
  double rho = 1.0;
  MembershipMatrix Pi_r;
  MembershipMatrix Pi_c;
  EdgeDistribution dist;

  Index n_r() const { return Pi_r.rows(); }
  Index n_c() const { return Pi_c.rows(); }
  Index K() const { return P.order(); }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  bool mentions(std::string_view needle) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
  }
  std::string summary() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v;
    }
    return s;
  }
};

/// Lists every violated model invariant; empty iff the spec is valid.
inline ValidationReport validate_model(const ModelSpec& spec) {
  ValidationReport report;
  auto add = [&](const std::string& prefix, const std::vector<std::string>& items) {
    for (const auto& item : items) report.violations.push_back(prefix + item);
  };

  add("", spec.P.violations());
  add("Pi_r ", spec.Pi_r.violations(true));
  add("Pi_c ", spec.Pi_c.violations(true));

  const Index K = spec.K();
  if (spec.Pi_r.communities() != K || spec.Pi_c.communities() != K) {
    report.violations.push_back("community count: Pi_r/Pi_c column counts (" +
                                std::to_string(spec.Pi_r.communities()) + ", " +
                                std::to_string(spec.Pi_c.communities()) +
                                ") must equal K=" + std::to_string(K));
  }
  if (K > std::min(spec.n_r(), spec.n_c())) {
    report.violations.push_back("community count: K=" + std::to_string(K) +
                                " exceeds min(n_r, n_c)");
  }

  bool dist_ok = true;
  try {
    spec.dist.check();
  } catch (const DomainError& e) {
    dist_ok = false;
    report.violations.push_back(std::string("distribution parameters: ") + e.what());
  }
  if (dist_ok) {
    const auto interval = admissible_rho_interval(spec.dist);
    if (!interval.contains(spec.rho)) {
      report.violations.push_back("rho range: rho=" + std::to_string(spec.rho) + " outside " +
                                  interval.describe() + " for " +
                                  std::string(to_string(spec.dist.kind)));
    }
  }
  if (!sign_class_compatible(spec.P.sign_class(), spec.dist.kind)) {
    report.violations.push_back("sign_class/dist mismatch: P class " +
                                std::string(to_string(spec.P.sign_class())) +
                                " not allowed for " + std::string(to_string(spec.dist.kind)));
  }
  return report;
}

struct ExpectationMatrix {
  Matrix omega;

  Index rows() const { return omega.rows(); }
  Index cols() const { return omega.cols(); }
};

/// Omega = rho * Pi_r * P * Pi_c'. Throws InvalidSpecError naming the first
/// violated invariant.
inline ExpectationMatrix build_omega(const ModelSpec& spec) {
  const auto report = validate_model(spec);
  if (!report.ok()) throw InvalidSpecError("invalid model spec: " + report.violations.front());
  Matrix omega = spec.rho * (spec.Pi_r.weights() * spec.P.entries() * spec.Pi_c.weights().transpose());
  return {std::move(omega)};
}

/// Rows 1..K*n_pure are pure, community by community in index order; the
/// remaining rows carry the uniform membership (1/K, ..., 1/K).
inline MembershipMatrix make_planted_memberships(Index n, Index K, Index n_pure_per_community) {
  if (K < 1) throw DomainError("planted memberships: K must be >= 1");
  if (n_pure_per_community < 0) throw DomainError("planted memberships: n_pure must be >= 0");
  if (K * n_pure_per_community > n) {
    throw DomainError("planted memberships: K*n_pure=" + std::to_string(K * n_pure_per_community) +
                      " exceeds n=" + std::to_string(n));
  }
  Matrix w = Matrix::Constant(n, K, 1.0 / static_cast<double>(K));
  for (Index k = 0; k < K; ++k) {
    for (Index r = 0; r < n_pure_per_community; ++r) {
      const Index i = k * n_pure_per_community + r;
      w.row(i).setZero();
      w(i, k) = 1.0;
    }
  }
  return MembershipMatrix(std::move(w));
}

struct TwoBlockModel {
  BlockMatrix P;
  double rho = 0.0;
};

/// rho*P = [[a_in, a_out], [a_out, a_in]] * log(n)/n with max |P| = 1.
inline TwoBlockModel make_standard_two_block(Index n, double alpha_in, double alpha_out) {
  if (n < 3) throw DomainError("standard two-block model: n must be >= 3");
  if (!std::isfinite(alpha_in) || !std::isfinite(alpha_out))
    throw DomainError("standard two-block model: alpha values must be finite");
  const double a = std::abs(alpha_in);
  const double b = std::abs(alpha_out);
  if (a == b) {
    throw RankDeficientError("standard two-block model: |alpha_in| == |alpha_out| makes rho*P singular");
  }
  const double scale = std::log(static_cast<double>(n)) / static_cast<double>(n);
  const double top = std::max(a, b);
  Matrix p(2, 2);
  p << alpha_in / top, alpha_out / top, alpha_out / top, alpha_in / top;
  return {BlockMatrix::with_inferred_class(std::move(p)), top * scale};
}

}  // namespace bimmdf

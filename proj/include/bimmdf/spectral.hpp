#pragma once

#include "bimmdf/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace bimmdf {

/// Top-K singular triplets: A ~ left * diag(singular_values) * right'.
struct TruncatedSVD {
  Matrix left;             // n_r x K, orthonormal columns
  Vector singular_values;  // K, nonincreasing
  Matrix right;            // n_c x K, orthonormal columns

  Index rank() const { return singular_values.size(); }
  Matrix reconstruct() const { return left * singular_values.asDiagonal() * right.transpose(); }
};

namespace detail {

inline void check_rank_argument(const Matrix& a, Index k, std::string_view what) {
  const Index limit = std::min(a.rows(), a.cols());
  if (k < 1 || k > limit) {
    throw DomainError(std::string(what) + ": k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(limit) + "] for a " + shape_string(a.rows(), a.cols()) +
                      " matrix");
  }
  if (!a.allFinite()) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

/// Eigen-decomposition of the smaller Gram matrix; eigenvalues ascending.
inline Eigen::SelfAdjointEigenSolver<Matrix> gram_eigen(const Matrix& a) {
  Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("symmetric eigensolver failed to converge on a " +
                           shape_string(gram.rows(), gram.cols()) + " Gram matrix");
  }
  return es;
}

/// Fills zero columns of `q` (flagged in `missing`) with unit vectors
/// orthogonal to every other column.
inline void complete_orthonormal(Matrix& q, const std::vector<bool>& missing) {
  const Index n = q.rows();
  Index probe = 0;
  for (Index t = 0; t < q.cols(); ++t) {
    if (!missing[static_cast<std::size_t>(t)]) continue;
    for (; probe < n; ++probe) {
      Vector v = Vector::Unit(n, probe);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index s = 0; s < q.cols(); ++s) {
          if (s == t || (missing[static_cast<std::size_t>(s)] && s > t)) continue;
          v -= q.col(s).dot(v) * q.col(s);
        }
      }
      const double norm = v.norm();
      if (norm > 1e-6) {
        q.col(t) = v / norm;
        ++probe;
        break;
      }
    }
  }
}

}  // namespace detail

/// Deterministic top-K SVD via the Gram matrix of the shorter side.
///
/// Each left singular vector is oriented so that its largest-magnitude
/// entry is positive (first such entry on ties); the matching right vector
/// is flipped with it.
inline TruncatedSVD top_k_svd(const Matrix& a, Index k) {
  detail::check_rank_argument(a, k, "top_k_svd");
  const bool row_side = a.rows() <= a.cols();
  const auto es = detail::gram_eigen(a);
  const Index n = es.eigenvalues().size();

  Matrix primary(n, k);
  for (Index t = 0; t < k; ++t) primary.col(t) = es.eigenvectors().col(n - 1 - t);

  // Singular values come from |A' u| rather than sqrt(eigenvalue): the square
  // root would turn rounding in the Gram eigenvalues into errors of order
  // sqrt(eps) * sigma_1 on the small values.
  Matrix secondary = row_side ? Matrix(a.transpose() * primary) : Matrix(a * primary);
  TruncatedSVD out;
  out.singular_values = secondary.colwise().norm().transpose();
  for (Index t = 1; t < k; ++t) {
    out.singular_values(t) = std::min(out.singular_values(t), out.singular_values(t - 1));
  }
  const double floor = 1e-8 * out.singular_values(0);
  std::vector<bool> missing(static_cast<std::size_t>(k), false);
  for (Index t = 0; t < k; ++t) {
    const double s = secondary.col(t).norm();
    if (s > floor && s > 0.0) {
      secondary.col(t) /= s;
      for (Index r = 0; r < t; ++r) {
        if (!missing[static_cast<std::size_t>(r)]) {
          secondary.col(t) -= secondary.col(r).dot(secondary.col(t)) * secondary.col(r);
        }
      }
      secondary.col(t).normalize();
    } else {
      secondary.col(t).setZero();
      missing[static_cast<std::size_t>(t)] = true;
    }
  }
  detail::complete_orthonormal(secondary, missing);

  out.left = row_side ? std::move(primary) : std::move(secondary);
  out.right = row_side ? std::move(secondary) : std::move(primary);

  for (Index t = 0; t < k; ++t) {
    Index pivot = 0;
    out.left.col(t).cwiseAbs().maxCoeff(&pivot);
    if (out.left(pivot, t) < 0.0) {
      out.left.col(t) *= -1.0;
      out.right.col(t) *= -1.0;
    }
  }
  return out;
}

/// Top `k_max` singular values, nonincreasing.
inline std::vector<double> singular_values(const Matrix& a, Index k_max) {
  detail::check_rank_argument(a, k_max, "singular_values");
  const Vector s = top_k_svd(a, k_max).singular_values;
  return {s.data(), s.data() + s.size()};
}

enum class EigengapMethod { Difference, Ratio };

inline std::string_view to_string(EigengapMethod m) {
  return m == EigengapMethod::Difference ? "difference" : "ratio";
}

/// Index k (1-based) maximizing the gap between sigma_k and sigma_{k+1};
/// ties resolve to the smaller k.
inline Index estimate_k_eigengap(const std::vector<double>& sigmas,
                                 EigengapMethod method = EigengapMethod::Difference) {
  if (sigmas.size() < 2) throw DomainError("estimate_k_eigengap: need at least 2 singular values");
  if (!(sigmas.front() > 0.0)) throw DomainError("estimate_k_eigengap: sigma_1 must be > 0");
  for (std::size_t i = 0; i + 1 < sigmas.size(); ++i) {
    if (!(sigmas[i + 1] <= sigmas[i]) || sigmas[i + 1] < 0.0) {
      throw DomainError("estimate_k_eigengap: values must be nonnegative and nonincreasing");
    }
  }
  const double floor = 1e-12 * sigmas.front();
  Index best = 1;
  double best_gap = -1.0;
  for (std::size_t i = 0; i + 1 < sigmas.size(); ++i) {
    const double gap = method == EigengapMethod::Difference
                           ? sigmas[i] - sigmas[i + 1]
                           : sigmas[i] / std::max(sigmas[i + 1], floor);
    if (gap > best_gap) {
      best_gap = gap;
      best = static_cast<Index>(i + 1);
    }
  }
  return best;
}

}  // namespace bimmdf

#pragma once

#include "bimmdf/core.hpp"
#include "bimmdf/model.hpp"
#include "bimmdf/spa.hpp"
#include "bimmdf/spectral.hpp"

#include <limits>
#include <string>

namespace bimmdf {

inline constexpr double kMaxVertexCondition = 1e12;

/// Output of the spectral mixed-membership fit.
struct FitResult {
  MembershipMatrix Pi_r_hat;
  MembershipMatrix Pi_c_hat;
  Vector singular_values;
  PureIndexSet pure_rows;
  PureIndexSet pure_cols;
  double condition_r = 0.0;  // cond(B_r_hat)
  double condition_c = 0.0;  // cond(B_c_hat)
};

namespace detail {

inline double condition_number(const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(b);
  const Vector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

struct SideFit {
  MembershipMatrix memberships;
  PureIndexSet pure;
  double condition = 0.0;
};

// Vertex hunting and simplex inversion for one side (rows or columns).
inline SideFit fit_side(const Matrix& vectors, Index k, const char* side) {
  SideFit out;
  out.pure = spa(vectors, k);
  const Matrix vertices = vertex_matrix(vectors, out.pure);
  out.condition = condition_number(vertices);
  if (!(out.condition <= kMaxVertexCondition)) {
    throw IllPosedFitError(std::string("disp: ") + side + " vertex matrix is singular (condition " +
                           std::to_string(out.condition) + ")");
  }
  // Y = vectors * B^{-1}, via B' Y' = vectors'.
  const Eigen::PartialPivLU<Matrix> lu(vertices.transpose());
  Matrix y = lu.solve(vectors.transpose()).transpose();
  y = y.cwiseMax(0.0);

  const double uniform = 1.0 / static_cast<double>(k);
  for (Index i = 0; i < y.rows(); ++i) {
    const double s = y.row(i).sum();
    if (s < 1e-12) {
      y.row(i).setConstant(uniform);
    } else {
      y.row(i) /= s;
    }
  }
  out.memberships = MembershipMatrix(std::move(y));
  return out;
}

}  // namespace detail

/// Fit from precomputed singular vectors (steps 2-6 of the estimator).
inline FitResult disp_from_svd(const TruncatedSVD& svd) {
  const Index k = svd.rank();
  auto rows = detail::fit_side(svd.left, k, "row");
  auto cols = detail::fit_side(svd.right, k, "column");
  FitResult out;
  out.Pi_r_hat = std::move(rows.memberships);
  out.Pi_c_hat = std::move(cols.memberships);
  out.singular_values = svd.singular_values;
  out.pure_rows = std::move(rows.pure);
  out.pure_cols = std::move(cols.pure);
  out.condition_r = rows.condition;
  out.condition_c = cols.condition;
  return out;
}

/// Estimates row and column memberships of a weighted bipartite network:
/// top-K SVD, SPA on both singular-vector matrices, simplex inversion,
/// clamp at zero, row-normalize.
inline FitResult disp(const Matrix& a, Index k) { return disp_from_svd(top_k_svd(a, k)); }

/// Noise-free fit on Omega; recovers the planted memberships up to a
/// permutation whenever the spec is valid.
inline FitResult ideal_disp(const ModelSpec& spec) {
  return disp(build_omega(spec).omega, spec.K());
}

}  // namespace bimmdf

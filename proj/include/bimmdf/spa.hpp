#pragma once

#include "bimmdf/core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bimmdf {

/// Row indices (0-based) picked by SPA, in selection order.
struct PureIndexSet {
  std::vector<Index> indices;

  Index size() const { return static_cast<Index>(indices.size()); }
  Index operator[](std::size_t t) const { return indices[t]; }
};

/// Successive projection: K rounds of "take the row of largest residual
/// norm, then project all rows onto the orthogonal complement of it".
/// Ties go to the lowest row index.
inline PureIndexSet spa(const Matrix& x, Index k) {
  const Index n = x.rows();
  if (k < 1) throw DomainError("spa: K must be >= 1");
  if (k > n) {
    throw DomainError("spa: K=" + std::to_string(k) + " exceeds row count " + std::to_string(n));
  }
  if (!x.allFinite()) throw DomainError("spa: input has non-finite entries");

  Matrix residual = x;
  std::vector<Vector> directions;
  directions.reserve(static_cast<std::size_t>(k));
  PureIndexSet out;
  double initial_max = -1.0;

  for (Index round = 0; round < k; ++round) {
    const Vector norms = residual.rowwise().squaredNorm();
    Index best = 0;
    for (Index i = 1; i < n; ++i) {
      if (norms(i) > norms(best)) best = i;
    }
    const double best_norm = std::sqrt(norms(best));
    if (round == 0) initial_max = best_norm;
    if (!(best_norm > 1e-12 * initial_max) || best_norm == 0.0) {
      throw RankDeficientError("spa: residual vanished after " + std::to_string(round) +
                               " of " + std::to_string(k) + " selections (rank-deficient input)");
    }
    out.indices.push_back(best);

    Vector u = residual.row(best).transpose() / best_norm;
    // Re-orthogonalize against earlier directions before deflating.
    for (const auto& d : directions) u -= d.dot(u) * d;
    u.normalize();
    directions.push_back(u);

    residual -= (residual * u) * u.transpose();
    for (const auto& d : directions) residual -= (residual * d) * d.transpose();
  }
  return out;
}

/// Stacks the selected rows of `x` in selection order.
inline Matrix vertex_matrix(const Matrix& x, const PureIndexSet& idx) {
  Matrix out(idx.size(), x.cols());
  for (Index t = 0; t < idx.size(); ++t) {
    const Index i = idx.indices[static_cast<std::size_t>(t)];
    if (i < 0 || i >= x.rows()) {
      throw DomainError("vertex_matrix: index " + std::to_string(i + 1) + " outside [1, " +
                        std::to_string(x.rows()) + "]");
    }
    out.row(t) = x.row(i);
  }
  return out;
}

}  // namespace bimmdf

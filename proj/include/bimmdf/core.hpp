#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bimmdf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy. Everything derives from std::runtime_error so callers that
// do not care about the category can catch a single type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A ModelSpec (or one of its parts) violates a model invariant.
struct InvalidSpecError : Error {
  using Error::Error;
};

/// An argument lies outside the domain an operation accepts.
struct DomainError : Error {
  using Error::Error;
};

/// Matrix shapes or community counts disagree.
struct ShapeError : Error {
  using Error::Error;
};

/// An iterative numerical routine did not converge.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Rank-deficient input where a full-rank one is required.
struct RankDeficientError : Error {
  using Error::Error;
};

/// The vertex matrix of a fit is numerically singular.
struct IllPosedFitError : Error {
  using Error::Error;
};

/// Malformed text input (CSV, TSV, JSON).
struct ParseError : Error {
  using Error::Error;
};

namespace detail {

inline std::string shape_string(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace detail

}  // namespace bimmdf

#include "bimmdf/spectral.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace bimmdf;

namespace {

Matrix random_matrix(gen::Gen& g, Index r, Index c) {
  Matrix a(r, c);
  for (Index i = 0; i < a.size(); ++i) a(i) = g.uniform(-1, 1);
  return a;
}

double orthogonality_defect(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(TopKSvd, DiagonalMatrix) {
  Matrix a = Matrix::Zero(4, 5);
  a(0, 0) = 3;
  a(1, 1) = 2;
  a(2, 2) = 1;
  const auto svd = top_k_svd(a, 2);
  EXPECT_NEAR(svd.singular_values(0), 3.0, 1e-14);
  EXPECT_NEAR(svd.singular_values(1), 2.0, 1e-14);
  EXPECT_NEAR(svd.left(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(svd.right(1, 1), 1.0, 1e-14);
}

TEST(TopKSvd, ReconstructsExactRankOmega) {
  gen::Gen g(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = gen::spec(g);
    const Matrix omega = build_omega(s).omega;
    const auto svd = top_k_svd(omega, s.K());
    EXPECT_LE((svd.reconstruct() - omega).norm(), 1e-8 * omega.norm());
  }
}

TEST(TopKSvd, MatchesJacobiOracle) {
  gen::Gen g(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(g, 30, 20);
    const auto svd = top_k_svd(a, 5);
    const auto ref = oracle::jacobi_svd(a);
    for (Index t = 0; t < 5; ++t) {
      EXPECT_NEAR(svd.singular_values(t), ref.s(t), 1e-9 * ref.s(t));
    }
  }
}

TEST(TopKSvd, BestRankKApproximation) {
  gen::Gen g(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Index r = g.integer(3, 25), c = g.integer(3, 25);
    const Index k = g.integer(1, std::min(r, c));
    const Matrix a = random_matrix(g, r, c);
    const auto ref = oracle::jacobi_svd(a);
    const double optimal = ref.s.tail(ref.s.size() - k).norm();
    EXPECT_NEAR((a - top_k_svd(a, k).reconstruct()).norm(), optimal, 1e-9 * ref.s(0));
  }
}

TEST(TopKSvd, OrthonormalOrderedAndSignNormalized) {
  gen::Gen g(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Index r = g.integer(2, 50), c = g.integer(2, 50);
    const Index k = g.integer(1, std::min(r, c));
    const auto svd = top_k_svd(random_matrix(g, r, c), k);
    EXPECT_LE(orthogonality_defect(svd.left), 1e-10);
    EXPECT_LE(orthogonality_defect(svd.right), 1e-10);
    for (Index t = 0; t + 1 < k; ++t) EXPECT_GE(svd.singular_values(t), svd.singular_values(t + 1));
    for (Index t = 0; t < k; ++t) {
      Index pivot = 0;
      svd.left.col(t).cwiseAbs().maxCoeff(&pivot);
      EXPECT_GT(svd.left(pivot, t), 0.0);
    }
  }
}

TEST(TopKSvd, RankDeficientInputStillOrthonormal) {
  Matrix a = Matrix::Zero(6, 4);
  a(0, 0) = 1.0;
  const auto svd = top_k_svd(a, 3);
  EXPECT_LE(orthogonality_defect(svd.left), 1e-10);
  EXPECT_LE(orthogonality_defect(svd.right), 1e-10);
  EXPECT_LE((svd.reconstruct() - a).norm(), 1e-12);
}

TEST(TopKSvd, SignFlipLeavesProductUnchanged) {
  gen::Gen g(25);
  const Matrix a = random_matrix(g, 12, 9);
  auto svd = top_k_svd(a, 4);
  const Matrix before = svd.reconstruct();
  svd.left.col(2) *= -1.0;
  svd.right.col(2) *= -1.0;
  EXPECT_LE((svd.reconstruct() - before).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(TopKSvd, AgreesWithGramEigendecomposition) {
  gen::Gen g(26);
  for (int trial = 0; trial < 20; ++trial) {
    const Index r = g.integer(2, 50), c = g.integer(2, 50);
    const Matrix a = random_matrix(g, r, c);
    const Index k = std::min(r, c);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
    const auto svd = top_k_svd(a, k);
    for (Index t = 0; t < k; ++t) {
      const double ref = std::sqrt(std::max(es.eigenvalues()(c - 1 - t), 0.0));
      EXPECT_NEAR(svd.singular_values(t), ref, 1e-8);
    }
  }
}

TEST(TopKSvd, RejectsBadArguments) {
  EXPECT_THROW(top_k_svd(Matrix::Ones(3, 4), 0), DomainError);
  EXPECT_THROW(top_k_svd(Matrix::Ones(3, 4), 4), DomainError);
  Matrix bad = Matrix::Ones(3, 3);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(top_k_svd(bad, 1), DomainError);
}

TEST(SingularValues, Examples) {
  EXPECT_EQ(singular_values(Matrix::Identity(5, 5), 3), (std::vector<double>{1, 1, 1}));
  const auto ideal = make_planted_memberships(20, 2, 3);
  const Matrix omega = ideal.weights() * (Matrix(2, 2) << 1, 0.2, 0.3, 0.8).finished() *
                       make_planted_memberships(15, 2, 4).weights().transpose();
  const auto s = singular_values(omega, 5);
  for (std::size_t t = 2; t < 5; ++t) EXPECT_LE(s[t], 1e-10 * s[0]);
  EXPECT_THROW(singular_values(omega, 16), DomainError);
}

TEST(SingularValues, AgreeWithTopKSvd) {
  gen::Gen g(27);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(g, g.integer(2, 40), g.integer(2, 40));
    const Index k = std::min(a.rows(), a.cols());
    const auto s = singular_values(a, k);
    const auto svd = top_k_svd(a, k);
    for (Index t = 0; t < k; ++t) EXPECT_EQ(s[static_cast<std::size_t>(t)], svd.singular_values(t));
  }
}

TEST(Eigengap, Examples) {
  EXPECT_EQ(estimate_k_eigengap({10, 9.5, 2, 1.8, 1.7}), 2);
  EXPECT_EQ(estimate_k_eigengap({5, 4.9, 4.8, 4.7, 1.0}, EigengapMethod::Difference), 4);
  EXPECT_EQ(estimate_k_eigengap({5, 4.9, 4.8, 4.7, 1.0}, EigengapMethod::Ratio), 4);
}

TEST(Eigengap, TiesGoToSmallerK) {
  EXPECT_EQ(estimate_k_eigengap({3, 2, 1}), 1);
  EXPECT_EQ(estimate_k_eigengap({4, 2, 1}, EigengapMethod::Ratio), 1);
}

TEST(Eigengap, ZeroTailUsesFloor) {
  EXPECT_EQ(estimate_k_eigengap({2, 1, 0, 0}, EigengapMethod::Ratio), 2);
}

TEST(Eigengap, RejectsBadInput) {
  EXPECT_THROW(estimate_k_eigengap({1.0}), DomainError);
  EXPECT_THROW(estimate_k_eigengap({0.0, 0.0}), DomainError);
  EXPECT_THROW(estimate_k_eigengap({1.0, 2.0}), DomainError);
}

TEST(Eigengap, RecoversKOnExactRankSpectra) {
  gen::Gen g(28);
  gen::SpecOptions opt;
  opt.n_min = 40;
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = gen::spec(g, opt);
    const Matrix omega = build_omega(s).omega;
    const auto sig = singular_values(omega, 8);
    EXPECT_EQ(estimate_k_eigengap(sig, EigengapMethod::Ratio), s.K());
  }
}

TEST(TopKSvd, NearlyRankDeficientInputStaysOrthonormal) {
  gen::Gen g(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = gen::spec(g);
    Matrix omega = build_omega(s).omega;
    const double scale = omega.cwiseAbs().maxCoeff() * std::pow(10.0, -static_cast<double>(g.integer(6, 14)));
    Matrix noise(omega.rows(), omega.cols());
    for (Index i = 0; i < noise.size(); ++i) noise(i) = scale * g.uniform(-1, 1);
    omega += noise;
    const Index k = std::min<Index>(s.K() + 3, std::min(omega.rows(), omega.cols()));
    const auto svd = top_k_svd(omega, k);
    EXPECT_LE(orthogonality_defect(svd.left), 1e-10);
    EXPECT_LE(orthogonality_defect(svd.right), 1e-10);
    EXPECT_LE((svd.reconstruct() - omega).norm(), noise.norm() + 1e-12 * omega.norm());
  }
}

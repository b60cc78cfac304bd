#include "rankr/linalg.hpp"
#include "rankr/catalog.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace rankr;
using rankr::testing::cod_pinv;
using rankr::testing::gapped_spectrum;
using rankr::testing::real_mat;
using rankr::testing::real_vec;
using rankr::testing::with_spectrum;

namespace {

double orth_defect(const Matrix& q) {
  return (q.adjoint() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

}  // namespace

TEST(FullSvd, Diagonal) {
  const Svd s = full_svd(real_mat({{3, 0}, {0, 1}}));
  EXPECT_NEAR(s.sigma(0), 3.0, 1e-15);
  EXPECT_NEAR(s.sigma(1), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.u(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.v(1, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.u(1, 0)), 0.0, 1e-15);
}

TEST(FullSvd, ZeroMatrix) {
  const Svd s = full_svd(Matrix::Zero(2, 2));
  EXPECT_EQ(s.sigma(0), 0.0);
  EXPECT_EQ(s.sigma(1), 0.0);
}

TEST(FullSvd, RandomReconstruction) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.gaussian_matrix(5, 3, trial % 2 == 0);
    const Svd s = full_svd(a);
    const Matrix back = s.u * s.sigma.cast<Scalar>().asDiagonal() * s.v.adjoint();
    EXPECT_LE((back - a).norm(), 1e-12 * s.sigma(0) * 5);
    for (Eigen::Index i = 1; i < s.sigma.size(); ++i) EXPECT_GE(s.sigma(i - 1), s.sigma(i));
    EXPECT_LE(orth_defect(s.u), 1e-12);
    EXPECT_LE(orth_defect(s.v), 1e-12);
  }
}

TEST(FullSvd, FullVIsUnitary) {
  Rng rng(12);
  const Matrix a = rng.gaussian_matrix(2, 5, true);
  const Svd s = full_svd(a, true);
  ASSERT_EQ(s.v.cols(), 5);
  EXPECT_LE(orth_defect(s.v), 1e-12);
}

TEST(FullSvd, RejectsNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    full_svd(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(TruncatedSvd, DiagonalRankOne) {
  const auto [t, g] = truncated_svd(real_mat({{3, 0}, {0, 1}}), 1);
  ASSERT_EQ(t.sigma.size(), 1);
  EXPECT_NEAR(t.sigma(0), 3.0, 1e-15);
  EXPECT_NEAR(std::abs(t.u(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(t.v(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(g.ratio, 3.0, 1e-14);
}

TEST(TruncatedSvd, FullRankIdentityHasInfiniteGap) {
  const auto [t, g] = truncated_svd(Matrix::Identity(2, 2), 2);
  EXPECT_LE((t.reconstruct() - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(g.sigma_next, 0.0);
  EXPECT_TRUE(std::isinf(g.ratio));
}

TEST(TruncatedSvd, MatchesFullSvdOracle) {
  Rng rng(21);
  const Matrix a = rng.gaussian_matrix(6, 4, true);
  const Svd s = full_svd(a);
  Matrix oracle = Matrix::Zero(6, 4);
  for (int j = 0; j < 2; ++j) oracle += s.sigma(j) * s.u.col(j) * s.v.col(j).adjoint();
  const auto t = truncated_svd(a, 2).first;
  EXPECT_LE((t.reconstruct() - oracle).norm(), 1e-12 * s.sigma(0));
  EXPECT_LE(orth_defect(t.u), 1e-12);
  EXPECT_LE(orth_defect(t.v), 1e-12);
}

TEST(TruncatedSvd, RankOutOfRange) {
  for (std::size_t r : {0u, 3u}) {
    try {
      truncated_svd(Matrix::Identity(2, 2), r);
      FAIL() << r;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidRank);
    }
  }
}

TEST(PinvApply, Examples) {
  const Vector z1 = rankr_pinv_apply_svd(real_mat({{4, 0}, {0, 2}}), 1, real_vec({8, 2}));
  EXPECT_LE((z1 - real_vec({2, 0})).norm(), 1e-15);
  const Vector z2 = rankr_pinv_apply_svd(real_mat({{1, 1}}), 1, real_vec({2}));
  EXPECT_LE((z2 - real_vec({1, 1})).norm(), 1e-15);
}

TEST(PinvApply, MatchesExplicitPseudoinverse) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rng.gaussian_matrix(5, 4, true);
    const Vector b = rng.random_vector(5, true);
    const Matrix ar = truncated_svd(a, 3).first.reconstruct();
    const Vector oracle = cod_pinv(ar) * b;
    EXPECT_LE((rankr_pinv_apply_svd(a, 3, b) - oracle).norm(), 1e-10 * (1 + oracle.norm()));
  }
}

TEST(PinvApply, ZeroSigmaRejected) {
  try {
    rankr_pinv_apply_svd(real_mat({{1, 0}, {0, 0}}), 2, real_vec({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficientProjection);
  }
}

TEST(LemmaSolve, Examples) {
  Matrix n(2, 1);
  n << 0, 1;
  EXPECT_LE((lemma_mns_solve(real_mat({{4, 0}, {0, 2}}), n, 1.0, real_vec({8, 2})) - real_vec({2, 0})).norm(), 1e-14);
  n << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  EXPECT_LE((lemma_mns_solve(real_mat({{1, 1}}), n, 1.0, real_vec({2})) - real_vec({1, 1})).norm(), 1e-14);
}

TEST(LemmaSolve, MatchesSvdSolveForSeveralMu) {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = rng.gaussian_matrix(5, 5, true);
    const Vector b = rng.random_vector(5, true);
    const Matrix n = full_svd(a, true).v.rightCols(2);
    const Vector ref = rankr_pinv_apply_svd(a, 3, b);
    for (double mu : {0.1, 1.0, 10.0}) {
      EXPECT_LE((lemma_mns_solve(a, n, mu, b) - ref).norm(), 1e-10 * (ref.norm() + b.norm())) << mu;
    }
  }
}

TEST(LemmaSolve, NonOrthonormalBasis) {
  Matrix n(2, 1);
  n << 1, 1;
  try {
    lemma_mns_solve(real_mat({{1, 1}}), n, 1.0, real_vec({2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidBasis);
  }
}

TEST(NumericalRank, Examples) {
  EXPECT_EQ(numerical_rank(real_mat({{1, 0}, {0, 1e-12}}), 1e-8).first, 1u);
  EXPECT_EQ(numerical_rank(Matrix::Identity(3, 3), 1e-8).first, 3u);
  const CatalogEntry c = make_circle();
  EXPECT_EQ(numerical_rank(c.system.jacobian(real_vec({0.6, 0.8})), 1e-8).first, 1u);
}

TEST(NumericalRank, GapReport) {
  const auto [r, g] = numerical_rank(real_mat({{5, 0, 0}, {0, 2, 0}, {0, 0, 1e-9}}), 1e-6);
  EXPECT_EQ(r, 2u);
  EXPECT_NEAR(g.sigma_r, 2.0, 1e-15);
  EXPECT_NEAR(g.sigma_next, 1e-9, 1e-22);
  EXPECT_NEAR(g.ratio, 2e9, 1.0);
}

TEST(NumericalRank, ZeroMatrixAndNegativeTheta) {
  EXPECT_EQ(numerical_rank(Matrix::Zero(3, 2), 0.0).first, 0u);
  EXPECT_THROW(numerical_rank(Matrix::Identity(2, 2), -1.0), Error);
}

TEST(NumericalRank, NonincreasingInTheta) {
  Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const RealVector s = gapped_spectrum(rng, 6, 3, 1e4);
    const Matrix a = with_spectrum(rng, 6, 8, s, true);
    std::size_t prev = 7;
    for (double theta = 1e-14; theta < 10.0; theta *= 3.0) {
      const std::size_t r = numerical_rank(a, theta).first;
      EXPECT_LE(r, prev);
      prev = r;
    }
  }
}

TEST(NullspaceBasis, Examples) {
  const Matrix n = nullspace_basis(real_mat({{1, 1}}), 1);
  ASSERT_EQ(n.cols(), 1);
  EXPECT_NEAR(std::abs(n(0, 0)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(n(0, 0) + n(1, 0)), 0.0, 1e-14);
  EXPECT_EQ(nullspace_basis(Matrix::Identity(2, 2), 0).cols(), 0);
}

TEST(NullspaceBasis, RandomWide) {
  Rng rng(61);
  const Matrix a = rng.gaussian_matrix(4, 6, true);
  const Matrix n = nullspace_basis(a, 2);
  const RealVector s = full_svd(a).sigma;
  EXPECT_LE(orth_defect(n), 1e-12);
  // Rank 4 of 6 columns: both trailing directions are exact null vectors.
  EXPECT_LE((a * n).norm(), 1e-12 * s(0));
}

TEST(NullspaceBasis, TooManyColumns) {
  try {
    nullspace_basis(Matrix::Identity(2, 2), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(RankRProperties, MoorePenroseAndProjections) {
  Rng rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.uniform() * 8);
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform() * 8);
    const Eigen::Index k = std::min(m, n);
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(k));
    const Matrix a = with_spectrum(rng, m, n, gapped_spectrum(rng, k, std::min(r, k), 100.0), trial % 2 == 0);
    const auto [t, g] = truncated_svd(a, static_cast<std::size_t>(std::min(r, k)));
    const Matrix ar = t.reconstruct();
    const Matrix b = cod_pinv(ar);
    const double tol = 1e-10 * t.sigma(0);
    EXPECT_LE((ar * b * ar - ar).norm(), tol);
    EXPECT_LE((b * ar * b - b).norm(), 1e-10 * b.norm());
    EXPECT_LE(((ar * b).adjoint() - ar * b).norm(), 1e-10);
    EXPECT_LE(((b * ar).adjoint() - b * ar).norm(), 1e-10);
    EXPECT_LE((a * b - t.u * t.u.adjoint()).norm(), 1e-10);
    EXPECT_LE((b * a - t.v * t.v.adjoint()).norm(), 1e-10);
  }
}

TEST(RankRProperties, SolutionOrthogonality) {
  Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = with_spectrum(rng, 6, 5, gapped_spectrum(rng, 5, 3, 1e3), true);
    const Vector b = rng.random_vector(6, true);
    const auto t = truncated_svd(a, 3).first;
    const Vector z = rankr_pinv_apply_svd(a, 3, b);
    const Vector res = t.reconstruct() * z - b;
    EXPECT_LE((t.u.adjoint() * res).norm(), 1e-10 * b.norm());
    const Matrix trailing = full_svd(a, true).v.rightCols(2);
    EXPECT_LE((trailing.adjoint() * z).norm(), 1e-10 * z.norm());
  }
}

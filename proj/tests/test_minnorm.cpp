#include "rankr/minnorm.hpp"
#include "rankr/linalg.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rankr;
using rankr::testing::gapped_spectrum;
using rankr::testing::real_mat;
using rankr::testing::real_vec;
using rankr::testing::with_spectrum;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST(TriangularFactor, PrependRowKeepsUpperShape) {
  Rng rng(1);
  Matrix r = rng.gaussian_matrix(4, 4, true).triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i) r(i, i) += 3.0;
  TriangularFactor t(r, Triangle::Upper);
  const RowVector row = rng.gaussian_matrix(1, 4, true);
  Vector rhs = rng.random_vector(4, true);
  const Scalar beta(0.3, -0.2);

  Matrix stacked(5, 4);
  stacked << row, r;
  Vector srhs(5);
  srhs << beta, rhs;

  t.prepend_row(row, beta, rhs);
  const Matrix& nt = t.matrix();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) EXPECT_LE(std::abs(nt(i, j)), 1e-14);
  // Same normal equations, so same least-squares solution.
  const Vector ls = stacked.colPivHouseholderQr().solve(srhs);
  EXPECT_LE((t.solve(rhs) - ls).norm(), 1e-10 * ls.norm());
  EXPECT_LE((nt.adjoint() * nt - stacked.adjoint() * stacked).norm(), 1e-12 * stacked.squaredNorm());
}

TEST(TriangularFactor, PrependRowKeepsLowerShape) {
  Rng rng(2);
  Matrix l = rng.gaussian_matrix(3, 3, false).triangularView<Eigen::Lower>();
  for (int i = 0; i < 3; ++i) l(i, i) += 2.0;
  TriangularFactor t(l, Triangle::Lower);
  const RowVector row = rng.gaussian_matrix(1, 3, false);
  Vector rhs = rng.random_vector(3, false);
  Matrix stacked(4, 3);
  stacked << row, l;
  t.prepend_row(row, 1.0, rhs);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) EXPECT_LE(std::abs(t.matrix()(i, j)), 1e-14);
  EXPECT_LE((t.matrix().adjoint() * t.matrix() - stacked.adjoint() * stacked).norm(), 1e-12 * stacked.squaredNorm());
}

TEST(TriangularFactor, SolveRejectsTinyPivot) {
  TriangularFactor t(real_mat({{1, 2}, {0, 1e-15}}), Triangle::Upper);
  EXPECT_EQ(kind_of([&] { t.solve(real_vec({1, 1})); }), ErrorKind::IllConditionedTriangular);
  EXPECT_TRUE(t.solve_guarded(real_vec({1, 1})).allFinite());
}

TEST(KernelRefine, ExactKernelDirection) {
  Vector y0 = real_vec({0.1, 0.995});
  y0.normalize();
  const Vector u = kernel_refine(real_mat({{1, 0}, {0, 0}}), y0, 1.0);
  EXPECT_NEAR(std::abs(u(1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(0)), 0.0, 1e-12);
}

TEST(KernelRefine, NearlySingularDiagonal) {
  Rng rng(3);
  const Matrix g = real_mat({{1, 0}, {0, 1e-13}});
  for (int trial = 0; trial < 10; ++trial) {
    const Vector y0 = rng.random_vector(2, true).normalized();
    const Vector u = kernel_refine(g, y0, 1.0);
    EXPECT_NEAR(u.norm(), 1.0, 1e-12);
    EXPECT_LE((g * u).norm(), 1e-10);
  }
}

TEST(KernelRefine, ExactNullVectorStaysPut) {
  const Vector y0 = real_vec({0, 1});
  const Vector v = kernel_refine(real_mat({{2, 0}, {0, 0}}), y0, 2.0);
  EXPECT_LE((v - y0).norm(), 1e-14);
}

TEST(KernelRefine, RandomTriangularSmallestSingularVector) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    RealVector s(5);
    s << 3.0, 2.0, 1.0, 0.5, 1e-11;
    const Matrix a = with_spectrum(rng, 5, 5, s, true);
    const TriangularFactor t = make_triangular(a);
    const Vector u = kernel_refine(t, rng.random_vector(5, true).normalized(), inf_norm(a));
    EXPECT_LE((t.matrix() * u).norm(), 1e-10);
  }
}

TEST(FullRow, Examples) {
  EXPECT_LE((minnorm_solve_full_row(real_mat({{1, 1}}), real_vec({2})) - real_vec({1, 1})).norm(), 1e-14);
  EXPECT_LE((minnorm_solve_full_row(real_mat({{1, 0, 0}, {0, 1, 0}}), real_vec({1, 2})) - real_vec({1, 2, 0})).norm(),
            1e-14);
}

TEST(FullRow, MatchesSvdSolve) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.gaussian_matrix(3, 6, true);
    const Vector b = rng.random_vector(3, true);
    const Vector ref = rankr_pinv_apply_svd(a, 3, b);
    EXPECT_LE((minnorm_solve_full_row(a, b) - ref).norm(), 1e-10 * (ref.norm() + 1));
  }
}

TEST(FullRow, RankDeficient) {
  EXPECT_EQ(kind_of([] { minnorm_solve_full_row(real_mat({{1, 1, 0}, {2, 2, 0}}), real_vec({1, 2})); }),
            ErrorKind::IllConditionedTriangular);
}

TEST(Wide, Examples) {
  const Matrix a = real_mat({{1, 0, 0}, {1, 0, 0}});
  EXPECT_LE((rankr_solve_wide(a, 1, real_vec({1, 1})) - real_vec({1, 0, 0})).norm(), 1e-12);
  EXPECT_LE(rankr_solve_wide(a, 1, real_vec({1, -1})).norm(), 1e-12);
}

TEST(Wide, EngineeredSpectrum) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    RealVector s(4);
    s << 1.0, 0.5, 0.2, 1e-12;
    const Matrix a = with_spectrum(rng, 4, 7, s, true);
    const Vector b = rng.random_vector(4, true);
    const Vector ref = rankr_pinv_apply_svd(a, 3, b);
    RankSolveReport rep;
    const Vector z = rankr_solve_wide(a, 3, b, {}, &rep);
    EXPECT_LE((z - ref).norm(), 1e-9 * (ref.norm() + b.norm()));
    EXPECT_FALSE(rep.gap_warning);
    EXPECT_EQ(rep.kernel.size(), 1u);
  }
}

TEST(Tall, Examples) {
  EXPECT_LE((rankr_solve_tall(real_mat({{1}, {1}}), 1, real_vec({1, 1})) - real_vec({1})).norm(), 1e-14);
  EXPECT_LE((rankr_solve_tall(real_mat({{1, 0}, {0, 0}, {0, 0}}), 1, real_vec({2, 0, 0})) - real_vec({2, 0})).norm(),
            1e-12);
}

TEST(Tall, EngineeredSpectrum) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = with_spectrum(rng, 7, 4, gapped_spectrum(rng, 4, 2, 1e6), true);
    const Vector b = rng.random_vector(7, true);
    const Vector ref = rankr_pinv_apply_svd(a, 2, b);
    EXPECT_LE((rankr_solve_tall(a, 2, b) - ref).norm(), 1e-9 * (ref.norm() + b.norm()));
  }
}

TEST(GapChecks, AmbiguousRank) {
  RealVector s(3);
  s << 1.0, 0.9, 0.8;
  Rng rng(8);
  const Matrix a = with_spectrum(rng, 5, 3, s, false);
  EXPECT_EQ(kind_of([&] { rankr_solve_tall(a, 2, rng.random_vector(5, false)); }), ErrorKind::AmbiguousRank);
}

TEST(GapChecks, NarrowGapWarns) {
  RealVector s(3);
  s << 1.0, 0.5, 0.1;
  Rng rng(9);
  const Matrix a = with_spectrum(rng, 5, 3, s, false);
  RankSolveReport rep;
  const Vector b = rng.random_vector(5, false);
  const Vector z = rankr_solve_tall(a, 2, b, {}, &rep);
  EXPECT_TRUE(rep.gap_warning);
  EXPECT_GE(rep.gap_ratio, 2.0);
  EXPECT_LE((z - rankr_pinv_apply_svd(a, 2, b)).norm(), 1e-9 * (z.norm() + b.norm()));
}

TEST(GapChecks, InvalidShapes) {
  EXPECT_EQ(kind_of([] { rankr_solve_wide(Matrix::Identity(3, 3), 1, real_vec({1, 1, 1})); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { rankr_solve_tall(Matrix::Identity(2, 3), 1, real_vec({1, 1})); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { rankr_solve_wide(Matrix::Identity(2, 3), 2, real_vec({1, 1})); }), ErrorKind::InvalidRank);
  EXPECT_EQ(kind_of([] { rankr_solve_tall(Matrix::Identity(3, 2), 3, real_vec({1, 1, 1})); }), ErrorKind::InvalidRank);
}

TEST(CrossEquivalence, AllShapeClasses) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const bool cx = trial % 2 == 0;
    {
      const Matrix a = with_spectrum(rng, 3, 6, gapped_spectrum(rng, 3, 3, 1e3), cx);
      const Vector b = rng.random_vector(3, cx);
      const Vector ref = rankr_pinv_apply_svd(a, 3, b);
      EXPECT_LE((minnorm_solve_full_row(a, b) - ref).norm(), 1e-9 * (ref.norm() + b.norm()));
    }
    {
      const Matrix a = with_spectrum(rng, 5, 8, gapped_spectrum(rng, 5, 3, 1e3), cx);
      const Vector b = rng.random_vector(5, cx);
      const Vector ref = rankr_pinv_apply_svd(a, 3, b);
      EXPECT_LE((rankr_solve_wide(a, 3, b) - ref).norm(), 1e-9 * (ref.norm() + b.norm()));
    }
    {
      const Matrix a = with_spectrum(rng, 8, 5, gapped_spectrum(rng, 5, 2, 1e3), cx);
      const Vector b = rng.random_vector(8, cx);
      const Vector ref = rankr_pinv_apply_svd(a, 2, b);
      EXPECT_LE((rankr_solve_tall(a, 2, b) - ref).norm(), 1e-9 * (ref.norm() + b.norm()));
      const Matrix n = nullspace_basis(a, 3);
      EXPECT_LE((lemma_mns_solve(a, n, 1.0, b) - ref).norm(), 1e-9 * (ref.norm() + b.norm()));
    }
  }
}

TEST(Determinism, SameSeedSameResult) {
  Rng rng(11);
  const Matrix a = with_spectrum(rng, 5, 8, gapped_spectrum(rng, 5, 2, 1e4), true);
  const Vector b = rng.random_vector(5, true);
  RankSolveOptions o;
  o.kernel.seed = 42;
  const Vector z1 = rankr_solve_wide(a, 2, b, o);
  const Vector z2 = rankr_solve_wide(a, 2, b, o);
  EXPECT_EQ((z1 - z2).norm(), 0.0);
}

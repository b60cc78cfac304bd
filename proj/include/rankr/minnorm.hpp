#pragma once

#include "rankr/core.hpp"

#include <vector>

namespace rankr {

enum class Triangle { Upper, Lower };

// Square triangular factor that accepts new leading rows and restores its
// shape with Givens rotations.
class TriangularFactor {
 public:
  TriangularFactor(Matrix t, Triangle shape);

  std::size_t dim() const { return static_cast<std::size_t>(t_.rows()); }
  Triangle shape() const { return shape_; }
  const Matrix& matrix() const { return t_; }

  // Stacks [row; T] with right-hand side [beta; rhs] and rotates back to a
  // square triangle; rhs receives the rotated leading part.
  void prepend_row(const RowVector& row, Scalar beta, Vector& rhs);

  // T y = rhs. Throws IllConditionedTriangular when a pivot falls below
  // pivot_tol * max|pivot|.
  Vector solve(const Vector& rhs, double pivot_tol = 1e-12) const;

  // Same solve, but tiny pivots are clamped instead of rejected (inverse
  // iteration wants the huge step).
  Vector solve_guarded(const Vector& rhs) const;

  Vector apply(const Vector& y) const { return t_ * y; }

 private:
  Matrix t_;
  Triangle shape_;
};

// Builds a TriangularFactor from a general matrix: triangular input is
// kept, anything else goes through a QR.
TriangularFactor make_triangular(const Matrix& g);

struct KernelRefineOptions {
  double inner_tol = 1e-12;
  int max_inner = 30;
  int retries = 3;
  std::uint64_t seed = 0;
};

// Unit approximation of the smallest right singular vector of G.
Vector kernel_refine(const TriangularFactor& g, const Vector& y0, double tau,
                     const KernelRefineOptions& opts = {});
Vector kernel_refine(const Matrix& g, const Vector& y0, double tau,
                     const KernelRefineOptions& opts = {});

struct RankSolveOptions {
  double min_gap = 10.0;
  double hard_min_gap = 2.0;
  KernelRefineOptions kernel;
};

struct RankSolveReport {
  double sigma_r_estimate = 0.0;
  double sigma_next_estimate = 0.0;
  double gap_ratio = 0.0;
  bool gap_warning = false;
  std::vector<Vector> kernel;  // refined kernel vectors, in discovery order
};

// Full row rank, fewer rows than columns: thin QR of A^H and two triangular
// solves.
Vector minnorm_solve_full_row(const Matrix& a, const Vector& b);

// Rank r < rows < cols.
Vector rankr_solve_wide(const Matrix& a, std::size_t r, const Vector& b,
                        const RankSolveOptions& opts = {}, RankSolveReport* report = nullptr);

// Rank r <= cols <= rows.
Vector rankr_solve_tall(const Matrix& a, std::size_t r, const Vector& b,
                        const RankSolveOptions& opts = {}, RankSolveReport* report = nullptr);

}  // namespace rankr

#pragma once

#include "rankr/core.hpp"

#include <utility>

namespace rankr {

struct Svd {
  Matrix u;          // rows x min(rows, cols)
  RealVector sigma;  // descending
  Matrix v;          // cols x min(rows, cols)
};

// Thin SVD; full_v additionally completes V to a unitary cols x cols matrix.
Svd full_svd(const Matrix& a, bool full_v = false);

struct GapReport {
  double sigma_r = 0.0;
  double sigma_next = 0.0;  // 0 when r == min(rows, cols)
  double ratio = 0.0;       // sigma_r / sigma_next, +inf when sigma_next == 0
};

struct TruncatedSvd {
  std::size_t rank = 0;
  Matrix u;
  RealVector sigma;
  Matrix v;
  Matrix reconstruct() const;
};

std::pair<TruncatedSvd, GapReport> truncated_svd(const Matrix& a, std::size_t r);

// z = A_r^+ b through the truncated SVD.
Vector rankr_pinv_apply_svd(const Matrix& a, std::size_t r, const Vector& b);

// Number of singular values strictly above theta.
std::pair<std::size_t, GapReport> numerical_rank(const Matrix& a, double theta);

// Orthonormal basis of the trailing d right singular vectors (cols x d).
Matrix nullspace_basis(const Matrix& a, std::size_t d);

// (I - N N^H) [mu N^H; A]^+ [0; b], solved with a pivoted QR of the stacked matrix.
Vector lemma_mns_solve(const Matrix& a, const Matrix& n, double mu, const Vector& b);

}  // namespace rankr

#pragma once

#include "rankr/core.hpp"
#include "rankr/newton.hpp"

#include <algorithm>
#include <cmath>

namespace rankr::testing {

inline Matrix random_unitary(Rng& rng, Eigen::Index n, bool complex_entries) {
  Eigen::HouseholderQR<Matrix> qr(rng.gaussian_matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n),
                                                      complex_entries));
  return qr.householderQ() * Matrix::Identity(n, n);
}

// U diag(sigma) V^H with Haar-like U, V; sigma has min(rows, cols) entries.
inline Matrix with_spectrum(Rng& rng, Eigen::Index rows, Eigen::Index cols, const RealVector& sigma,
                            bool complex_entries) {
  const Matrix u = random_unitary(rng, rows, complex_entries);
  const Matrix v = random_unitary(rng, cols, complex_entries);
  Matrix s = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) s(i, i) = sigma(i);
  return u * s * v.adjoint();
}

// Descending spectrum of length k: the leading r values log-uniform in
// [lo, 1] * scale, the rest at least `gap` times smaller than sigma_r.
inline RealVector gapped_spectrum(Rng& rng, Eigen::Index k, Eigen::Index r, double gap, double scale = 1.0,
                                  double lo = 1e-2) {
  RealVector s(k);
  for (Eigen::Index i = 0; i < r; ++i) s(i) = scale * std::pow(10.0, rng.uniform(std::log10(lo), 0.0));
  std::sort(s.data(), s.data() + r, std::greater<double>());
  const double top = r > 0 ? s(r - 1) / gap : scale;
  for (Eigen::Index i = r; i < k; ++i) s(i) = top * std::pow(10.0, rng.uniform(-6.0, 0.0));
  std::sort(s.data() + r, s.data() + k, std::greater<double>());
  return s;
}

inline NonlinearSystem linear_system(const Matrix& a, const Vector& b) {
  NonlinearSystem s;
  s.label = "linear";
  s.num_variables = static_cast<std::size_t>(a.cols());
  s.num_equations = static_cast<std::size_t>(a.rows());
  s.eval = [a, b](const Vector& x) -> Vector { return a * x - b; };
  s.jacobian = [a](const Vector&) -> Matrix { return a; };
  s.hessian_action = [a](const Vector&, const Vector&) -> Matrix { return Matrix::Zero(a.rows(), a.cols()); };
  return s;
}

inline Vector real_vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix real_mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Pseudoinverse from a complete orthogonal decomposition; independent of
// the SVD code paths under test.
inline Matrix cod_pinv(const Matrix& a) { return a.completeOrthogonalDecomposition().pseudoInverse(); }

}  // namespace rankr::testing

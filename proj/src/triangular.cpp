#include "rankr/minnorm.hpp"

#include <cmath>
#include <limits>

namespace rankr {

namespace {

// Complex Givens rotation zeroing b against a:
//   [ c        s ] [a]   [rho]
//   [-conj(s)  c ] [b] = [ 0 ]
struct Givens {
  double c = 1.0;
  Scalar s = 0.0;
  Scalar rho = 0.0;
};

Givens make_givens(Scalar a, Scalar b) {
  Givens g;
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  if (abs_b == 0.0) {
    g.rho = a;
    return g;
  }
  if (abs_a == 0.0) {
    g.c = 0.0;
    g.s = std::conj(b) / abs_b;
    g.rho = abs_b;
    return g;
  }
  const double norm = std::hypot(abs_a, abs_b);
  const Scalar phase = a / abs_a;
  g.c = abs_a / norm;
  g.s = phase * std::conj(b) / norm;
  g.rho = phase * norm;
  return g;
}

bool is_upper(const Matrix& g) {
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = j + 1; i < g.rows(); ++i)
      if (g(i, j) != Scalar(0.0)) return false;
  return true;
}

bool is_lower(const Matrix& g) {
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < j && i < g.rows(); ++i)
      if (g(i, j) != Scalar(0.0)) return false;
  return true;
}

}  // namespace

TriangularFactor::TriangularFactor(Matrix t, Triangle shape) : t_(std::move(t)), shape_(shape) {
  if (t_.rows() != t_.cols()) throw Error(ErrorKind::InvalidInput, "triangular factor must be square");
}

void TriangularFactor::prepend_row(const RowVector& row, Scalar beta, Vector& rhs) {
  const Eigen::Index n = t_.rows();
  if (row.size() != n || rhs.size() != n) throw Error(ErrorKind::InvalidInput, "row length mismatch");
  // The new row rides along as a scratch row that is annihilated one entry
  // at a time against the diagonal of T; the final scratch row is dropped
  // together with its residual right-hand side entry.
  RowVector w = row;
  Scalar wb = beta;
  auto rotate = [&](Eigen::Index i, Eigen::Index col_begin, Eigen::Index col_end) {
    const Givens g = make_givens(t_(i, i), w(i));
    for (Eigen::Index j = col_begin; j < col_end; ++j) {
      const Scalar ti = t_(i, j);
      const Scalar wj = w(j);
      t_(i, j) = g.c * ti + g.s * wj;
      w(j) = -std::conj(g.s) * ti + g.c * wj;
    }
    t_(i, i) = g.rho;
    w(i) = 0.0;
    const Scalar ri = rhs(i);
    rhs(i) = g.c * ri + g.s * wb;
    wb = -std::conj(g.s) * ri + g.c * wb;
  };
  if (shape_ == Triangle::Upper) {
    for (Eigen::Index i = 0; i < n; ++i) rotate(i, i, n);
  } else {
    for (Eigen::Index i = n - 1; i >= 0; --i) rotate(i, 0, i + 1);
  }
}

Vector TriangularFactor::solve(const Vector& rhs, double pivot_tol) const {
  const Eigen::Index n = t_.rows();
  if (rhs.size() != n) throw Error(ErrorKind::InvalidInput, "right-hand side length mismatch");
  if (n == 0) return Vector(0);
  const double dmax = t_.diagonal().cwiseAbs().maxCoeff();
  const double dmin = t_.diagonal().cwiseAbs().minCoeff();
  if (!(dmax > 0.0) || dmin <= pivot_tol * dmax) {
    throw Error(ErrorKind::IllConditionedTriangular, "triangular pivot below threshold");
  }
  if (shape_ == Triangle::Upper) return t_.triangularView<Eigen::Upper>().solve(rhs);
  return t_.triangularView<Eigen::Lower>().solve(rhs);
}

Vector TriangularFactor::solve_guarded(const Vector& rhs) const {
  const Eigen::Index n = t_.rows();
  if (n == 0) return Vector(0);
  const double dmax = t_.diagonal().cwiseAbs().maxCoeff();
  const double floor = std::numeric_limits<double>::epsilon() * (dmax > 0.0 ? dmax : 1.0);
  Matrix t = t_;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(t(i, i)) < floor) t(i, i) = floor;
  }
  if (shape_ == Triangle::Upper) return t.triangularView<Eigen::Upper>().solve(rhs);
  return t.triangularView<Eigen::Lower>().solve(rhs);
}

TriangularFactor make_triangular(const Matrix& g) {
  if (g.rows() == g.cols()) {
    if (is_upper(g)) return TriangularFactor(g, Triangle::Upper);
    if (is_lower(g)) return TriangularFactor(g, Triangle::Lower);
  }
  if (g.rows() < g.cols()) {
    // Pad with zero rows: the smallest singular vector of a wide matrix
    // lives in its kernel.
    Matrix padded = Matrix::Zero(g.cols(), g.cols());
    padded.topRows(g.rows()) = g;
    Eigen::HouseholderQR<Matrix> qr(padded);
    return TriangularFactor(qr.matrixQR().triangularView<Eigen::Upper>(), Triangle::Upper);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix r = qr.matrixQR().topRows(g.cols()).triangularView<Eigen::Upper>();
  return TriangularFactor(r, Triangle::Upper);
}

}  // namespace rankr

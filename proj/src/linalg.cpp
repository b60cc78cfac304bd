#include "rankr/linalg.hpp"

#include <cmath>
#include <limits>

namespace rankr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::InvalidRank: return "invalid rank";
    case ErrorKind::RankDeficientProjection: return "rank-deficient projection";
    case ErrorKind::IllConditionedTriangular: return "ill-conditioned triangular factor";
    case ErrorKind::InnerIterationFailure: return "inner iteration failure";
    case ErrorKind::AmbiguousRank: return "ambiguous rank";
    case ErrorKind::InvalidBasis: return "invalid basis";
    case ErrorKind::NumericBreakdown: return "numeric breakdown";
    case ErrorKind::LayoutMismatch: return "layout mismatch";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::VariableMismatch: return "variable mismatch";
    case ErrorKind::NothingToDeflate: return "nothing to deflate";
    case ErrorKind::UnknownSystem: return "unknown system";
    case ErrorKind::InsufficientSteps: return "insufficient steps";
  }
  return "error";
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller; 1 - u keeps the log argument away from zero.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Scalar Rng::unit_disk() {
  const double r = std::sqrt(uniform());
  const double phi = 2.0 * M_PI * uniform();
  return std::polar(r, phi);
}

Vector Rng::random_vector(std::size_t n, bool complex_entries) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = complex_entries ? unit_disk() : Scalar(uniform(-1.0, 1.0), 0.0);
  }
  return v;
}

Matrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols, bool complex_entries) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal();
      const double im = complex_entries ? normal() : 0.0;
      m(i, j) = Scalar(re, im);
    }
  }
  return m;
}

double inf_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

Svd full_svd(const Matrix& a, bool full_v) {
  if (!a.allFinite()) throw Error(ErrorKind::InvalidInput, "svd: non-finite entries");
  Svd out;
  const Eigen::Index k = std::min(a.rows(), a.cols());
  if (k == 0) {
    out.u = Matrix(a.rows(), 0);
    out.sigma = RealVector(0);
    out.v = full_v ? Matrix(Matrix::Identity(a.cols(), a.cols())) : Matrix(a.cols(), 0);
    return out;
  }
  const unsigned flags = Eigen::ComputeThinU | (full_v ? Eigen::ComputeFullV : Eigen::ComputeThinV);
  Eigen::JacobiSVD<Matrix> svd(a, flags);
  out.u = svd.matrixU();
  out.sigma = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

Matrix TruncatedSvd::reconstruct() const {
  return u * sigma.cast<Scalar>().asDiagonal() * v.adjoint();
}

std::pair<TruncatedSvd, GapReport> truncated_svd(const Matrix& a, std::size_t r) {
  const auto k = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  if (r == 0 || r > k) throw Error(ErrorKind::InvalidRank, "rank must lie in [1, min(rows, cols)]");
  const Svd s = full_svd(a);
  const auto rr = static_cast<Eigen::Index>(r);
  TruncatedSvd t;
  t.rank = r;
  t.u = s.u.leftCols(rr);
  t.sigma = s.sigma.head(rr);
  t.v = s.v.leftCols(rr);
  GapReport g;
  g.sigma_r = r > 0 ? s.sigma(rr - 1) : std::numeric_limits<double>::infinity();
  g.sigma_next = r < k ? s.sigma(rr) : 0.0;
  g.ratio = g.sigma_next > 0.0 ? g.sigma_r / g.sigma_next : std::numeric_limits<double>::infinity();
  return {t, g};
}

Vector rankr_pinv_apply_svd(const Matrix& a, std::size_t r, const Vector& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::InvalidInput, "right-hand side length mismatch");
  if (r == 0) return Vector::Zero(a.cols());
  const auto t = truncated_svd(a, r).first;
  if (!(t.sigma(t.sigma.size() - 1) > 0.0)) {
    throw Error(ErrorKind::RankDeficientProjection, "sigma_r is zero");
  }
  Vector c = t.u.adjoint() * b;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) /= t.sigma(i);
  return t.v * c;
}

std::pair<std::size_t, GapReport> numerical_rank(const Matrix& a, double theta) {
  if (!(theta >= 0.0)) throw Error(ErrorKind::InvalidInput, "threshold must be non-negative");
  const Svd s = full_svd(a);
  std::size_t r = 0;
  while (r < static_cast<std::size_t>(s.sigma.size()) && s.sigma(static_cast<Eigen::Index>(r)) > theta) ++r;
  GapReport g;
  const auto k = static_cast<std::size_t>(s.sigma.size());
  g.sigma_r = r > 0 ? s.sigma(static_cast<Eigen::Index>(r) - 1) : std::numeric_limits<double>::infinity();
  g.sigma_next = r < k ? s.sigma(static_cast<Eigen::Index>(r)) : 0.0;
  g.ratio = g.sigma_next > 0.0 ? g.sigma_r / g.sigma_next : std::numeric_limits<double>::infinity();
  return {r, g};
}

Matrix nullspace_basis(const Matrix& a, std::size_t d) {
  const auto cols = static_cast<std::size_t>(a.cols());
  if (d > cols) throw Error(ErrorKind::InvalidInput, "nullity exceeds column count");
  const Svd s = full_svd(a, true);
  return s.v.rightCols(static_cast<Eigen::Index>(d));
}

Vector lemma_mns_solve(const Matrix& a, const Matrix& n, double mu, const Vector& b) {
  if (n.rows() != a.cols()) throw Error(ErrorKind::InvalidInput, "basis row count must match columns of A");
  if (b.size() != a.rows()) throw Error(ErrorKind::InvalidInput, "right-hand side length mismatch");
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidInput, "mu must be positive");
  const Matrix gram = n.adjoint() * n;
  if ((gram - Matrix::Identity(n.cols(), n.cols())).norm() > 1e-10) {
    throw Error(ErrorKind::InvalidBasis, "basis columns are not orthonormal");
  }
  const Eigen::Index p = n.cols();
  Matrix stacked(p + a.rows(), a.cols());
  stacked.topRows(p) = mu * n.adjoint();
  stacked.bottomRows(a.rows()) = a;
  Vector rhs = Vector::Zero(p + a.rows());
  rhs.tail(a.rows()) = b;
  const Vector y = stacked.completeOrthogonalDecomposition().solve(rhs);
  return y - n * (n.adjoint() * y);
}

}  // namespace rankr

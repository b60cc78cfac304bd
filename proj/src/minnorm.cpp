#include "rankr/minnorm.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rankr {

namespace {

bool is_real(const Matrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

Vector random_unit(Rng& rng, Eigen::Index n, bool complex_entries) {
  Vector y = rng.random_vector(static_cast<std::size_t>(n), complex_entries);
  while (y.norm() == 0.0) y = rng.random_vector(static_cast<std::size_t>(n), complex_entries);
  return y / y.norm();
}

// Orthonormal basis for the span of the given vectors (modified Gram-Schmidt,
// two passes).
Matrix orthonormalize(const std::vector<Vector>& vs, Eigen::Index n) {
  Matrix q(n, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) {
    Vector v = vs[k];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        v -= q.col(jj) * q.col(jj).dot(v);
      }
    }
    q.col(static_cast<Eigen::Index>(k)) = v / v.norm();
  }
  return q;
}

// Shared core of the wide and tall solvers: t is square triangular of
// dimension d, c the right-hand side in its coordinates. Returns the
// minimum-norm solution of the rank-r problem in the same coordinates.
Vector deflated_solve(TriangularFactor t, Vector c, std::size_t r, double tau,
                      const RankSolveOptions& opts, RankSolveReport* report) {
  const Eigen::Index d = static_cast<Eigen::Index>(t.dim());
  const std::size_t p = t.dim() - r;
  const bool complex_entries = !is_real(t.matrix()) || !c.imag().isZero(0.0);
  const TriangularFactor t0 = t;
  Rng rng(opts.kernel.seed);

  std::vector<Vector> kernel;
  kernel.reserve(p);
  for (std::size_t k = 0; k < p; ++k) {
    KernelRefineOptions ko = opts.kernel;
    ko.seed = opts.kernel.seed + 7919 * (k + 1);
    const Vector u = kernel_refine(t, random_unit(rng, d, complex_entries), tau, ko);
    t.prepend_row(2.0 * tau * u.adjoint(), 0.0, c);
    kernel.push_back(u);
  }

  RankSolveReport rep;
  if (p > 0) {
    rep.sigma_next_estimate = (t0.matrix() * kernel.back()).norm();
    KernelRefineOptions ko = opts.kernel;
    ko.seed = opts.kernel.seed + 104729;
    const Vector v = kernel_refine(t, random_unit(rng, d, complex_entries), tau, ko);
    rep.sigma_r_estimate = (t.matrix() * v).norm();
    rep.gap_ratio = rep.sigma_next_estimate > 0.0 ? rep.sigma_r_estimate / rep.sigma_next_estimate
                                                  : std::numeric_limits<double>::infinity();
    if (rep.gap_ratio < opts.hard_min_gap) {
      throw Error(ErrorKind::AmbiguousRank,
                  "no usable gap between sigma_r and sigma_{r+1} (ratio " + std::to_string(rep.gap_ratio) + ")");
    }
    rep.gap_warning = rep.gap_ratio < opts.min_gap;
  } else {
    rep.sigma_next_estimate = 0.0;
    rep.gap_ratio = std::numeric_limits<double>::infinity();
  }

  Vector y = t.solve(c, 1e-14);
  if (!kernel.empty()) {
    const Matrix q = orthonormalize(kernel, d);
    y -= q * (q.adjoint() * y);
  }
  rep.kernel = std::move(kernel);
  if (report) *report = std::move(rep);
  return y;
}

void check_inputs(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::InvalidInput, "right-hand side length mismatch");
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorKind::NumericBreakdown, "non-finite input");
}

}  // namespace

Vector kernel_refine(const TriangularFactor& g, const Vector& y0, double tau, const KernelRefineOptions& opts) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.dim());
  if (y0.size() != n) throw Error(ErrorKind::InvalidInput, "start vector length mismatch");
  if (n == 0) return Vector(0);
  if (!(tau > 0.0)) {
    if (tau == 0.0 && g.matrix().isZero(0.0) && y0.norm() > 0.0) return y0 / y0.norm();
    throw Error(ErrorKind::InvalidInput, "scaling must be positive");
  }
  const bool complex_entries = !is_real(g.matrix()) || !y0.imag().isZero(0.0);
  Rng rng(opts.seed);

  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    Vector y = attempt == 0 && y0.norm() > 0.0 ? Vector(y0 / y0.norm()) : random_unit(rng, n, complex_entries);
    std::vector<double> res;
    res.reserve(static_cast<std::size_t>(opts.max_inner) + 1);
    res.push_back(g.apply(y).norm() / y.norm());
    bool failed = false;
    for (int j = 0; j < opts.max_inner; ++j) {
      // Gauss-Newton on (tau (y^H y - 1), G y) = 0.
      TriangularFactor stacked = g;
      Vector rhs = g.apply(y);
      stacked.prepend_row(2.0 * tau * y.adjoint(), tau * (y.squaredNorm() - 1.0), rhs);
      const Vector step = stacked.solve_guarded(rhs);
      if (!step.allFinite()) {
        failed = true;
        break;
      }
      y -= step;
      const double ny = y.norm();
      if (!(ny > 0.0) || !std::isfinite(ny)) {
        failed = true;
        break;
      }
      const double r = g.apply(y).norm() / ny;
      res.push_back(r);
      if (step.norm() <= opts.inner_tol || r <= opts.inner_tol * tau) return y / ny;
    }
    if (failed) continue;
    // Within a cluster of small singular values inverse iteration keeps
    // rotating without settling; once the residual has stopped decreasing
    // the iterate already lies in the trailing subspace.
    const std::size_t last = res.size() - 1;
    if (last >= 4) {
      const double before = res[last - 4];
      if (res[last] <= before * (1.0 + 1e-6) + 1e-15 * tau) return y / y.norm();
    }
  }
  throw Error(ErrorKind::InnerIterationFailure, "kernel refinement did not converge");
}

Vector kernel_refine(const Matrix& g, const Vector& y0, double tau, const KernelRefineOptions& opts) {
  if (!g.allFinite()) throw Error(ErrorKind::NumericBreakdown, "non-finite input");
  return kernel_refine(make_triangular(g), y0, tau, opts);
}

Vector minnorm_solve_full_row(const Matrix& a, const Vector& b) {
  check_inputs(a, b);
  if (!(a.rows() < a.cols())) throw Error(ErrorKind::InvalidInput, "expected fewer rows than columns");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Eigen::HouseholderQR<Matrix> qr(a.adjoint());
  const Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const Matrix q = qr.householderQ() * Matrix::Identity(n, m);
  TriangularFactor rh(r.adjoint(), Triangle::Lower);
  const Vector y = rh.solve(b, 1e-12);
  return q * y;
}

Vector rankr_solve_wide(const Matrix& a, std::size_t r, const Vector& b, const RankSolveOptions& opts,
                        RankSolveReport* report) {
  check_inputs(a, b);
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  if (!(m < n)) throw Error(ErrorKind::InvalidInput, "expected fewer rows than columns");
  if (!(r < m)) throw Error(ErrorKind::InvalidRank, "rank must be below the row count");
  if (r == 0) {
    if (report) *report = RankSolveReport{};
    return Vector::Zero(a.cols());
  }
  const Eigen::Index mm = a.rows();
  Eigen::HouseholderQR<Matrix> qr(a.adjoint());
  const Matrix r0 = qr.matrixQR().topRows(mm).triangularView<Eigen::Upper>();
  const Matrix q0 = qr.householderQ() * Matrix::Identity(a.cols(), mm);
  const Vector y = deflated_solve(TriangularFactor(r0.adjoint(), Triangle::Lower), b, r, inf_norm(a), opts, report);
  return q0 * y;
}

Vector rankr_solve_tall(const Matrix& a, std::size_t r, const Vector& b, const RankSolveOptions& opts,
                        RankSolveReport* report) {
  check_inputs(a, b);
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  if (!(n <= m)) throw Error(ErrorKind::InvalidInput, "expected at least as many rows as columns");
  if (!(r <= n)) throw Error(ErrorKind::InvalidRank, "rank exceeds the column count");
  if (r == 0) {
    if (report) *report = RankSolveReport{};
    return Vector::Zero(a.cols());
  }
  const Eigen::Index nn = a.cols();
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix r0 = qr.matrixQR().topRows(nn).triangularView<Eigen::Upper>();
  const Matrix q0 = qr.householderQ() * Matrix::Identity(a.rows(), nn);
  const Vector c = q0.adjoint() * b;
  return deflated_solve(TriangularFactor(r0, Triangle::Upper), c, r, inf_norm(a), opts, report);
}

}  // namespace rankr

#include "rankr/newton.hpp"

#include "rankr/linalg.hpp"
#include "rankr/minnorm.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rankr {

const char* to_string(ConvergenceStatus s) {
  switch (s) {
    case ConvergenceStatus::ZeroFound: return "ZeroFound";
    case ConvergenceStatus::StationaryPoint: return "StationaryPoint";
    case ConvergenceStatus::MaxIterations: return "MaxIterations";
    case ConvergenceStatus::Diverged: return "Diverged";
  }
  return "unknown";
}

std::vector<double> IterationTrace::shifts() const {
  std::vector<double> out;
  for (const auto& s : steps)
    if (s.shift) out.push_back(*s.shift);
  return out;
}

namespace {

void check_system(const NonlinearSystem& sys, const Vector& x0) {
  if (!sys.eval || !sys.jacobian) throw Error(ErrorKind::InvalidInput, "system lacks eval or jacobian");
  if (static_cast<std::size_t>(x0.size()) != sys.num_variables) {
    throw Error(ErrorKind::InvalidInput, "starting point has " + std::to_string(x0.size()) +
                                             " entries, system has " + std::to_string(sys.num_variables) +
                                             " variables");
  }
}

Vector checked_eval(const NonlinearSystem& sys, const Vector& x, std::size_t k) {
  Vector f = sys.eval(x);
  if (static_cast<std::size_t>(f.size()) != sys.num_equations) {
    throw IterationError(ErrorKind::InvalidInput, "residual has wrong length", k);
  }
  if (!f.allFinite()) throw IterationError(ErrorKind::NumericBreakdown, "non-finite residual at step " + std::to_string(k), k);
  return f;
}

Matrix checked_jacobian(const NonlinearSystem& sys, const Vector& x, std::size_t k) {
  Matrix j = sys.jacobian(x);
  if (static_cast<std::size_t>(j.rows()) != sys.num_equations ||
      static_cast<std::size_t>(j.cols()) != sys.num_variables) {
    throw IterationError(ErrorKind::InvalidInput, "jacobian has wrong shape", k);
  }
  if (!j.allFinite()) throw IterationError(ErrorKind::NumericBreakdown, "non-finite jacobian at step " + std::to_string(k), k);
  return j;
}

std::size_t choose_rank(const Matrix& j0, const RankChoice& choice) {
  const auto kmax = static_cast<std::size_t>(std::min(j0.rows(), j0.cols()));
  if (choice.fixed) {
    if (*choice.fixed > kmax) throw Error(ErrorKind::InvalidRank, "rank exceeds min(equations, variables)");
    return *choice.fixed;
  }
  if (!(choice.relative_theta > 0.0)) throw Error(ErrorKind::InvalidInput, "rank threshold must be positive");
  const Svd s = full_svd(j0);
  if (s.sigma.size() == 0 || s.sigma(0) == 0.0) return 0;
  return numerical_rank(j0, choice.relative_theta * s.sigma(0)).first;
}

Vector rank_step(const Matrix& j, std::size_t r, const Vector& f, const NewtonOptions& opts, std::size_t k,
                 bool& warn) {
  if (opts.solver == SolverChoice::Svd || r == 0) return rankr_pinv_apply_svd(j, r, f);
  const auto rows = static_cast<std::size_t>(j.rows());
  const auto cols = static_cast<std::size_t>(j.cols());
  RankSolveOptions ro;
  ro.kernel.seed = opts.seed + k;
  RankSolveReport rep;
  Vector dx;
  if (rows < cols && r == rows) {
    return minnorm_solve_full_row(j, f);
  } else if (rows < cols) {
    dx = rankr_solve_wide(j, r, f, ro, &rep);
  } else {
    dx = rankr_solve_tall(j, r, f, ro, &rep);
  }
  warn = warn || rep.gap_warning;
  return dx;
}

}  // namespace

IterationTrace newton_rank_r(const NonlinearSystem& sys, const Vector& x0, const NewtonOptions& opts) {
  check_system(sys, x0);
  if (opts.max_iter < 0) throw Error(ErrorKind::InvalidInput, "max_iter must be non-negative");
  if (!x0.allFinite()) throw Error(ErrorKind::InvalidInput, "starting point is not finite");

  IterationTrace trace;
  const double radius = opts.divergence_factor * (1.0 + x0.norm());
  Vector x = x0;
  bool rank_known = false;

  for (std::size_t k = 0;; ++k) {
    const Vector f = checked_eval(sys, x, k);
    const double res = f.norm();
    if (res <= opts.residual_tol) {
      trace.steps.push_back({k, x, res, std::nullopt});
      trace.status = ConvergenceStatus::ZeroFound;
      break;
    }
    if (k == static_cast<std::size_t>(opts.max_iter)) {
      trace.steps.push_back({k, x, res, std::nullopt});
      trace.status = ConvergenceStatus::MaxIterations;
      break;
    }
    const Matrix j = checked_jacobian(sys, x, k);
    if (!rank_known) {
      trace.rank_used = choose_rank(j, opts.rank);
      rank_known = true;
    }
    Vector dx;
    try {
      dx = rank_step(j, trace.rank_used, f, opts, k, trace.gap_warning);
    } catch (const IterationError&) {
      throw;
    } catch (const Error& e) {
      throw IterationError(e.kind(), "step " + std::to_string(k) + ": " + e.what(), k);
    }
    const double shift = dx.norm();
    trace.steps.push_back({k, x, res, shift});
    trace.final_shift = shift;

    const Vector next = x - dx;
    if ((next - x0).norm() > radius || !next.allFinite()) {
      double next_res = std::numeric_limits<double>::infinity();
      if (next.allFinite()) {
        const Vector fn = sys.eval(next);
        if (fn.allFinite()) next_res = fn.norm();
      }
      trace.steps.push_back({k + 1, next, next_res, std::nullopt});
      trace.status = ConvergenceStatus::Diverged;
      break;
    }
    if (shift <= opts.shift_tol * (1.0 + x.norm())) {
      const double next_res = checked_eval(sys, next, k + 1).norm();
      trace.steps.push_back({k + 1, next, next_res, std::nullopt});
      trace.status = next_res <= opts.residual_tol ? ConvergenceStatus::ZeroFound : ConvergenceStatus::StationaryPoint;
      break;
    }
    x = next;
  }

  trace.final_residual = trace.steps.back().residual;
  if (!rank_known) {
    trace.rank_used = choose_rank(checked_jacobian(sys, x0, 0), opts.rank);
  }
  if (trace.status != ConvergenceStatus::Diverged || trace.final_x().allFinite()) {
    try {
      const Matrix jf = sys.jacobian(trace.final_x());
      if (jf.allFinite()) trace.sigma_profile = full_svd(jf).sigma;
    } catch (const Error&) {
    }
  }
  return trace;
}

IterationTrace gauss_newton(const NonlinearSystem& sys, const Vector& x0, NewtonOptions opts) {
  if (sys.num_equations < sys.num_variables) {
    throw Error(ErrorKind::InvalidInput, "Gauss-Newton needs at least as many equations as variables");
  }
  opts.rank = RankChoice::of(sys.num_variables);
  return newton_rank_r(sys, x0, opts);
}

double stationarity_norm(const NonlinearSystem& sys, const Vector& x) {
  return (sys.jacobian(x).adjoint() * sys.eval(x)).norm();
}

Matrix finite_diff_jacobian(const NonlinearSystem& sys, const Vector& x, std::optional<double> h) {
  const double step = h.value_or(std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm()));
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidInput, "step must be positive");
  Matrix j(static_cast<Eigen::Index>(sys.num_equations), x.size());
  Vector xp = x;
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    const Scalar orig = xp(c);
    xp(c) = orig + step;
    const Vector fp = sys.eval(xp);
    xp(c) = orig - step;
    const Vector fm = sys.eval(xp);
    xp(c) = orig;
    if (!fp.allFinite() || !fm.allFinite()) throw Error(ErrorKind::NumericBreakdown, "non-finite value in difference quotient");
    j.col(c) = (fp - fm) / (2.0 * step);
  }
  return j;
}

double condition_number(const NonlinearSystem& sys_x,
                        const std::function<Matrix(const Vector&, const Vector&)>& fy,
                        const Vector& x, const Vector& y, std::size_t r) {
  const Matrix jx = sys_x.jacobian(x);
  const auto kmax = static_cast<std::size_t>(std::min(jx.rows(), jx.cols()));
  if (r == 0 || r > kmax) throw Error(ErrorKind::InvalidRank, "rank must lie in [1, min(rows, cols)]");
  const Svd s = full_svd(jx);
  const double sr = s.sigma(static_cast<Eigen::Index>(r) - 1);
  if (!(sr > 1e-8 * s.sigma(0))) return std::numeric_limits<double>::infinity();
  const Matrix jy = fy(x, y);
  const double ny = jy.size() == 0 ? 0.0 : full_svd(jy).sigma(0);
  return ny / sr;
}

RateReport fit_convergence_order(std::span<const double> shifts) {
  if (shifts.size() < 3) throw Error(ErrorKind::InsufficientSteps, "need at least three shifts to fit an order");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i + 1 < shifts.size(); ++i) {
    if (!(shifts[i] > 0.0) || !(shifts[i + 1] > 0.0)) {
      throw Error(ErrorKind::InvalidInput, "shifts must be positive");
    }
    xs.push_back(std::log(shifts[i]));
    ys.push_back(std::log(shifts[i + 1]));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InsufficientSteps, "shifts do not vary");
  RateReport r;
  r.fitted_order = sxy / sxx;
  r.quadratic = r.fitted_order >= 1.7;
  return r;
}

RateReport classify_quadratic_rate(const IterationTrace& trace) {
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> s;
  for (const auto& st : trace.steps) {
    if (!st.shift) continue;
    if (*st.shift > 10.0 * eps * (1.0 + st.x.norm())) s.push_back(*st.shift);
  }
  if (s.size() < 4) throw Error(ErrorKind::InsufficientSteps, "fewer than four shifts above rounding level");
  return fit_convergence_order(s);
}

}  // namespace rankr

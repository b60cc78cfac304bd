#include "rankr/deflation.hpp"

#include "rankr/linalg.hpp"
#include "rankr/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace rankr {

namespace {

std::vector<std::string> fresh_names(const std::vector<std::string>& taken, std::size_t count) {
  for (std::string prefix = "y";; prefix += "_") {
    std::vector<std::string> names;
    bool clash = false;
    for (std::size_t j = 1; j <= count && !clash; ++j) {
      names.push_back(prefix + std::to_string(j));
      clash = std::find(taken.begin(), taken.end(), names.back()) != taken.end();
    }
    if (!clash) return names;
  }
}

NonlinearSystem expand_polynomial(const PolySystem& f, const Matrix& r, const Vector& e, const std::string& label) {
  const std::size_t m = f.num_variables();
  std::vector<std::string> vars = f.variables();
  const auto ys = fresh_names(vars, m);
  vars.insert(vars.end(), ys.begin(), ys.end());

  std::vector<Polynomial> eqs;
  for (const auto& p : f.equations()) eqs.push_back(p.embed(vars));
  for (const auto& row : f.jacobian()) {
    Polynomial acc(vars);
    for (std::size_t c = 0; c < m; ++c) acc += row[c].embed(vars) * Polynomial::variable(vars, m + c);
    eqs.push_back(std::move(acc));
  }
  for (Eigen::Index k = 0; k < r.rows(); ++k) {
    Polynomial acc = Polynomial::constant(vars, -e(k));
    for (std::size_t c = 0; c < m; ++c)
      acc += Polynomial::variable(vars, m + c) * r(k, static_cast<Eigen::Index>(c));
    eqs.push_back(std::move(acc));
  }
  return as_nonlinear_system(PolySystem(std::move(vars), std::move(eqs)), label);
}

NonlinearSystem expand_generic(const NonlinearSystem& f, const Matrix& r, const Vector& e, const std::string& label) {
  const auto m = static_cast<Eigen::Index>(f.num_variables);
  const auto n = static_cast<Eigen::Index>(f.num_equations);
  const Eigen::Index p = r.rows();
  NonlinearSystem g;
  g.label = label;
  g.num_variables = f.num_variables * 2;
  g.num_equations = f.num_equations * 2 + static_cast<std::size_t>(p);
  g.eval = [f, r, e, m, n, p](const Vector& z) {
    const Vector x = z.head(m);
    const Vector y = z.tail(m);
    Vector out(2 * n + p);
    out.head(n) = f.eval(x);
    out.segment(n, n) = f.jacobian(x) * y;
    out.tail(p) = r * y - e;
    return out;
  };
  g.jacobian = [f, r, m, n, p](const Vector& z) {
    const Vector x = z.head(m);
    const Vector y = z.tail(m);
    const Matrix jx = f.jacobian(x);
    Matrix h;
    if (f.hessian_action) {
      h = f.hessian_action(x, y);
    } else {
      const double step = std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
      h.resize(n, m);
      Vector xp = x;
      for (Eigen::Index c = 0; c < m; ++c) {
        const Scalar orig = xp(c);
        xp(c) = orig + step;
        const Vector up = f.jacobian(xp) * y;
        xp(c) = orig - step;
        const Vector dn = f.jacobian(xp) * y;
        xp(c) = orig;
        h.col(c) = (up - dn) / (2.0 * step);
      }
    }
    Matrix jg = Matrix::Zero(2 * n + p, 2 * m);
    jg.block(0, 0, n, m) = jx;
    jg.block(n, 0, n, m) = h;
    jg.block(n, m, n, m) = jx;
    jg.block(2 * n, m, p, m) = r;
    return jg;
  };
  return g;
}

}  // namespace

Vector DeflatedSystem::initial_y(const Vector& x) const {
  const std::size_t m = base.num_variables;
  const Matrix n = nullspace_basis(base.jacobian(x), m - base_rank);
  const Matrix rn = r_matrix * n;
  Eigen::FullPivLU<Matrix> lu(rn);
  if (!lu.isInvertible()) throw Error(ErrorKind::NumericBreakdown, "R restricted to the kernel is singular");
  return n * lu.solve(e);
}

Vector DeflatedSystem::lift(const Vector& x) const {
  Vector z(x.size() * 2);
  z.head(x.size()) = x;
  z.tail(x.size()) = initial_y(x);
  return z;
}

DeflatedSystem deflate_once(const NonlinearSystem& sys, const Vector& x_hat, std::size_t r, std::uint64_t seed) {
  const std::size_t m = sys.num_variables;
  if (static_cast<std::size_t>(x_hat.size()) != m) throw Error(ErrorKind::InvalidInput, "point length mismatch");
  if (r >= m) throw Error(ErrorKind::NothingToDeflate, "Jacobian rank equals the number of variables");
  if (r > sys.num_equations) throw Error(ErrorKind::InvalidRank, "rank exceeds the number of equations");

  const Matrix j = sys.jacobian(x_hat);
  const bool real = x_hat.imag().isZero(0.0) && j.imag().isZero(0.0);
  Rng rng(seed);
  const auto p = static_cast<Eigen::Index>(m - r);
  Matrix rm(p, static_cast<Eigen::Index>(m));
  for (Eigen::Index c = 0; c < rm.cols(); ++c)
    for (Eigen::Index k = 0; k < p; ++k) rm(k, c) = real ? Scalar(rng.uniform(-1.0, 1.0), 0.0) : rng.unit_disk();

  DeflatedSystem d;
  d.base = sys;
  d.r_matrix = rm;
  d.e = Vector::Zero(p);
  d.e(0) = 1.0;
  d.base_rank = r;
  const std::string label = sys.label.empty() ? "deflated" : sys.label + "+deflated";
  d.expanded = sys.polynomial ? expand_polynomial(*sys.polynomial, rm, d.e, label) : expand_generic(sys, rm, d.e, label);
  return d;
}

DeflationResult deflate_to_semiregular(const NonlinearSystem& sys, const Vector& x0, std::size_t declared_dim,
                                       const DeflationOptions& opts) {
  if (declared_dim > sys.num_variables) throw Error(ErrorKind::InvalidInput, "declared dimension exceeds variable count");
  DeflationResult out;
  NonlinearSystem current = sys;
  Vector start = x0;

  for (std::size_t level = 0;; ++level) {
    const std::size_t m = current.num_variables;
    NewtonOptions nopts = opts.newton;
    nopts.rank = RankChoice::of(m - declared_dim);
    nopts.seed = opts.newton.seed + level;

    DeflationLevel lv;
    try {
      lv.trace = newton_rank_r(current, start, nopts);
    } catch (const Error& e) {
      throw IterationError(e.kind(), "level " + std::to_string(level) + ": " + e.what(), level);
    }
    const Vector xh = lv.trace.final_x();
    if (lv.trace.status == ConvergenceStatus::Diverged) {
      lv.rank = 0;
      lv.nullity = m;
      out.levels.push_back(std::move(lv));
      out.semiregular = false;
      break;
    }

    // The threshold also looks at the start of the level: at a singular
    // limit sigma_1 itself may have collapsed.
    const Svd s_hat = full_svd(current.jacobian(xh));
    const Svd s_start = full_svd(current.jacobian(start));
    const double s1 = std::max(s_hat.sigma.size() ? s_hat.sigma(0) : 0.0, s_start.sigma.size() ? s_start.sigma(0) : 0.0);
    const double theta = opts.probe_relative_theta * s1;
    std::size_t rank = 0;
    while (rank < static_cast<std::size_t>(s_hat.sigma.size()) && s_hat.sigma(static_cast<Eigen::Index>(rank)) > theta)
      ++rank;
    lv.rank = rank;
    lv.nullity = m - rank;
    out.levels.push_back(lv);

    if (lv.nullity == declared_dim) {
      out.semiregular = true;
      break;
    }
    if (lv.nullity < declared_dim || out.depth_used >= opts.max_depth) {
      out.semiregular = false;
      break;
    }
    DeflatedSystem d;
    try {
      d = deflate_once(current, xh, rank, opts.seed + level);
      start = d.lift(xh);
    } catch (const Error& e) {
      throw IterationError(e.kind(), "level " + std::to_string(level) + ": " + e.what(), level);
    }
    current = d.expanded;
    ++out.depth_used;
  }
  out.final_system = current;
  out.final_zero = out.levels.back().trace.final_x();
  return out;
}

}  // namespace rankr

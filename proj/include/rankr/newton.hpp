#pragma once

#include "rankr/core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rankr {

class PolySystem;

// f : C^m -> C^n with its Jacobian (n x m). hessian_action, when present,
// returns d/dx [J(x) y] (n x m). polynomial points at the symbolic source
// for systems built from polynomials.
struct NonlinearSystem {
  std::string label;
  std::size_t num_variables = 0;
  std::size_t num_equations = 0;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;
  std::function<Matrix(const Vector&, const Vector&)> hessian_action;
  std::shared_ptr<const PolySystem> polynomial;
};

enum class SolverChoice { Svd, Auto };

struct RankChoice {
  std::optional<std::size_t> fixed;  // empty: numerical rank of J(x0)
  double relative_theta = 1e-8;

  static RankChoice of(std::size_t r) { return RankChoice{r, 1e-8}; }
  static RankChoice automatic(double theta = 1e-8) { return RankChoice{std::nullopt, theta}; }
};

struct NewtonOptions {
  RankChoice rank = RankChoice::automatic();
  int max_iter = 50;
  double shift_tol = 1e-14;     // relative: shift <= shift_tol * (1 + |x|)
  double residual_tol = 1e-12;
  double divergence_factor = 1e3;
  std::uint64_t seed = 0;
  SolverChoice solver = SolverChoice::Svd;
};

enum class ConvergenceStatus { ZeroFound, StationaryPoint, MaxIterations, Diverged };

const char* to_string(ConvergenceStatus s);

struct IterationStep {
  std::size_t k = 0;
  Vector x;
  double residual = 0.0;
  std::optional<double> shift;  // size of the step leaving x; empty at the last iterate
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  ConvergenceStatus status = ConvergenceStatus::MaxIterations;
  double final_residual = 0.0;
  double final_shift = 0.0;
  std::size_t rank_used = 0;
  RealVector sigma_profile;  // singular values of J at the final iterate
  bool gap_warning = false;  // set when the auto solver saw a narrow gap

  const Vector& final_x() const { return steps.back().x; }
  std::vector<double> shifts() const;
};

IterationTrace newton_rank_r(const NonlinearSystem& sys, const Vector& x0, const NewtonOptions& opts = {});

// Full-column-rank special case (rank = number of variables).
IterationTrace gauss_newton(const NonlinearSystem& sys, const Vector& x0, NewtonOptions opts = {});

// |J(x)^H f(x)|, zero at stationary points of |f|^2.
double stationarity_norm(const NonlinearSystem& sys, const Vector& x);

// Central differences; h defaults to cbrt(eps) * (1 + |x|).
Matrix finite_diff_jacobian(const NonlinearSystem& sys, const Vector& x, std::optional<double> h = std::nullopt);

// kappa = |f_y| / sigma_r(f_x); infinite when sigma_r(f_x) <= 1e-8 sigma_1,
// i.e. the numerical nullity exceeds cols - r.
double condition_number(const NonlinearSystem& sys_x,
                        const std::function<Matrix(const Vector&, const Vector&)>& fy,
                        const Vector& x, const Vector& y, std::size_t r);

struct RateReport {
  bool quadratic = false;
  double fitted_order = 0.0;
};

// Least-squares slope of log s_{k+1} against log s_k.
RateReport fit_convergence_order(std::span<const double> shifts);

// Same fit over the shifts of a trace that sit above rounding level.
RateReport classify_quadratic_rate(const IterationTrace& trace);

}  // namespace rankr

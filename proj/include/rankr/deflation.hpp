#pragma once

#include "rankr/newton.hpp"

#include <vector>

namespace rankr {

// g(x, y) = (f(x), J(x) y, R y - e) with R of size (m - r) x m and e = e_1.
struct DeflatedSystem {
  NonlinearSystem base;
  NonlinearSystem expanded;
  Matrix r_matrix;
  Vector e;
  std::size_t base_rank = 0;

  // y = N (R N)^{-1} e, N spanning the trailing right singular vectors of J(x).
  Vector initial_y(const Vector& x) const;
  // (x, initial_y(x)).
  Vector lift(const Vector& x) const;
};

// Polynomial systems expand symbolically; anything else gets closures with
// the d/dx [J(x) y] block from hessian_action or central differences.
DeflatedSystem deflate_once(const NonlinearSystem& sys, const Vector& x_hat, std::size_t r, std::uint64_t seed = 0);

struct DeflationOptions {
  NewtonOptions newton = [] {
    NewtonOptions o;
    o.residual_tol = 0.0;
    return o;
  }();
  double probe_relative_theta = 1e-8;
  std::size_t max_depth = 3;
  std::uint64_t seed = 0;
};

struct DeflationLevel {
  std::size_t rank = 0;     // numerical rank of the Jacobian at the level's limit
  std::size_t nullity = 0;
  IterationTrace trace;
};

struct DeflationResult {
  std::size_t depth_used = 0;
  bool semiregular = false;
  NonlinearSystem final_system;
  Vector final_zero;
  std::vector<DeflationLevel> levels;

  // Leading coordinates of final_zero, i.e. the point in the original unknowns.
  Vector base_zero(std::size_t num_base_variables) const { return final_zero.head(static_cast<Eigen::Index>(num_base_variables)); }
};

// Alternates rank-(m - d) Newton with a nullity probe and deflates until the
// nullity at the limit equals the declared dimension d.
DeflationResult deflate_to_semiregular(const NonlinearSystem& sys, const Vector& x0, std::size_t declared_dim,
                                       const DeflationOptions& opts = {});

}  // namespace rankr

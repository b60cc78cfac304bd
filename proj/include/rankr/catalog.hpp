#pragma once

#include "rankr/layout.hpp"
#include "rankr/newton.hpp"
#include "rankr/polynomial.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rankr {

enum class Provenance { Published, Derived, Trivial };

struct ExpectedValue {
  std::string what;
  Vector value;
  double tolerance = 0.0;
  Provenance provenance = Provenance::Derived;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  NonlinearSystem system;
  std::size_t recommended_rank = 0;
  Vector reference_x0;
  std::vector<ExpectedValue> expected;
  // Dimension of the zero set through the reference limit; what
  // deflation should be told.
  std::size_t zero_dimension = 0;
  // Runs that are meant to reach rounding level need a residual tolerance
  // below the library default.
  std::optional<double> suggested_residual_tol;
};

CatalogEntry make_circle();
CatalogEntry make_illustrative();
CatalogEntry make_cyclic4(Scalar t = Scalar(0.9999, 0.0));
CatalogEntry make_cyclic4_bifurcation();
CatalogEntry make_ultrasingular_branch();

// d f / d t for the cyclic-4 system, as a 4 x 1 matrix.
Matrix cyclic4_parameter_jacobian(const Vector& x);

struct GcdInstance {
  Polynomial p;
  Polynomial q;
  std::size_t k = 0;
  VariableLayout layout;  // u (degree k), v (deg p - k), w (deg q - k)
  std::size_t rank = 0;   // deg p + deg q - k + 2
  NonlinearSystem system;

  Polynomial gcd_of(const Vector& z) const;
};

// p and q are univariate.
GcdInstance make_gcd(const Polynomial& p, const Polynomial& q, std::size_t k);
CatalogEntry make_gcd_reference();

// min over complex c of |c u - ref| / |ref|.
double scaling_independent_distance(const Vector& u, const Vector& ref);

struct EigenInstance {
  Matrix a;
  std::size_t multiplicity = 0;  // geometric multiplicity m
  std::size_t block = 0;         // smallest Jordan block k
  Matrix s;                      // k x k, ones on the superdiagonal
  VariableLayout layout;         // lambda, X (n x k)
  std::size_t rank = 0;          // (n - m) k + 1
  NonlinearSystem system;
  VariableLayout refine_layout;  // lambda, X, G (n x n)
  std::size_t refine_rank = 0;   // n k
  NonlinearSystem refine_system;

  // (A - lambda I) X - X S as a linear map on vec(X).
  Matrix operator_at(Scalar lambda) const;
  // (lambda0, X0) with X0 the normalized projection of the all-ones matrix
  // onto the kernel of operator_at(lambda0).
  Vector initial_iterate(Scalar lambda0) const;
};

EigenInstance make_eigen(const Matrix& a, std::size_t m, std::size_t k);
Matrix reference_eigen_matrix();
Matrix reference_eigen_perturbation();
CatalogEntry make_eigen_reference();
CatalogEntry make_eigen_reference_perturbed();
CatalogEntry make_eigen_refine();

struct CatalogParams {
  std::optional<Scalar> t;
};

std::vector<std::string> catalog_names();
CatalogEntry catalog_lookup(std::string_view name, const CatalogParams& params = {});

}  // namespace rankr

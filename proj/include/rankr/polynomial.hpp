#pragma once

#include "rankr/core.hpp"
#include "rankr/newton.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace rankr {

using Exponent = std::vector<unsigned>;

// Graded lexicographic: total degree first, then lexicographic on the
// exponent vector.
struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class Polynomial {
 public:
  using TermMap = std::map<Exponent, Scalar, GradedLexLess>;

  explicit Polynomial(std::vector<std::string> vars);

  static Polynomial constant(std::vector<std::string> vars, Scalar c);
  static Polynomial variable(std::vector<std::string> vars, std::size_t index);
  // Ascending coefficients in the single variable `var`.
  static Polynomial univariate(const Vector& coeffs, std::string var);

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t num_variables() const { return vars_.size(); }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  // Adds c * x^e, merging with an existing monomial and dropping zeros.
  void add_term(const Exponent& e, Scalar c);
  Scalar coefficient(const Exponent& e) const;

  Scalar eval(const Vector& x) const;
  Polynomial derivative(std::size_t var) const;

  // Same polynomial over a superset of variables; the existing ones keep
  // their names.
  Polynomial embed(const std::vector<std::string>& vars) const;

  // Ascending graded-lex terms, coefficients at full precision.
  std::string to_string() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(Scalar c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, Scalar c) { return a *= c; }
  friend Polynomial operator*(Scalar c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

 private:
  void require_same_vars(const Polynomial& o) const;

  std::vector<std::string> vars_;
  TermMap terms_;
};

Polynomial pow(const Polynomial& p, unsigned k);

// Grammar: sums of terms separated by + or -, each term a product of
// factors joined by '*' or juxtaposition. A factor is a real literal, the
// imaginary unit i (so 2i or 2*i), a variable, or a parenthesized sum, each
// optionally raised to ^int. A variable named i shadows the unit.
Polynomial parse_poly(std::string_view text, const std::vector<std::string>& vars);

class PolySystem {
 public:
  PolySystem(std::vector<std::string> vars, std::vector<Polynomial> equations);

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<Polynomial>& equations() const { return eqs_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_equations() const { return eqs_.size(); }

  Vector eval(const Vector& x) const;
  // Symbolic Jacobian, row i holding the partials of equation i.
  const std::vector<std::vector<Polynomial>>& jacobian() const;
  Matrix eval_jacobian(const Vector& x) const;
  // d/dx [J(x) y], numerically and as polynomials in x.
  Matrix hessian_action(const Vector& x, const Vector& y) const;
  std::vector<std::vector<Polynomial>> hessian_action(const Vector& y) const;

 private:
  std::vector<std::string> vars_;
  std::vector<Polynomial> eqs_;
  std::vector<std::vector<Polynomial>> jac_;
  std::vector<std::vector<std::vector<Polynomial>>> hess_;  // [eq][col][var]
};

// Parses one equation per entry.
PolySystem parse_system(const std::vector<std::string>& vars, const std::vector<std::string>& equations);

NonlinearSystem as_nonlinear_system(std::shared_ptr<const PolySystem> sys, std::string label = {});
NonlinearSystem as_nonlinear_system(PolySystem sys, std::string label = {});

}  // namespace rankr

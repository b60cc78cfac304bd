#include "rankr/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace rankr {

bool GradedLexLess::operator()(const Exponent& a, const Exponent& b) const {
  const unsigned da = std::accumulate(a.begin(), a.end(), 0u);
  const unsigned db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial::Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {
  std::set<std::string> seen;
  for (const auto& v : vars_) {
    if (v.empty()) throw Error(ErrorKind::InvalidInput, "empty variable name");
    if (!seen.insert(v).second) throw Error(ErrorKind::InvalidInput, "duplicate variable " + v);
  }
}

Polynomial Polynomial::constant(std::vector<std::string> vars, Scalar c) {
  Polynomial p(std::move(vars));
  p.add_term(Exponent(p.vars_.size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(std::vector<std::string> vars, std::size_t index) {
  Polynomial p(std::move(vars));
  if (index >= p.vars_.size()) throw Error(ErrorKind::InvalidInput, "variable index out of range");
  Exponent e(p.vars_.size(), 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::univariate(const Vector& coeffs, std::string var) {
  Polynomial p({std::move(var)});
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) p.add_term({static_cast<unsigned>(i)}, coeffs(i));
  return p;
}

unsigned Polynomial::degree() const {
  if (terms_.empty()) return 0;
  const Exponent& e = terms_.rbegin()->first;
  return std::accumulate(e.begin(), e.end(), 0u);
}

void Polynomial::add_term(const Exponent& e, Scalar c) {
  if (e.size() != vars_.size()) throw Error(ErrorKind::VariableMismatch, "exponent length mismatch");
  if (c == Scalar(0.0)) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == Scalar(0.0)) terms_.erase(it);
}

Scalar Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0.0) : it->second;
}

Scalar Polynomial::eval(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != vars_.size()) {
    throw Error(ErrorKind::VariableMismatch, "point has " + std::to_string(x.size()) + " coordinates, polynomial has " +
                                                 std::to_string(vars_.size()) + " variables");
  }
  Scalar sum = 0.0;
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      for (unsigned k = 0; k < e[j]; ++k) t *= x(static_cast<Eigen::Index>(j));
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= vars_.size()) throw Error(ErrorKind::InvalidInput, "variable index out of range");
  Polynomial d(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent de = e;
    de[var] -= 1;
    d.add_term(de, c * static_cast<double>(e[var]));
  }
  return d;
}

Polynomial Polynomial::embed(const std::vector<std::string>& vars) const {
  std::vector<std::size_t> where(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), vars_[i]);
    if (it == vars.end()) throw Error(ErrorKind::VariableMismatch, "variable " + vars_[i] + " missing from target");
    where[i] = static_cast<std::size_t>(it - vars.begin());
  }
  Polynomial out(vars);
  for (const auto& [e, c] : terms_) {
    Exponent ne(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) ne[where[i]] = e[i];
    out.add_term(ne, c);
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string monomial(const std::vector<std::string>& vars, const Exponent& e) {
  std::string s;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars[j];
    if (e[j] > 1) s += "^" + std::to_string(e[j]);
  }
  return s;
}

void append_term(std::string& out, double coef, const std::string& mono, bool imaginary) {
  const bool neg = std::signbit(coef);
  const double mag = std::abs(coef);
  if (out.empty()) {
    if (neg) out += "-";
  } else {
    out += neg ? " - " : " + ";
  }
  std::string body;
  if (mag != 1.0 || (mono.empty() && !imaginary)) body = fmt(mag);
  if (imaginary) body += body.empty() ? "i" : "*i";
  if (!mono.empty()) body += (body.empty() ? "" : "*") + mono;
  out += body;
}

}  // namespace

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    const std::string mono = monomial(vars_, e);
    if (c.real() != 0.0) append_term(out, c.real(), mono, false);
    if (c.imag() != 0.0) append_term(out, c.imag(), mono, true);
  }
  return out;
}

void Polynomial::require_same_vars(const Polynomial& o) const {
  if (vars_ != o.vars_) throw Error(ErrorKind::VariableMismatch, "polynomials use different variable lists");
}

Polynomial Polynomial::operator-() const {
  Polynomial p(*this);
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  require_same_vars(o);
  Polynomial out(vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponent e(ea.size());
      for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
      out.add_term(e, ca * cb);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(Scalar c) {
  if (c == Scalar(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial out = Polynomial::constant(p.variables(), 1.0);
  for (unsigned i = 0; i < k; ++i) out *= p;
  return out;
}

PolySystem::PolySystem(std::vector<std::string> vars, std::vector<Polynomial> equations)
    : vars_(std::move(vars)), eqs_(std::move(equations)) {
  for (const auto& e : eqs_) {
    if (e.variables() != vars_) throw Error(ErrorKind::VariableMismatch, "equation variables differ from the system");
  }
  const std::size_t m = vars_.size();
  jac_.resize(eqs_.size());
  hess_.resize(eqs_.size());
  for (std::size_t i = 0; i < eqs_.size(); ++i) {
    for (std::size_t c = 0; c < m; ++c) jac_[i].push_back(eqs_[i].derivative(c));
    hess_[i].resize(m);
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t v = 0; v < m; ++v) hess_[i][c].push_back(jac_[i][c].derivative(v));
  }
}

Vector PolySystem::eval(const Vector& x) const {
  Vector f(static_cast<Eigen::Index>(eqs_.size()));
  for (std::size_t i = 0; i < eqs_.size(); ++i) f(static_cast<Eigen::Index>(i)) = eqs_[i].eval(x);
  return f;
}

const std::vector<std::vector<Polynomial>>& PolySystem::jacobian() const { return jac_; }

Matrix PolySystem::eval_jacobian(const Vector& x) const {
  Matrix j(static_cast<Eigen::Index>(eqs_.size()), static_cast<Eigen::Index>(vars_.size()));
  for (std::size_t i = 0; i < eqs_.size(); ++i)
    for (std::size_t c = 0; c < vars_.size(); ++c)
      j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = jac_[i][c].eval(x);
  return j;
}

Matrix PolySystem::hessian_action(const Vector& x, const Vector& y) const {
  const std::size_t m = vars_.size();
  if (static_cast<std::size_t>(y.size()) != m) throw Error(ErrorKind::InvalidInput, "direction length mismatch");
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(eqs_.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < eqs_.size(); ++i)
    for (std::size_t c = 0; c < m; ++c) {
      const Scalar yc = y(static_cast<Eigen::Index>(c));
      if (yc == Scalar(0.0)) continue;
      for (std::size_t v = 0; v < m; ++v)
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(v)) += hess_[i][c][v].eval(x) * yc;
    }
  return h;
}

std::vector<std::vector<Polynomial>> PolySystem::hessian_action(const Vector& y) const {
  const std::size_t m = vars_.size();
  if (static_cast<std::size_t>(y.size()) != m) throw Error(ErrorKind::InvalidInput, "direction length mismatch");
  std::vector<std::vector<Polynomial>> h(eqs_.size(), std::vector<Polynomial>(m, Polynomial(vars_)));
  for (std::size_t i = 0; i < eqs_.size(); ++i)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t v = 0; v < m; ++v) h[i][v] += hess_[i][c][v] * y(static_cast<Eigen::Index>(c));
  return h;
}

PolySystem parse_system(const std::vector<std::string>& vars, const std::vector<std::string>& equations) {
  std::vector<Polynomial> eqs;
  eqs.reserve(equations.size());
  for (const auto& e : equations) eqs.push_back(parse_poly(e, vars));
  return PolySystem(vars, std::move(eqs));
}

NonlinearSystem as_nonlinear_system(std::shared_ptr<const PolySystem> sys, std::string label) {
  NonlinearSystem ns;
  ns.label = std::move(label);
  ns.num_variables = sys->num_variables();
  ns.num_equations = sys->num_equations();
  ns.eval = [sys](const Vector& x) { return sys->eval(x); };
  ns.jacobian = [sys](const Vector& x) { return sys->eval_jacobian(x); };
  ns.hessian_action = [sys](const Vector& x, const Vector& y) { return sys->hessian_action(x, y); };
  ns.polynomial = sys;
  return ns;
}

NonlinearSystem as_nonlinear_system(PolySystem sys, std::string label) {
  return as_nonlinear_system(std::make_shared<const PolySystem>(std::move(sys)), std::move(label));
}

}  // namespace rankr

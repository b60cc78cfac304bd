#include "rankr/catalog.hpp"

#include "rankr/linalg.hpp"

#include <algorithm>
#include <memory>

namespace rankr {

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

NonlinearSystem poly_system(const std::vector<std::string>& vars, const std::vector<std::string>& eqs,
                            const std::string& label) {
  return as_nonlinear_system(parse_system(vars, eqs), label);
}

ExpectedValue published(std::string what, Vector v, double tol) {
  return {std::move(what), std::move(v), tol, Provenance::Published};
}

Vector coefficients(const Polynomial& p) {
  if (p.num_variables() != 1) throw Error(ErrorKind::InvalidInput, "expected a univariate polynomial");
  Vector c = Vector::Zero(static_cast<Eigen::Index>(p.degree()) + 1);
  for (const auto& [e, v] : p.terms()) c(static_cast<Eigen::Index>(e[0])) = v;
  return c;
}

}  // namespace

CatalogEntry make_circle() {
  CatalogEntry e;
  e.name = "circle";
  e.description = "two cubics vanishing on the unit circle and at one extra point";
  e.system = poly_system({"x", "y"}, {"x^3 + x*y^2 - x + 2*x^2 + 2*y^2 - 2", "x^2*y + y^3 - y - 3*x^2 - 3*y^2 + 3"},
                         "circle");
  e.recommended_rank = 1;
  e.reference_x0 = vec({1.8, 0.6});
  e.zero_dimension = 1;
  e.expected.push_back(published("limit from (1.8, 0.6)", vec({0.928428592, 0.3715109}), 1e-6));
  e.expected.push_back(published("limit from (0.4, 0.2)", vec({0.8007609, 0.5989721}), 1e-6));
  return e;
}

CatalogEntry make_illustrative() {
  CatalogEntry e;
  e.name = "illustrative";
  e.description = "zero sets of dimension 0, 1 and 2 meeting near (1,1,1)";
  const std::string s = "(x^2 + y^2 + z^2 - 1)";
  e.system = poly_system({"x", "y", "z"},
                         {"(y - x^2)*" + s + "*(x - 1)", "(z - x^3)*" + s + "*(y - 1)",
                          "(y - x^2)*(z - x^3)*" + s + "*(z - 1)"},
                         "illustrative");
  e.recommended_rank = 1;
  e.reference_x0 = vec({0.7, 0.6, 0.5});
  e.zero_dimension = 2;
  return e;
}

CatalogEntry make_cyclic4(Scalar t) {
  const std::vector<std::string> vars{"x1", "x2", "x3", "x4"};
  std::vector<Polynomial> eqs{
      parse_poly("x1 + x2 + x3 + x4", vars),
      parse_poly("x1*x2", vars) * t + parse_poly("x2*x3 + x3*x4 + x4*x1", vars),
      parse_poly("x1*x2*x3 + x2*x3*x4 + x3*x4*x1 + x4*x1*x2", vars),
      parse_poly("x1*x2*x3*x4 - 1", vars),
  };
  CatalogEntry e;
  e.name = "cyclic4";
  e.description = "cyclic-4 system with the x1*x2 term scaled by t";
  e.system = as_nonlinear_system(PolySystem(vars, std::move(eqs)), "cyclic4");
  e.recommended_rank = 3;
  e.reference_x0 = vec({0.8, 1.2, -0.8, -1.2});
  e.zero_dimension = 1;
  e.expected.push_back(published("stationary point at t = 0.9999",
                                 vec({0.822879061867739, 1.215245401950727, -0.822879062858240, -1.215245403413521}),
                                 1e-6));
  e.expected.push_back(published("nearest branch point",
                                 vec({0.822879063773473, 1.215245403637205, -0.822879063773473, -1.215245403637205}),
                                 1e-7));
  e.expected.push_back(published("residual plateau", vec({1.0e-4}), 5e-5));
  return e;
}

CatalogEntry make_cyclic4_bifurcation() {
  CatalogEntry e;
  e.name = "cyclic4-bifurcation";
  e.description = "cyclic-4 with t as a fifth unknown; the branch point is where t reaches 1";
  e.system = poly_system({"x1", "x2", "x3", "x4", "t"},
                         {"x1 + x2 + x3 + x4", "t*x1*x2 + x2*x3 + x3*x4 + x4*x1",
                          "x1*x2*x3 + x2*x3*x4 + x3*x4*x1 + x4*x1*x2", "x1*x2*x3*x4 - 1"},
                         "cyclic4-bifurcation");
  e.recommended_rank = 4;
  e.reference_x0 =
      vec({0.822879061867739, 1.215245401950727, -0.822879062858240, -1.215245403413521, 0.9999});
  e.zero_dimension = 1;
  e.suggested_residual_tol = 1e-15;
  e.expected.push_back(published(
      "bifurcation point",
      vec({0.822879063773473, 1.215245403637205, -0.822879063773474, -1.215245403637204, 1.0}), 1e-12));
  return e;
}

Matrix cyclic4_parameter_jacobian(const Vector& x) {
  if (x.size() != 4) throw Error(ErrorKind::InvalidInput, "cyclic-4 has four variables");
  Matrix d = Matrix::Zero(4, 1);
  d(1, 0) = x(0) * x(1);
  return d;
}

CatalogEntry make_ultrasingular_branch() {
  CatalogEntry e;
  e.name = "ultrasingular-branch";
  e.description = "three equations whose zero curve (0,0,s,1/s) needs one deflation to become semiregular";
  e.system = poly_system({"x1", "x2", "x3", "x4"},
                         {"x1^3 + x2^2 + x3^2*x4^2 - 1", "x1^2 + x2^3 + x3^2*x4^2 - 1", "x1^2 + x2^2 + x3^3*x4^3 - 1"},
                         "ultrasingular-branch");
  e.recommended_rank = 1;
  e.reference_x0 = vec({0.001, 0.003, 0.499, 2.002});
  e.zero_dimension = 1;
  e.suggested_residual_tol = 0.0;
  e.expected.push_back(published("deflated limit", vec({0.0, 0.0, 0.499435807628269, 2.002259318867864}), 1e-4));
  return e;
}

// ---- GCD ----

Polynomial GcdInstance::gcd_of(const Vector& z) const {
  const auto parts = unpack(layout, z);
  return Polynomial::univariate(parts[0].col(0), p.variables().front());
}

GcdInstance make_gcd(const Polynomial& p, const Polynomial& q, std::size_t k) {
  const Vector pc = coefficients(p);
  const Vector qc = coefficients(q);
  const std::size_t m = static_cast<std::size_t>(pc.size()) - 1;
  const std::size_t n = static_cast<std::size_t>(qc.size()) - 1;
  if (k > std::min(m, n)) throw Error(ErrorKind::InvalidInput, "GCD degree exceeds min(deg p, deg q)");

  GcdInstance g{p, q, k, {}, m + n - k + 2, {}};
  g.layout.add_polynomial("u", k).add_polynomial("v", m - k).add_polynomial("w", n - k);

  std::vector<std::string> vars;
  for (std::size_t i = 0; i <= k; ++i) vars.push_back("u" + std::to_string(i));
  for (std::size_t i = 0; i <= m - k; ++i) vars.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i <= n - k; ++i) vars.push_back("w" + std::to_string(i));
  const std::size_t off_v = k + 1;
  const std::size_t off_w = off_v + (m - k + 1);

  // Coefficient j of u*v - p and of u*w - q.
  std::vector<Polynomial> eqs;
  auto product_rows = [&](std::size_t off, std::size_t deg, const Vector& target) {
    for (std::size_t j = 0; j <= k + deg; ++j) {
      Polynomial c = Polynomial::constant(vars, -target(static_cast<Eigen::Index>(j)));
      for (std::size_t a = 0; a <= k; ++a) {
        if (j < a || j - a > deg) continue;
        c += Polynomial::variable(vars, a) * Polynomial::variable(vars, off + (j - a));
      }
      eqs.push_back(std::move(c));
    }
  };
  product_rows(off_v, m - k, pc);
  product_rows(off_w, n - k, qc);
  g.system = as_nonlinear_system(PolySystem(vars, std::move(eqs)), "gcd");
  return g;
}

CatalogEntry make_gcd_reference() {
  const std::vector<std::string> x{"x"};
  const Polynomial p = parse_poly("-1.3333 - 2.3333*x - 4*x^2 - 3.6667*x^3 - 2.6667*x^4 - x^5", x);
  const Polynomial q = parse_poly("-1.9999 + x + x^2 + 3*x^3", x);
  GcdInstance g = make_gcd(p, q, 2);
  CatalogEntry e;
  e.name = "gcd-paper";
  e.description = "approximate GCD of degree 2 for a perturbed pair of degrees 5 and 3";
  e.system = g.system;
  e.system.label = "gcd-paper";
  e.recommended_rank = g.rank;
  e.reference_x0 = pack(g.layout, {vec({1.6, 1.4, 1.0}), vec({-1.5, -1.0, -1.6, -1.0}), vec({-2.0, 2.8})});
  e.zero_dimension = 1;
  e.expected.push_back(published("GCD coefficients", vec({1.08975633389, 1.08976717147, 1.08978342823}), 1e-8));
  e.expected.push_back(published("residual plateau", vec({8.3e-6}), 1.2e-5));
  return e;
}

double scaling_independent_distance(const Vector& u, const Vector& ref) {
  if (u.size() != ref.size()) throw Error(ErrorKind::InvalidInput, "length mismatch");
  const double uu = u.squaredNorm();
  if (uu == 0.0 || ref.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "zero vector");
  const Scalar c = u.dot(ref) / uu;  // u^H ref / u^H u
  return (c * u - ref).norm() / ref.norm();
}

// ---- eigenvalues ----

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Matrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

Matrix EigenInstance::operator_at(Scalar lambda) const {
  const auto n = a.rows();
  const auto k = static_cast<Eigen::Index>(block);
  const Matrix shifted = a - lambda * Matrix::Identity(n, n);
  return kron(Matrix::Identity(k, k), shifted) - kron(s.transpose(), Matrix::Identity(n, n));
}

Vector EigenInstance::initial_iterate(Scalar lambda0) const {
  const Matrix l = operator_at(lambda0);
  const Matrix nb = nullspace_basis(l, multiplicity * block);
  Vector x = nb * (nb.adjoint() * Vector::Ones(l.cols()));
  if (x.norm() == 0.0) throw Error(ErrorKind::NumericBreakdown, "all-ones matrix is orthogonal to the kernel");
  x /= x.norm();
  Vector z(x.size() + 1);
  z(0) = lambda0;
  z.tail(x.size()) = x;
  return z;
}

EigenInstance make_eigen(const Matrix& a, std::size_t m, std::size_t k) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidInput, "matrix must be square");
  const auto n = static_cast<std::size_t>(a.rows());
  if (m == 0 || k == 0 || m * k > n) throw Error(ErrorKind::InvalidInput, "need 1 <= m*k <= n");

  EigenInstance e;
  e.a = a;
  e.multiplicity = m;
  e.block = k;
  const auto kk = static_cast<Eigen::Index>(k);
  const auto nn = static_cast<Eigen::Index>(n);
  e.s = Matrix::Zero(kk, kk);
  for (Eigen::Index i = 0; i + 1 < kk; ++i) e.s(i, i + 1) = 1.0;
  e.layout.add_scalar("lambda").add_matrix("X", n, k);
  e.rank = (n - m) * k + 1;
  e.refine_layout.add_scalar("lambda").add_matrix("X", n, k).add_matrix("G", n, n);
  e.refine_rank = n * k;

  const Matrix s = e.s;
  const Matrix ik = Matrix::Identity(kk, kk);
  const Matrix in = Matrix::Identity(nn, nn);
  const Matrix sti = kron(s.transpose(), in);
  const Eigen::Index nk = nn * kk;

  // f(lambda, X) = vec((G - lambda I) X - X S) for a given G.
  auto residual = [ik, sti, nn](const Matrix& g, Scalar lambda, const Vector& x) -> Vector {
    return kron(ik, g - lambda * Matrix::Identity(nn, nn)) * x - sti * x;
  };

  NonlinearSystem fixed;
  fixed.label = "eigen";
  fixed.num_variables = static_cast<std::size_t>(nk) + 1;
  fixed.num_equations = static_cast<std::size_t>(nk);
  fixed.eval = [a, residual, nk](const Vector& z) { return residual(a, z(0), z.tail(nk)); };
  fixed.jacobian = [a, ik, sti, nn, nk](const Vector& z) {
    Matrix j(nk, nk + 1);
    j.col(0) = -z.tail(nk);
    j.rightCols(nk) = kron(ik, a - z(0) * Matrix::Identity(nn, nn)) - sti;
    return j;
  };
  e.system = fixed;

  NonlinearSystem refine;
  refine.label = "eigen-refine";
  refine.num_variables = static_cast<std::size_t>(1 + nk + nn * nn);
  refine.num_equations = static_cast<std::size_t>(nk);
  refine.eval = [residual, nk, nn](const Vector& z) {
    const Matrix g = z.tail(nn * nn).reshaped(nn, nn);
    return residual(g, z(0), z.segment(1, nk));
  };
  refine.jacobian = [ik, sti, nn, nk, kk](const Vector& z) {
    const Matrix g = z.tail(nn * nn).reshaped(nn, nn);
    const Vector x = z.segment(1, nk);
    Matrix j(nk, 1 + nk + nn * nn);
    j.col(0) = -x;
    j.block(0, 1, nk, nk) = kron(ik, g - z(0) * Matrix::Identity(nn, nn)) - sti;
    // vec(dG X) = (X^T kron I) vec(dG)
    const Matrix xm = x.reshaped(nn, kk);
    j.rightCols(nn * nn) = kron(xm.transpose(), Matrix::Identity(nn, nn));
    return j;
  };
  e.refine_system = refine;
  return e;
}

Matrix reference_eigen_matrix() {
  return real_matrix({{-1, 0, 3, 0, 2, 1},
                      {1, 1, -1, 1, 0, 0},
                      {-2, -1, 4, 1, 1, 0},
                      {3, -3, -3, 5, -1, -1},
                      {-3, 1, 3, -1, 5, 2},
                      {1, 0, -1, 0, -1, 2}});
}

Matrix reference_eigen_perturbation() {
  return 1e-6 * real_matrix({{.1, -.7, -.4, -1.0, .2, .6},
                             {-.2, .1, -.1, -.5, .5, .0},
                             {.3, -.8, -.6, -.1, .4, .1},
                             {-.5, .0, .1, .7, -.2, .5},
                             {-.2, -.2, -.8, -.7, -.4, -.5},
                             {-.2, -.1, .8, -.5, -.7, -.6}});
}

CatalogEntry make_eigen_reference() {
  const EigenInstance inst = make_eigen(reference_eigen_matrix(), 2, 2);
  CatalogEntry e;
  e.name = "eigen-paper";
  e.description = "defective eigenvalue 3 with two 2x2 Jordan blocks";
  e.system = inst.system;
  e.system.label = "eigen-paper";
  e.recommended_rank = inst.rank;
  e.reference_x0 = inst.initial_iterate(2.9);
  e.zero_dimension = inst.multiplicity * inst.block;
  e.suggested_residual_tol = 1e-15;
  e.expected.push_back(published("eigenvalue", vec({3.0}), 1e-12));
  return e;
}

CatalogEntry make_eigen_reference_perturbed() {
  const EigenInstance inst = make_eigen(reference_eigen_matrix() + reference_eigen_perturbation(), 2, 2);
  CatalogEntry e;
  e.name = "eigen-paper-perturbed";
  e.description = "the defective eigenvalue problem after a 1e-6 perturbation of the matrix";
  e.system = inst.system;
  e.system.label = "eigen-paper-perturbed";
  e.recommended_rank = inst.rank;
  e.reference_x0 = inst.initial_iterate(2.9);
  e.zero_dimension = inst.multiplicity * inst.block;
  e.suggested_residual_tol = 1e-15;
  e.expected.push_back(published("approximate eigenvalue", vec({3.00000102}), 1e-6));
  return e;
}

CatalogEntry make_eigen_refine() {
  const Matrix at = reference_eigen_matrix() + reference_eigen_perturbation();
  const EigenInstance inst = make_eigen(at, 2, 2);
  NewtonOptions o;
  o.rank = RankChoice::of(inst.rank);
  o.residual_tol = 1e-15;
  const IterationTrace tr = newton_rank_r(inst.system, inst.initial_iterate(2.9), o);
  const Vector lx = tr.final_x();

  CatalogEntry e;
  e.name = "eigen-refine";
  e.description = "nearest matrix with the defective structure: lambda, X and the matrix all vary";
  e.system = inst.refine_system;
  e.system.label = "eigen-refine";
  e.recommended_rank = inst.refine_rank;
  e.reference_x0.resize(static_cast<Eigen::Index>(inst.refine_layout.total_dim()));
  e.reference_x0.head(lx.size()) = lx;
  e.reference_x0.tail(at.size()) = at.reshaped();
  e.zero_dimension = e.system.num_variables - inst.refine_rank;
  e.suggested_residual_tol = 1e-15;
  e.expected.push_back(published("backward error", vec({7.59e-7}), 1e-6));
  return e;
}

std::vector<std::string> catalog_names() {
  return {"circle",      "illustrative",          "cyclic4",      "cyclic4-bifurcation", "gcd-paper",
          "eigen-paper", "eigen-paper-perturbed", "eigen-refine", "ultrasingular-branch"};
}

CatalogEntry catalog_lookup(std::string_view name, const CatalogParams& params) {
  if (params.t && name != "cyclic4") {
    throw Error(ErrorKind::InvalidInput, "parameter t only applies to cyclic4");
  }
  if (name == "circle") return make_circle();
  if (name == "illustrative") return make_illustrative();
  if (name == "cyclic4") return make_cyclic4(params.t.value_or(Scalar(0.9999, 0.0)));
  if (name == "cyclic4-bifurcation") return make_cyclic4_bifurcation();
  if (name == "gcd-paper") return make_gcd_reference();
  if (name == "eigen-paper") return make_eigen_reference();
  if (name == "eigen-paper-perturbed") return make_eigen_reference_perturbed();
  if (name == "eigen-refine") return make_eigen_refine();
  if (name == "ultrasingular-branch") return make_ultrasingular_branch();
  throw Error(ErrorKind::UnknownSystem, "unknown system '" + std::string(name) + "'");
}

}  // namespace rankr

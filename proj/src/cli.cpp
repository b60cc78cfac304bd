#include "rankr/cli.hpp"

#include "rankr/catalog.hpp"
#include "rankr/deflation.hpp"
#include "rankr/linalg.hpp"
#include "rankr/polynomial.hpp"
#include "rankr/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

namespace rankr {

namespace {

// Usage-level failure: bad flags, unknown names, malformed literals,
// dimension mismatches.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(std::string_view s, std::string_view whole) {
  const std::string tmp(s);
  if (tmp.empty()) throw ParseError("malformed number '" + std::string(whole) + "'", 0);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || errno == ERANGE) {
    throw ParseError("malformed number '" + std::string(whole) + "'", static_cast<std::size_t>(end - tmp.c_str()));
  }
  return v;
}

}  // namespace

Scalar parse_complex(std::string_view text) {
  if (text.empty()) throw ParseError("empty complex literal", 0);
  if (text.back() != 'i') return {parse_real(text, text), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view s) -> double {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s, text);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(body)};
  return {parse_real(body.substr(0, split), text), imag_part(body.substr(split))};
}

Vector parse_complex_list(std::string_view text) {
  std::vector<Scalar> vals;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    vals.push_back(parse_complex(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                    : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
  return v;
}

namespace {

struct SystemArgs {
  std::string key;
  std::string poly_file;
  std::string t;
};

struct Loaded {
  NonlinearSystem sys;
  std::optional<CatalogEntry> entry;
};

Loaded load_system(const SystemArgs& a) {
  if (!a.poly_file.empty()) {
    if (!a.key.empty()) throw UsageError("give either a catalog system or --poly-file, not both");
    std::ifstream in(a.poly_file);
    if (!in) throw UsageError("cannot open " + a.poly_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(a.poly_file + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("vars") || !j.contains("equations") || !j["vars"].is_array() ||
        !j["equations"].is_array()) {
      throw UsageError(a.poly_file + ": expected {\"vars\": [...], \"equations\": [...]}");
    }
    std::vector<std::string> vars, eqs;
    try {
      vars = j["vars"].get<std::vector<std::string>>();
      eqs = j["equations"].get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(a.poly_file + ": " + e.what());
    }
    if (eqs.empty()) throw UsageError(a.poly_file + ": no equations");
    try {
      return {as_nonlinear_system(parse_system(vars, eqs), a.poly_file), std::nullopt};
    } catch (const Error& e) {
      throw UsageError(a.poly_file + ": " + e.what());
    }
  }
  if (a.key.empty()) throw UsageError("no system given (catalog key or --poly-file)");
  CatalogParams params;
  if (!a.t.empty()) params.t = parse_complex(a.t);
  try {
    CatalogEntry e = catalog_lookup(a.key, params);
    NonlinearSystem s = e.system;
    return {std::move(s), std::move(e)};
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Vector starting_point(const Loaded& l, const std::string& text, const char* flag) {
  Vector x;
  if (text.empty() || text == "catalog-default") {
    if (!l.entry) throw UsageError(std::string(flag) + " is required for polynomial files");
    x = l.entry->reference_x0;
  } else {
    x = parse_complex_list(text);
  }
  if (static_cast<std::size_t>(x.size()) != l.sys.num_variables) {
    throw UsageError(std::string(flag) + " has " + std::to_string(x.size()) + " entries, the system has " +
                     std::to_string(l.sys.num_variables) + " variables");
  }
  return x;
}

int exit_code(ConvergenceStatus s) {
  switch (s) {
    case ConvergenceStatus::ZeroFound:
    case ConvergenceStatus::StationaryPoint: return 0;
    case ConvergenceStatus::MaxIterations: return 2;
    case ConvergenceStatus::Diverged: return 3;
  }
  return 4;
}

void add_system_args(CLI::App* cmd, SystemArgs& a) {
  cmd->add_option("system", a.key, "catalog key (see `list`)");
  cmd->add_option("--poly-file", a.poly_file, "JSON file {vars: [...], equations: [...]}");
  cmd->add_option("--t", a.t, "cyclic4 parameter (complex literal)");
}

struct RunArgs {
  SystemArgs sys;
  std::string rank;
  std::string x0;
  int max_iter = 50;
  double shift_tol = 1e-14;
  std::optional<double> residual_tol;
  std::uint64_t seed = 0;
  std::string format = "table";
  std::string solver = "svd";
  double theta = 1e-8;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  const Loaded l = load_system(a.sys);
  const Vector x0 = starting_point(l, a.x0, "--x0");
  NewtonOptions o;
  const std::size_t kmax = std::min(l.sys.num_variables, l.sys.num_equations);
  if (a.rank == "auto" || (a.rank.empty() && !l.entry)) {
    o.rank = RankChoice::automatic(a.theta);
  } else if (a.rank.empty()) {
    o.rank = RankChoice::of(l.entry->recommended_rank);
  } else {
    char* end = nullptr;
    const long r = std::strtol(a.rank.c_str(), &end, 10);
    if (*end != '\0' || r < 0) throw UsageError("--rank must be a non-negative integer or 'auto'");
    if (static_cast<std::size_t>(r) > kmax) {
      throw UsageError("invalid rank " + a.rank + ": exceeds min(equations, variables) = " + std::to_string(kmax));
    }
    o.rank = RankChoice::of(static_cast<std::size_t>(r));
  }
  if (a.max_iter < 0) throw UsageError("--max-iter must be non-negative");
  o.max_iter = a.max_iter;
  o.shift_tol = a.shift_tol;
  o.residual_tol = a.residual_tol.value_or(l.entry && l.entry->suggested_residual_tol ? *l.entry->suggested_residual_tol
                                                                                       : 1e-12);
  o.seed = a.seed;
  o.solver = a.solver == "auto" ? SolverChoice::Auto : SolverChoice::Svd;

  const IterationTrace tr = newton_rank_r(l.sys, x0, o);
  if (a.format == "json") {
    nlohmann::json j = to_json(tr);
    j["system"] = l.sys.label;
    out << j.dump(2) << "\n";
  } else if (a.format == "csv") {
    out << format_csv(tr);
  } else {
    out << "system: " << l.sys.label << "  rank: " << tr.rank_used << "\n";
    out << format_table(tr);
    out << "status: " << to_string(tr.status) << "\n";
    out << "limit: " << format_vector(tr.final_x()) << "\n";
    if (tr.gap_warning) out << "warning: narrow singular value gap at rank " << tr.rank_used << "\n";
  }
  return exit_code(tr.status);
}

struct RankArgs {
  SystemArgs sys;
  std::string x;
  double theta = 1e-8;
  bool relative = false;
};

int cmd_rank(const RankArgs& a, std::ostream& out) {
  const Loaded l = load_system(a.sys);
  if (a.x.empty()) throw UsageError("--x is required");
  const Vector x = starting_point(l, a.x, "--x");
  if (!(a.theta > 0.0)) throw UsageError("--theta must be positive");
  const Matrix j = l.sys.jacobian(x);
  const Svd s = full_svd(j);
  const double theta = a.relative && s.sigma.size() > 0 ? a.theta * s.sigma(0) : a.theta;
  std::size_t r = 0;
  if (theta > 0.0) r = numerical_rank(j, theta).first;
  char buf[64];
  out << "singular values:";
  for (Eigen::Index i = 0; i < s.sigma.size(); ++i) {
    std::snprintf(buf, sizeof buf, " %.6e", s.sigma(i));
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%.1e", theta);
  out << "\nthreshold: " << buf << "\nnumerical rank: " << r << "\n";
  return 0;
}

struct DeflateArgs {
  SystemArgs sys;
  std::string x0;
  std::optional<std::size_t> dim;
  int max_depth = 3;
  int max_iter = 50;
  std::uint64_t seed = 0;
  std::string format = "table";
};

int cmd_deflate(const DeflateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.max_depth < 1) throw UsageError("--max-depth must be at least 1");
  const Loaded l = load_system(a.sys);
  const Vector x0 = starting_point(l, a.x0, "--x0");
  std::size_t dim;
  if (a.dim) {
    dim = *a.dim;
  } else if (l.entry) {
    dim = l.entry->zero_dimension;
  } else {
    throw UsageError("--dim is required for polynomial files");
  }
  if (dim > l.sys.num_variables) throw UsageError("--dim exceeds the number of variables");
  if (l.sys.num_variables - dim > l.sys.num_equations) {
    throw UsageError("--dim is too small for a system with " + std::to_string(l.sys.num_equations) + " equations");
  }
  DeflationOptions o;
  o.max_depth = static_cast<std::size_t>(a.max_depth);
  o.seed = a.seed;
  o.newton.seed = a.seed;
  o.newton.max_iter = a.max_iter;
  const DeflationResult res = deflate_to_semiregular(l.sys, x0, dim, o);

  if (res.depth_used == 0 && res.semiregular) {
    err << "nothing to deflate: the zero is already semiregular (nullity " << res.levels.front().nullity << ")\n";
    return 1;
  }
  if (a.format == "json") {
    out << to_json(res).dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < res.levels.size(); ++i) {
      const auto& lv = res.levels[i];
      out << "level " << i << ": variables " << lv.trace.final_x().size() << ", rank " << lv.rank << ", nullity "
          << lv.nullity << ", " << to_string(lv.trace.status) << " after " << lv.trace.steps.size() - 1 << " steps\n";
    }
    out << format_table(res.levels.back().trace);
    out << "depth_used: " << res.depth_used << "\nsemiregular: " << (res.semiregular ? "true" : "false") << "\n";
    out << "limit: " << format_vector(res.base_zero(l.sys.num_variables)) << "\n";
  }
  if (res.semiregular) return 0;
  return res.levels.back().trace.status == ConvergenceStatus::Diverged ? 3 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rank-r Newton iteration for nonisolated zeros", "rankr"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run the rank-r Newton iteration");
  add_system_args(run_cmd, run.sys);
  run_cmd->add_option("--rank", run.rank, "projection rank or 'auto' (default: catalog recommendation)");
  run_cmd->add_option("--x0", run.x0, "starting point, comma-separated complex literals, or catalog-default");
  run_cmd->add_option("--max-iter", run.max_iter, "iteration limit");
  run_cmd->add_option("--shift-tol", run.shift_tol, "relative shift tolerance");
  run_cmd->add_option("--residual-tol", run.residual_tol, "residual tolerance");
  run_cmd->add_option("--seed", run.seed, "seed for randomized solvers");
  run_cmd->add_option("--format", run.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  run_cmd->add_option("--solver", run.solver, "svd or auto")->check(CLI::IsMember({"svd", "auto"}));
  run_cmd->add_option("--theta", run.theta, "relative threshold for --rank auto");

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "numerical rank of the Jacobian at a point");
  add_system_args(rank_cmd, rank.sys);
  rank_cmd->add_option("--x", rank.x, "point, comma-separated complex literals, or catalog-default");
  rank_cmd->add_option("--theta", rank.theta, "singular value threshold");
  rank_cmd->add_flag("--relative", rank.relative, "scale theta by the largest singular value");

  DeflateArgs defl;
  auto* defl_cmd = app.add_subcommand("deflate", "deflate until the zero is semiregular");
  add_system_args(defl_cmd, defl.sys);
  defl_cmd->add_option("--x0", defl.x0, "starting point, comma-separated complex literals, or catalog-default");
  defl_cmd->add_option("--dim", defl.dim, "dimension of the zero set");
  defl_cmd->add_option("--max-depth", defl.max_depth, "deflation limit (>= 1)");
  defl_cmd->add_option("--max-iter", defl.max_iter, "Newton iteration limit per level");
  defl_cmd->add_option("--seed", defl.seed, "seed for the random deflation matrices");
  defl_cmd->add_option("--format", defl.format, "table or json")->check(CLI::IsMember({"table", "json"}));

  auto* list_cmd = app.add_subcommand("list", "list catalog systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*list_cmd) {
      for (const auto& name : catalog_names()) {
        const CatalogEntry e = catalog_lookup(name);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-22s %zu vars, %zu eqs, rank %zu  %s\n", name.c_str(),
                      e.system.num_variables, e.system.num_equations, e.recommended_rank, e.description.c_str());
        out << buf;
      }
      return 0;
    }
    if (*run_cmd) return cmd_run(run, out);
    if (*rank_cmd) return cmd_rank(rank, out);
    if (*defl_cmd) return cmd_deflate(defl, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 4;
  }
  return 1;
}

}  // namespace rankr

#include "rankr/trace_io.hpp"

#include <cmath>
#include <cstdio>

namespace rankr {

namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const Vector& x) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back({x(i).real(), x(i).imag()});
  return a;
}

nlohmann::json to_json(const IterationTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace.steps) {
    nlohmann::json j;
    j["k"] = s.k;
    j["x"] = to_json(s.x);
    j["residual"] = s.residual;
    if (s.shift) j["shift"] = *s.shift;
    steps.push_back(std::move(j));
  }
  nlohmann::json sig = nlohmann::json::array();
  for (Eigen::Index i = 0; i < trace.sigma_profile.size(); ++i) sig.push_back(trace.sigma_profile(i));
  nlohmann::json out;
  out["steps"] = std::move(steps);
  out["status"] = to_string(trace.status);
  out["rank_used"] = trace.rank_used;
  out["sigma_profile"] = std::move(sig);
  out["final_residual"] = trace.final_residual;
  out["final_shift"] = trace.final_shift;
  return out;
}

nlohmann::json to_json(const DeflationResult& result) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lv : result.levels) {
    levels.push_back({{"rank", lv.rank}, {"nullity", lv.nullity}, {"trace", to_json(lv.trace)}});
  }
  return {{"depth_used", result.depth_used}, {"semiregular", result.semiregular}, {"levels", std::move(levels)}};
}

std::string format_table(const IterationTrace& trace) {
  std::string out;
  std::optional<double> incoming;
  char buf[96];
  for (const auto& s : trace.steps) {
    if (incoming) {
      std::snprintf(buf, sizeof buf, "Step %2zu:  residual = %.1e  shift = %.1e\n", s.k, s.residual, *incoming);
    } else {
      std::snprintf(buf, sizeof buf, "Step %2zu:  residual = %.1e\n", s.k, s.residual);
    }
    out += buf;
    incoming = s.shift;
  }
  return out;
}

std::string format_csv(const IterationTrace& trace) {
  std::string out = "k,residual,shift\n";
  for (const auto& s : trace.steps) {
    out += std::to_string(s.k) + "," + full(s.residual) + "," + (s.shift ? full(*s.shift) : std::string()) + "\n";
  }
  return out;
}

std::string format_vector(const Vector& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    const Scalar v = x(i);
    if (v.imag() == 0.0) {
      out += full(v.real());
    } else {
      out += full(v.real()) + (std::signbit(v.imag()) ? "-" : "+") + full(std::abs(v.imag())) + "i";
    }
  }
  return out + ")";
}

}  // namespace rankr

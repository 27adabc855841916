#include "stratawave/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace stratawave {

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  require(v.is_number(), ErrorCode::invalid_argument, std::string("expected a number for '") + key + "'");
  return v.get<double>();
}

}  // namespace

json to_json(const FluidParams& p) {
  return {{"rho", p.rho},         {"rho_bar", p.rho_bar},     {"g", p.g},
          {"sigma", p.sigma},     {"omega", p.omega},         {"omega_bar", p.omega_bar},
          {"wave_speed", p.wave_speed}};
}

FluidParams params_from_json(const json& j) {
  require(j.is_object(), ErrorCode::invalid_argument, "params: expected a JSON object");
  static const std::set<std::string> known{"rho", "rho_bar", "g", "sigma", "omega", "omega_bar", "wave_speed"};
  for (const auto& [key, v] : j.items())
    require(known.count(key) > 0, ErrorCode::invalid_argument, "params: unknown key '" + key + "'");
  FluidParams p;
  if (j.contains("rho")) p.rho = get_number(j, "rho");
  if (j.contains("rho_bar")) p.rho_bar = get_number(j, "rho_bar");
  if (j.contains("g")) p.g = get_number(j, "g");
  if (j.contains("sigma")) p.sigma = get_number(j, "sigma");
  if (j.contains("omega")) p.omega = get_number(j, "omega");
  if (j.contains("omega_bar")) p.omega_bar = get_number(j, "omega_bar");
  if (j.contains("wave_speed")) p.wave_speed = get_number(j, "wave_speed");
  return p;
}

json to_json(const WaveProfile& profile) {
  return {{"k", profile.k()}, {"coeffs", std::vector<double>(profile.coeffs().begin(), profile.coeffs().end())}};
}

WaveProfile profile_from_json(const json& j) {
  require(j.is_object() && j.contains("k") && j.contains("coeffs"), ErrorCode::invalid_argument,
          "profile: expected {k, coeffs}");
  require(j.at("k").is_number_integer(), ErrorCode::invalid_argument, "profile: k must be an integer");
  std::vector<double> c;
  for (const auto& v : j.at("coeffs")) {
    require(v.is_number(), ErrorCode::invalid_argument, "profile: coefficients must be numbers");
    c.push_back(v.get<double>());
  }
  return WaveProfile(j.at("k").get<int>(), std::move(c));
}

json to_json(const BranchPoint& p) {
  return {{"s", p.s},
          {"lambda", p.lambda},
          {"residual", p.residual},
          {"branch", {{"k", p.branch_id.k}, {"i", p.branch_id.i}}},
          {"profile", to_json(p.profile)}};
}

BranchPoint branch_point_from_json(const json& j) {
  BranchPoint p;
  p.s = get_number(j, "s");
  p.lambda = get_number(j, "lambda");
  p.residual = get_number(j, "residual");
  p.branch_id.k = j.at("branch").at("k").get<int>();
  p.branch_id.i = j.at("branch").at("i").get<int>();
  p.profile = profile_from_json(j.at("profile"));
  return p;
}

json to_json(const ExpansionCoefficients& c) {
  return {{"k", c.k},
          {"i", c.i},
          {"Lambda", c.Lambda},
          {"A_k", c.A_k},
          {"alpha_k", c.alpha_k},
          {"transversality", c.transversality},
          {"mu_2k", c.mu_2k},
          {"A_k_variant", to_string(c.variant)}};
}

json to_json(const AnalyticityFit& f) {
  return {{"C", f.C}, {"r", f.r}, {"r_squared", f.r_squared}, {"harmonics_used", f.harmonics_used}};
}

json to_json(const Branch& b) {
  json pts = json::array();
  for (const auto& p : b.points) pts.push_back(to_json(p));
  return {{"branch", {{"k", b.branch_id.k}, {"i", b.branch_id.i}}},
          {"achieved_s", b.achieved_s},
          {"reached_s_max", b.reached_s_max},
          {"stop_reason", b.stop_reason},
          {"harmonics", b.harmonics},
          {"iterations", b.iterations},
          {"points", pts}};
}

json to_json(const Point2& p) { return json::array({number_or_null(p.x), number_or_null(p.y)}); }

json to_json(const Polyline& line) {
  json a = json::array();
  for (const auto& p : line) a.push_back(to_json(p));
  return a;
}

json to_json(const StagnationReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"x", p.x}, {"y", p.y}, {"classification", to_string(p.kind)}});
  return {{"layer", to_string(r.layer)},
          {"points", pts},
          {"zeta", number_or_null(r.zeta)},
          {"y_b", number_or_null(r.y_b)},
          {"y_bar_b", number_or_null(r.y_bar_b)},
          {"y_zeta_curve", to_json(r.y_zeta_curve)},
          {"xi_curve", to_json(r.xi_curve)},
          {"xi_bar_curve", to_json(r.xi_bar_curve)},
          {"separatrix", to_json(r.separatrix)},
          {"critical_layer_area", r.critical_layer_area},
          {"warnings", r.warnings}};
}

json to_json(const Streamline& s) {
  return {{"closed", s.closed},
          {"exited", s.exited},
          {"spans_period", s.spans_period},
          {"winding", s.winding},
          {"closure_gap", number_or_null(s.closure_gap)},
          {"psi_drift", s.psi_drift},
          {"length", s.length},
          {"points", s.points.size()}};
}

json to_json(const SignCheck& c) {
  return {{"name", c.name},         {"sampled", c.sampled}, {"skipped", c.skipped},
          {"violations", c.violations}, {"worst", c.worst},     {"ok", c.ok()}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field_csv(const FieldGrid& g) {
  std::string out = "x,y_ref,Y,psi,layer\n";
  const std::string layer = std::string(",") + to_string(g.layer) + '\n';
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const std::size_t q = static_cast<std::size_t>(i) * g.ny + j;
      out += format_double(g.x[i]);
      out += ',';
      out += format_double(g.y[j]);
      out += ',';
      if (g.pushforward) out += format_double(g.physical_y[q]);
      out += ',';
      out += format_double(g.values[q]);
      out += layer;
    }
  }
  return out;
}

std::string branch_csv(const Branch& b) {
  std::string out = "s,lambda,residual,iterations";
  for (std::size_t j = 1; j <= b.harmonics; ++j) out += ",a_" + std::to_string(j);
  out += '\n';
  for (std::size_t q = 0; q < b.points.size(); ++q) {
    const auto& p = b.points[q];
    out += format_double(p.s) + ',' + format_double(p.lambda) + ',' + format_double(p.residual) + ',' +
           std::to_string(q < b.iterations.size() ? b.iterations[q] : 0);
    for (std::size_t j = 1; j <= b.harmonics; ++j) out += ',' + format_double(p.profile.coeff(j));
    out += '\n';
  }
  return out;
}

std::string polylines_csv(const std::vector<Polyline>& lines) {
  std::string out = "id,x,y\n";
  for (std::size_t id = 0; id < lines.size(); ++id)
    for (const auto& p : lines[id]) out += std::to_string(id) + ',' + format_double(p.x) + ',' + format_double(p.y) + '\n';
  return out;
}

}  // namespace stratawave

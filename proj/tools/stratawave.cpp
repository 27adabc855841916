// Command-line front end. Talks to the library through the C interface only.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stratawave/stratawave.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int exit_verify_failed = 1;
constexpr int exit_invalid = 2;
constexpr int exit_numerical = 3;

struct Failure {
  int exit_code;
  std::string message;
  sw_status status = SW_OK;
};

struct Config {
  json params = json::object();
  std::optional<int> k;
  int branch = 1;
  double s = 0.02;
  double s_max = 0.05;
  double ds = 0.001;
  int nx = 128;
  int ny = 33;
  double tol = 1e-9;
  int harmonics = 0;  // 0: as many as the grid allows, at most 32
  int k_max = 8;
  int streamlines = 12;
  std::string method = "elliptic";
  std::string out = "stratawave-out";
  std::uint64_t seed = 20261016;
  std::string only;

  json to_json() const {
    json j = {{"params", params}, {"branch", branch},   {"s", s},       {"s_max", s_max},
              {"ds", ds},         {"grid", {{"nx", nx}, {"ny", ny}}},   {"tol", tol},
              {"harmonics", harmonics}, {"k_max", k_max}, {"streamlines", streamlines},
              {"method", method}, {"out", out},         {"seed", seed}, {"only", only}};
    j["k"] = k ? json(*k) : json(nullptr);
    return j;
  }
};

template <class T>
void take(const json& j, const char* key, T& into) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Failure{exit_invalid, std::string("config: bad value for '") + key + "'"};
  }
}

void load_config(const std::string& path, Config& c) {
  std::ifstream in(path);
  if (!in) throw Failure{exit_invalid, "cannot read config file '" + path + "'"};
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Failure{exit_invalid, "config: " + std::string(e.what())};
  }
  if (!j.is_object()) throw Failure{exit_invalid, "config: expected a JSON object"};
  static const std::set<std::string> known{"params", "k",   "branch", "s",       "s_max",       "ds",
                                           "grid",   "tol", "harmonics", "k_max", "streamlines", "method",
                                           "out",    "seed", "only"};
  for (const auto& [key, v] : j.items())
    if (!known.count(key)) throw Failure{exit_invalid, "config: unknown key '" + key + "'"};
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw Failure{exit_invalid, "config: params must be an object"};
    c.params = j["params"];
  }
  if (j.contains("k") && !j["k"].is_null()) {
    int k = 0;
    take(j, "k", k);
    c.k = k;
  }
  take(j, "branch", c.branch);
  take(j, "s", c.s);
  take(j, "s_max", c.s_max);
  take(j, "ds", c.ds);
  if (j.contains("grid")) {
    take(j["grid"], "nx", c.nx);
    take(j["grid"], "ny", c.ny);
  }
  take(j, "tol", c.tol);
  take(j, "harmonics", c.harmonics);
  take(j, "k_max", c.k_max);
  take(j, "streamlines", c.streamlines);
  take(j, "method", c.method);
  take(j, "out", c.out);
  take(j, "seed", c.seed);
  take(j, "only", c.only);
}

int exit_for(sw_status s) {
  switch (s) {
    case SW_NUMERICAL_FAILURE:
    case SW_NO_CONVERGENCE:
    case SW_DEGENERATE_BRANCH:
    case SW_INTERNAL_ERROR:
      return exit_numerical;
    default:
      return exit_invalid;
  }
}

void check(sw_status s) {
  if (s != SW_OK) throw Failure{exit_for(s), sw_last_error(), s};
}

// Owns a string returned by the library.
std::string take_string(char* p) {
  std::string s = p ? p : "";
  sw_free(p);
  return s;
}

template <class T, void (*D)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { D(p); }
  T** out() { return &p; }
  operator T*() const { return p; }
};
using Params = Handle<sw_params, sw_params_destroy>;
using BranchH = Handle<sw_branch, sw_branch_destroy>;
using Field = Handle<sw_field, sw_field_destroy>;
using Flow = Handle<sw_flow, sw_flow_destroy>;

class Runner {
 public:
  explicit Runner(Config c) : cfg_(std::move(c)) {}

  int run(const std::string& cmd) {
    check(sw_params_from_json(cfg_.params.dump().c_str(), params_.out()));
    check(sw_params_validate(params_));
    // store the fully resolved parameters
    cfg_.params = json::parse(take_string(to_json_string()));
    if (cmd != "dispersion" && cmd != "verify" && !cfg_.k)
      throw Failure{exit_invalid, "--k is required for '" + cmd + "'"};
    if (cfg_.method != "elliptic" && cfg_.method != "asymptotic")
      throw Failure{exit_invalid, "--method must be 'elliptic' or 'asymptotic'"};
    if (cfg_.branch != 1 && cfg_.branch != 2) throw Failure{exit_invalid, "--branch must be 1 or 2"};
    std::error_code ec;
    fs::create_directories(cfg_.out, ec);
    if (ec) throw Failure{exit_invalid, "cannot create output directory '" + cfg_.out + "'"};
    options_.nx = cfg_.nx;
    options_.ny = cfg_.ny;
    options_.tol = cfg_.tol;
    if (cfg_.harmonics <= 0) cfg_.harmonics = std::min(32, cfg_.nx / 2 - 1);
    options_.harmonics = cfg_.harmonics;

    if (cmd == "dispersion") return dispersion();
    if (cmd == "expand") return expand();
    if (cmd == "branch") return branch();
    if (cmd == "field") return field();
    if (cmd == "flow") return flow(false);
    if (cmd == "plot") return flow(true);
    if (cmd == "verify") return verify();
    throw Failure{exit_invalid, "unknown subcommand '" + cmd + "'"};
  }

  const Config& config() const { return cfg_; }

 private:
  char* to_json_string() {
    char* s = nullptr;
    check(sw_params_to_json(params_, &s));
    return s;
  }

  fs::path path(const std::string& name) const { return fs::path(cfg_.out) / name; }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(path(name), std::ios::binary);
    if (!f) throw Failure{exit_invalid, "cannot write '" + path(name).string() + "'"};
    f << text;
    std::cout << "wrote " << path(name).string() << '\n';
  }

  void write_json(const std::string& name, json body) const {
    body["config"] = cfg_.to_json();
    write(name, body.dump(2) + "\n");
  }

  // CSV and SVG carry the config in a sidecar.
  void write_with_sidecar(const std::string& name, const std::string& text) const {
    write(name, text);
    write(name + ".config.json", json{{"config", cfg_.to_json()}}.dump(2) + "\n");
  }

  int dispersion() {
    char* s = nullptr;
    check(sw_dispersion_json(params_, cfg_.k_max, &s));
    json j = json::parse(take_string(s));
    for (const auto& row : j["bifurcation_points"]) std::cout << row.dump() << '\n';
    write_json("dispersion.json", j);
    return 0;
  }

  int expand() {
    char* s = nullptr;
    check(sw_expansion_json(params_, *cfg_.k, cfg_.branch, cfg_.s, &s));
    write_json("expand.json", json::parse(take_string(s)));
    for (auto layer : {SW_LOWER, SW_UPPER}) {
      Field f;
      check(sw_field_asymptotic(params_, layer, *cfg_.k, cfg_.branch, cfg_.s, nullptr, f.out()));
      char* csv = nullptr;
      check(sw_field_csv(f, cfg_.nx, cfg_.ny, 1, &csv));
      write_with_sidecar(layer == SW_LOWER ? "expand_lower.csv" : "expand_upper.csv", take_string(csv));
    }
    return 0;
  }

  int branch() {
    BranchH b;
    check(sw_branch_trace(params_, *cfg_.k, cfg_.branch, cfg_.s_max, cfg_.ds, &options_, b.out()));
    char* s = nullptr;
    check(sw_branch_json(b, &s));
    write_json("branch.json", json::parse(take_string(s)));
    check(sw_branch_csv(b, &s));
    write_with_sidecar("branch.csv", take_string(s));
    return 0;
  }

  // Lower and upper fields at amplitude s, by the selected method.
  void fields(Field& lower, Field& upper, json& meta) {
    if (cfg_.method == "asymptotic") {
      check(sw_field_asymptotic(params_, SW_LOWER, *cfg_.k, cfg_.branch, cfg_.s, nullptr, lower.out()));
      check(sw_field_asymptotic(params_, SW_UPPER, *cfg_.k, cfg_.branch, cfg_.s, nullptr, upper.out()));
      meta = {{"method", "asymptotic"}};
      return;
    }
    BranchH b;
    check(sw_branch_correct(params_, *cfg_.k, cfg_.branch, cfg_.s, &options_, b.out()));
    double s = 0, lambda = 0, residual = 0;
    check(sw_branch_point(b, 0, &s, &lambda, &residual));
    check(sw_field_elliptic(params_, SW_LOWER, b, 0, &options_, lower.out()));
    check(sw_field_elliptic(params_, SW_UPPER, b, 0, &options_, upper.out()));
    char* j = nullptr;
    check(sw_branch_json(b, &j));
    meta = {{"method", "elliptic"}, {"lambda", lambda}, {"residual", residual},
            {"point", json::parse(take_string(j))["points"][0]}};
  }

  int field() {
    Field lower, upper;
    json meta;
    fields(lower, upper, meta);
    write_json("field.json", meta);
    char* csv = nullptr;
    check(sw_field_csv(lower, cfg_.nx, cfg_.ny, 1, &csv));
    write_with_sidecar("field_lower.csv", take_string(csv));
    check(sw_field_csv(upper, cfg_.nx, cfg_.ny, 1, &csv));
    write_with_sidecar("field_upper.csv", take_string(csv));
    return 0;
  }

  int flow(bool svg) {
    Field lower, upper;
    json meta;
    fields(lower, upper, meta);
    Flow f;
    check(sw_flow_analyze(lower, upper, 256, 128, cfg_.streamlines, f.out()));
    char* s = nullptr;
    check(sw_flow_report_json(f, &s));
    json report = json::parse(take_string(s));
    report["solution"] = meta;
    for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
    if (svg) {
      check(sw_flow_svg(f, 960, 480, &s));
      write_with_sidecar("flow.svg", take_string(s));
      return 0;
    }
    write_json("flow.json", report);
    check(sw_flow_streamlines_csv(f, &s));
    write_with_sidecar("streamlines.csv", take_string(s));
    return 0;
  }

  int verify() {
    char* s = nullptr;
    int all = 0;
    check(sw_verify(cfg_.only.empty() ? nullptr : cfg_.only.c_str(), cfg_.seed, &s, &all));
    json report = json::parse(take_string(s));
    for (const auto& c : report["criteria"])
      std::cout << c["id"].get<std::string>() << ' ' << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  "
                << c["summary"].get<std::string>() << '\n';
    write_json("verify.json", report);
    return all ? 0 : exit_verify_failed;
  }

  Config cfg_;
  Params params_;
  sw_solver_options options_{};
};

void diagnostic(const Config& cfg, const Failure& f) {
  std::cerr << "error: " << f.message << '\n';
  if (f.exit_code != exit_numerical) return;
  json j = {{"status", sw_status_name(f.status)}, {"message", f.message}, {"config", cfg.to_json()}};
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  std::ofstream out(fs::path(cfg.out) / "error.json");
  if (out) out << j.dump(2) << '\n';
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-layer constant-vorticity internal waves: dispersion, expansions, continuation and flow analysis"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Config cfg;
  std::string config_path;
  double rho = 0, rho_bar = 0, g = 0, sigma = 0, omega = 0, omega_bar = 0;
  int k = 0;
  auto* o_rho = app.add_option("--rho", rho, "lower density");
  auto* o_rho_bar = app.add_option("--rho-bar", rho_bar, "upper density");
  auto* o_g = app.add_option("--g", g, "gravity");
  auto* o_sigma = app.add_option("--sigma", sigma, "surface tension");
  auto* o_omega = app.add_option("--omega", omega, "lower vorticity");
  auto* o_omega_bar = app.add_option("--omega-bar", omega_bar, "upper vorticity");
  auto* o_k = app.add_option("--k", k, "wavenumber");
  auto* o_branch = app.add_option("--branch", cfg.branch, "branch index (1 or 2)");
  auto* o_s = app.add_option("--s", cfg.s, "amplitude");
  auto* o_s_max = app.add_option("--s-max", cfg.s_max, "largest amplitude for continuation");
  auto* o_ds = app.add_option("--ds", cfg.ds, "continuation step");
  auto* o_nx = app.add_option("--nx", cfg.nx, "grid points in x");
  auto* o_ny = app.add_option("--ny", cfg.ny, "grid points in y");
  auto* o_tol = app.add_option("--tol", cfg.tol, "Newton tolerance");
  auto* o_out = app.add_option("--out", cfg.out, "output directory");
  auto* o_method = app.add_option("--method", cfg.method, "asymptotic or elliptic");
  auto* o_k_max = app.add_option("--k-max", cfg.k_max, "largest wavenumber for dispersion");
  auto* o_harmonics = app.add_option("--harmonics", cfg.harmonics, "interface truncation for Newton");
  auto* o_seed = app.add_option("--seed", cfg.seed, "seed for randomized checks (verify)");
  auto* o_only = app.add_option("--only", cfg.only, "comma-separated criteria for verify, e.g. AC-1,AC-3");
  app.add_option("--config", config_path, "JSON config; flags override it");

  app.add_subcommand("dispersion", "bifurcation points, transversality and the sigma threshold");
  app.add_subcommand("expand", "second-order expansion coefficients and fields");
  app.add_subcommand("branch", "trace a branch by Newton continuation");
  app.add_subcommand("field", "stream functions of both layers at amplitude s");
  app.add_subcommand("flow", "stagnation points, critical curves, separatrix and streamlines");
  app.add_subcommand("verify", "run the acceptance suite");
  app.add_subcommand("plot", "SVG of the streamline picture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_invalid;
  }

  // file first, flags on top
  Config flags = cfg;
  try {
    if (!config_path.empty()) load_config(config_path, cfg);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  }
  auto set_param = [&](CLI::Option* o, const char* key, double v) {
    if (o->count()) cfg.params[key] = v;
  };
  set_param(o_rho, "rho", rho);
  set_param(o_rho_bar, "rho_bar", rho_bar);
  set_param(o_g, "g", g);
  set_param(o_sigma, "sigma", sigma);
  set_param(o_omega, "omega", omega);
  set_param(o_omega_bar, "omega_bar", omega_bar);
  if (o_k->count()) cfg.k = k;
  if (o_branch->count()) cfg.branch = flags.branch;
  if (o_s->count()) cfg.s = flags.s;
  if (o_s_max->count()) cfg.s_max = flags.s_max;
  if (o_ds->count()) cfg.ds = flags.ds;
  if (o_nx->count()) cfg.nx = flags.nx;
  if (o_ny->count()) cfg.ny = flags.ny;
  if (o_tol->count()) cfg.tol = flags.tol;
  if (o_out->count()) cfg.out = flags.out;
  if (o_method->count()) cfg.method = flags.method;
  if (o_k_max->count()) cfg.k_max = flags.k_max;
  if (o_harmonics->count()) cfg.harmonics = flags.harmonics;
  if (o_seed->count()) cfg.seed = flags.seed;
  if (o_only->count()) cfg.only = flags.only;

  const std::string cmd = app.get_subcommands().front()->get_name();
  Runner runner(cfg);
  try {
    return runner.run(cmd);
  } catch (const Failure& f) {
    diagnostic(runner.config(), f);
    return f.exit_code;
  } catch (const std::exception& e) {
    diagnostic(runner.config(), Failure{exit_numerical, e.what(), SW_INTERNAL_ERROR});
    return exit_numerical;
  }
}

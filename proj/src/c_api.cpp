#include "stratawave/stratawave.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>

#include "stratawave/asymptotics.hpp"
#include "stratawave/continuation.hpp"
#include "stratawave/dispersion.hpp"
#include "stratawave/elliptic.hpp"
#include "stratawave/flowfield.hpp"
#include "stratawave/plot.hpp"
#include "stratawave/serialize.hpp"
#include "stratawave/verify.hpp"

using namespace stratawave;

struct sw_params {
  FluidParams p;
};

struct sw_branch {
  Branch b;
  FluidParams params;
};

struct sw_field {
  std::shared_ptr<const StreamFunction> f;
};

struct sw_flow {
  std::shared_ptr<const StreamFunction> lower, upper;
  StagnationReport report;
  LayerAnalysis layer;
  std::vector<Streamline> lower_lines, upper_lines;
};

namespace {

thread_local std::string last_error;

sw_status status_of(ErrorCode c) { return static_cast<sw_status>(static_cast<int>(c)); }

template <class F>
sw_status guard(F&& fn) {
  try {
    fn();
    last_error.clear();
    return SW_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SW_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SW_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double* field_of(FluidParams& p, const std::string& name) {
  if (name == "rho") return &p.rho;
  if (name == "rho_bar") return &p.rho_bar;
  if (name == "g") return &p.g;
  if (name == "sigma") return &p.sigma;
  if (name == "omega") return &p.omega;
  if (name == "omega_bar") return &p.omega_bar;
  if (name == "wave_speed") return &p.wave_speed;
  fail(ErrorCode::invalid_argument, "unknown parameter '" + name + "'");
}

NewtonOptions newton_options(const sw_solver_options* o) {
  NewtonOptions n;
  if (!o) return n;
  require(o->harmonics >= 2, ErrorCode::invalid_argument, "solver options: harmonics must be >= 2");
  n.grid.nx = o->nx;
  n.grid.ny = o->ny;
  n.tol = o->tol;
  n.harmonics = static_cast<std::size_t>(o->harmonics);
  n.grid.validate();
  return n;
}

Layer layer_of(sw_layer l) {
  require(l == SW_LOWER || l == SW_UPPER, ErrorCode::invalid_argument, "layer must be SW_LOWER or SW_UPPER");
  return l == SW_LOWER ? Layer::lower : Layer::upper;
}

}  // namespace

extern "C" {

const char* sw_version(void) { return "0.1.0"; }

const char* sw_status_name(sw_status s) {
  switch (s) {
    case SW_OK:
      return "ok";
    case SW_INTERNAL_ERROR:
      return "internal_error";
    default:
      if (s >= SW_INVALID_ARGUMENT && s <= SW_IO_ERROR) return to_string(static_cast<ErrorCode>(s));
      return "unknown";
  }
}

const char* sw_last_error(void) { return last_error.c_str(); }

void sw_free(void* p) { std::free(p); }

sw_status sw_params_create(sw_params** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(out, "out");
    *out = new sw_params{};
  });
}

sw_status sw_params_from_json(const char* text, sw_params** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(text, "json");
    need(out, "out");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorCode::invalid_argument, std::string("params: ") + e.what());
    }
    auto p = std::make_unique<sw_params>();
    p->p = params_from_json(j);
    *out = p.release();
  });
}

sw_status sw_params_to_json(const sw_params* p, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(p, "params");
    need(out, "out");
    *out = dup(to_json(p->p).dump());
  });
}

sw_status sw_params_set(sw_params* p, const char* name, double value) {
  return guard([&] {
    need(p, "params");
    need(name, "name");
    *field_of(p->p, name) = value;
  });
}

sw_status sw_params_get(const sw_params* p, const char* name, double* value) {
  return guard([&] {
    need(p, "params");
    need(name, "name");
    need(value, "value");
    FluidParams copy = p->p;
    *value = *field_of(copy, name);
  });
}

sw_status sw_params_validate(const sw_params* p) {
  return guard([&] {
    need(p, "params");
    p->p.validate();
  });
}

void sw_params_destroy(sw_params* p) { delete p; }

sw_status sw_mu(const sw_params* p, int k, double lambda, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    *out = mu(k, lambda, p->p);
  });
}

sw_status sw_bifurcation_points(const sw_params* p, int k, double* l1, double* l2) {
  return guard([&] {
    need(p, "params");
    need(l1, "lambda1");
    need(l2, "lambda2");
    const auto b = bifurcation_points(k, p->p);
    *l1 = b.lambda1;
    *l2 = b.lambda2;
  });
}

sw_status sw_transversality(const sw_params* p, int k, int i, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    *out = transversality(k, i, p->p);
  });
}

sw_status sw_kernel_is_simple(const sw_params* p, int k, int i, int j_max, int* out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    *out = kernel_is_simple(k, i, p->p, j_max) ? 1 : 0;
  });
}

sw_status sw_sigma_threshold(const sw_params* p, int k_max, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    *out = sigma_threshold(p->p, k_max);
  });
}

sw_status sw_dispersion_json(const sw_params* p, int k_max, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(p, "params");
    need(out, "out");
    require(k_max >= 2, ErrorCode::invalid_argument, "dispersion: k_max must be >= 2");
    p->p.validate();
    json rows = json::array();
    for (int k = 1; k <= k_max; ++k) {
      const auto b = bifurcation_points(k, p->p);
      json row = {{"k", k}, {"Lambda1", b.lambda1}, {"Lambda2", b.lambda2}};
      for (int i = 1; i <= 2; ++i) {
        const std::string tag = std::to_string(i);
        row["transversality" + tag] = transversality(k, i, p->p);
        row["mu_2k" + tag] = mu(2 * k, b[i], p->p);
        row["kernel_simple" + tag] = kernel_is_simple(k, i, p->p, std::max(16, 2 * k_max));
      }
      rows.push_back(row);
    }
    const auto m = observed_monotonicity(p->p, k_max);
    json j = {{"params", to_json(p->p)},
              {"k_max", k_max},
              {"bifurcation_points", rows},
              {"monotonicity", {{"branch1", m.branch1}, {"branch2", m.branch2}}},
              {"sigma_threshold", sigma_threshold(p->p, k_max)}};
    *out = dup(j.dump(2));
  });
}

sw_status sw_expansion_json(const sw_params* p, int k, int i, double s, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(p, "params");
    need(out, "out");
    const auto c = second_order_coefficients(k, i, p->p);
    const auto e = branch_expansion(k, i, p->p, s);
    const auto u = upper_second_order_profiles(k, c.Lambda, p->p.omega_bar);
    json j = {{"params", to_json(p->p)},
              {"s", s},
              {"coefficients", to_json(c)},
              {"A_k_as_printed", A_k_value(k, c.Lambda, p->p, AkVariant::as_printed)},
              {"lambda", e.lambda},
              {"profile", to_json(e.profile)},
              {"upper_second_order",
               {{"c_slope0", u.c_slope0},
                {"c_slope0_formula", u.c_slope0_closed},
                {"d_slope0", u.d_slope0},
                {"d_slope0_formula", u.d_slope0_closed}}}};
    *out = dup(j.dump(2));
  });
}

void sw_solver_options_default(sw_solver_options* o) {
  if (!o) return;
  const NewtonOptions n;
  o->nx = n.grid.nx;
  o->ny = n.grid.ny;
  o->tol = n.tol;
  o->harmonics = static_cast<int>(n.harmonics);
}

sw_status sw_branch_trace(const sw_params* p, int k, int i, double s_max, double ds, const sw_solver_options* o,
                          sw_branch** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(p, "params");
    need(out, "out");
    auto b = std::make_unique<sw_branch>();
    b->params = p->p;
    b->b = trace_branch(k, i, p->p, s_max, ds, newton_options(o));
    *out = b.release();
  });
}

sw_status sw_branch_correct(const sw_params* p, int k, int i, double s, const sw_solver_options* o, sw_branch** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(p, "params");
    need(out, "out");
    require(i == 1 || i == 2, ErrorCode::invalid_argument, "branch index must be 1 or 2");
    const NewtonOptions n = newton_options(o);
    const auto e = branch_expansion(k, i, p->p, s, n.variant, n.harmonics);
    NewtonReport rep;
    auto b = std::make_unique<sw_branch>();
    b->params = p->p;
    b->b.branch_id = {k, i};
    b->b.points.push_back(newton_correct(e.lambda, e.profile, s, p->p, {k, i}, n, &rep));
    b->b.iterations.push_back(rep.iterations);
    b->b.achieved_s = s;
    b->b.reached_s_max = true;
    b->b.stop_reason = "single correction";
    b->b.harmonics = n.harmonics;
    *out = b.release();
  });
}

size_t sw_branch_size(const sw_branch* b) { return b ? b->b.points.size() : 0; }

sw_status sw_branch_point(const sw_branch* b, size_t index, double* s, double* lambda, double* residual) {
  return guard([&] {
    need(b, "branch");
    require(index < b->b.points.size(), ErrorCode::invalid_argument, "branch point index out of range");
    const auto& q = b->b.points[index];
    if (s) *s = q.s;
    if (lambda) *lambda = q.lambda;
    if (residual) *residual = q.residual;
  });
}

sw_status sw_branch_coefficients(const sw_branch* b, size_t index, double* out, size_t capacity, size_t* count) {
  return guard([&] {
    need(b, "branch");
    require(index < b->b.points.size(), ErrorCode::invalid_argument, "branch point index out of range");
    const auto c = b->b.points[index].profile.coeffs();
    if (count) *count = c.size();
    if (out)
      for (size_t q = 0; q < c.size() && q < capacity; ++q) out[q] = c[q];
  });
}

sw_status sw_branch_json(const sw_branch* b, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(b, "branch");
    need(out, "out");
    json j = to_json(b->b);
    json fits = json::array();
    for (const auto& q : b->b.points) fits.push_back(q.profile.is_flat() ? json(nullptr) : to_json(analyticity_fit(q.profile)));
    j["analyticity"] = fits;
    j["params"] = to_json(b->params);
    *out = dup(j.dump(2));
  });
}

sw_status sw_branch_csv(const sw_branch* b, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(b, "branch");
    need(out, "out");
    *out = dup(branch_csv(b->b));
  });
}

void sw_branch_destroy(sw_branch* b) { delete b; }

sw_status sw_field_asymptotic(const sw_params* p, sw_layer layer, int k, int i, double s, const double* lambda,
                              sw_field** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(p, "params");
    need(out, "out");
    std::optional<double> lam;
    if (lambda) lam = *lambda;
    auto f = std::make_unique<sw_field>();
    f->f = std::make_shared<AsymptoticField>(layer_of(layer), k, i, p->p, s, lam);
    *out = f.release();
  });
}

sw_status sw_field_elliptic(const sw_params* p, sw_layer layer, const sw_branch* b, size_t index,
                            const sw_solver_options* o, sw_field** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(p, "params");
    need(b, "branch");
    need(out, "out");
    require(index < b->b.points.size(), ErrorCode::invalid_argument, "branch point index out of range");
    const auto& q = b->b.points[index];
    const GridSpec grid = newton_options(o).grid;
    auto f = std::make_unique<sw_field>();
    if (layer_of(layer) == Layer::lower)
      f->f = std::make_shared<LayerSolution>(solve_lower(q.profile, p->p, grid));
    else
      f->f = std::make_shared<LayerSolution>(solve_upper(q.lambda, q.profile, p->p, grid));
    *out = f.release();
  });
}

sw_status sw_field_eval(const sw_field* f, double x, double y, int physical, double out[6]) {
  return guard([&] {
    need(f, "field");
    need(out, "out");
    const Derivatives d = physical ? f->f->physical(x, y) : f->f->reference(x, y);
    out[0] = d.f;
    out[1] = d.fx;
    out[2] = d.fy;
    out[3] = d.fxx;
    out[4] = d.fxy;
    out[5] = d.fyy;
  });
}

sw_status sw_field_csv(const sw_field* f, int nx, int ny, int pushforward, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(f, "field");
    need(out, "out");
    *out = dup(field_csv(sample_field(*f->f, {nx, ny}, pushforward != 0)));
  });
}

sw_status sw_field_velocity(const sw_field* f, int nx, int ny, double* max_divergence, double* tolerance) {
  return guard([&] {
    need(f, "field");
    const auto v = velocity(*f->f, {nx, ny});
    if (max_divergence) *max_divergence = v.max_divergence;
    if (tolerance) *tolerance = v.divergence_tolerance;
  });
}

void sw_field_destroy(sw_field* f) { delete f; }

sw_status sw_flow_analyze(const sw_field* lower, const sw_field* upper, int nx, int ny, int streamlines,
                          sw_flow** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(lower, "lower field");
    need(out, "out");
    require(lower->f->layer() == Layer::lower, ErrorCode::invalid_argument, "flow: first field must be the lower layer");
    require(!upper || upper->f->layer() == Layer::upper, ErrorCode::invalid_argument,
            "flow: second field must be the upper layer");
    require(streamlines >= 1, ErrorCode::invalid_argument, "flow: streamlines must be >= 1");
    auto fl = std::make_unique<sw_flow>();
    fl->lower = lower->f;
    if (upper) fl->upper = upper->f;
    AnalysisOptions opt;
    opt.nx = nx;
    opt.ny = ny;
    fl->report = analyze_flow(*fl->lower, opt, &fl->layer);
    const double P = fl->lower->profile().period();
    const double step = fl->layer.cell > 0 ? 0.125 * fl->layer.cell : P / (8.0 * nx);
    fl->lower_lines = streamline_family(*fl->lower, fl->report, streamlines, step, 2.0 * (P + 2.0));
    if (fl->upper) {
      const StagnationReport none;
      fl->upper_lines = streamline_family(*fl->upper, none, streamlines, step, 2.0 * (P + 2.0));
    }
    *out = fl.release();
  });
}

sw_status sw_flow_stagnation_count(const sw_flow* f, size_t* n) {
  return guard([&] {
    need(f, "flow");
    need(n, "n");
    *n = f->report.points.size();
  });
}

sw_status sw_flow_report_json(const sw_flow* f, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(f, "flow");
    need(out, "out");
    json j = to_json(f->report);
    json closed = json::array(), outer = json::array(), family = json::array();
    for (const auto& s : f->layer.closed_streamline_samples) closed.push_back(to_json(s));
    for (const auto& s : f->layer.outer_streamline_samples) outer.push_back(to_json(s));
    for (const auto& s : f->lower_lines) family.push_back(to_json(s));
    for (const auto& s : f->upper_lines) family.push_back(to_json(s));
    j["separatrix_closes"] = f->layer.closes;
    j["separatrix_depth"] = std::isfinite(f->layer.separatrix_depth) ? json(f->layer.separatrix_depth) : json(nullptr);
    j["closed_streamline_samples"] = closed;
    j["outer_streamline_samples"] = outer;
    j["streamlines"] = family;
    j["profile"] = to_json(f->lower->profile());
    *out = dup(j.dump(2));
  });
}

sw_status sw_flow_streamlines_csv(const sw_flow* f, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(f, "flow");
    need(out, "out");
    std::vector<Polyline> lines;
    for (const auto& s : f->lower_lines) lines.push_back(s.points);
    for (const auto& s : f->upper_lines) lines.push_back(s.points);
    *out = dup(polylines_csv(lines));
  });
}

sw_status sw_flow_svg(const sw_flow* f, int width, int height, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(f, "flow");
    need(out, "out");
    PlotOptions o;
    o.width = width;
    o.height = height;
    *out = dup(render_flow_svg(f->lower->profile(), f->report, f->lower_lines, f->upper_lines, o));
  });
}

void sw_flow_destroy(sw_flow* f) { delete f; }

sw_status sw_psi(const sw_params* p, double lambda, int k, const double* coeffs, size_t n, int nx, int ny,
                 double* out, size_t capacity, size_t* count) {
  return guard([&] {
    need(p, "params");
    require(coeffs || n == 0, ErrorCode::invalid_argument, "coeffs must not be NULL");
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    const WaveProfile eta = n == 0 ? WaveProfile::flat(k) : WaveProfile(k, std::vector<double>(coeffs, coeffs + n));
    const auto v = Psi(lambda, eta, p->p, g);
    if (count) *count = v.size();
    if (out)
      for (size_t q = 0; q < v.size() && q < capacity; ++q) out[q] = v[q];
  });
}

sw_status sw_verify(const char* ids, uint64_t seed, char** out, int* all_pass) {
  if (out) *out = nullptr;
  return guard([&] {
    need(out, "out");
    std::vector<std::string> list;
    if (ids) {
      std::stringstream ss(ids);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) list.push_back(item);
    }
    for (const auto& id : list) {
      bool known = false;
      for (const auto& c : criterion_ids()) known = known || c == id;
      require(known, ErrorCode::invalid_argument, "unknown acceptance criterion '" + id + "'");
    }
    VerifyOptions opt;
    opt.seed = seed;
    const auto results = run_acceptance(list, opt);
    bool pass = true;
    json arr = json::array();
    for (const auto& r : results) {
      pass = pass && r.pass;
      arr.push_back(to_json(r));
    }
    if (all_pass) *all_pass = pass ? 1 : 0;
    *out = dup(json{{"seed", seed}, {"all_pass", pass}, {"criteria", arr}}.dump(2));
  });
}

}  // extern "C"

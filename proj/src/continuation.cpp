#include "stratawave/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratawave/dispersion.hpp"
#include "stratawave/parallel.hpp"

namespace stratawave {

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct System {
  int k;
  double s;
  int n;
  const FluidParams& params;
  const NewtonOptions& opt;

  WaveProfile profile(const Eigen::VectorXd& u) const {
    std::vector<double> a(n, 0.0);
    a[0] = -s;
    for (int j = 2; j <= n; ++j) a[j - 1] = u[j - 1];
    return WaveProfile(k, std::move(a));
  }

  Eigen::VectorXd residual(const PsiEvaluation& e) const {
    const auto c = cosine_coefficients(e.values, n, opt.grid.periods);
    return Eigen::Map<const Eigen::VectorXd>(c.data(), n);
  }

  void build_jacobian(const Eigen::VectorXd& u, const PsiEvaluation& base, NewtonWorkspace& ws) const {
    const double lam = u[0];
    const WaveProfile eta = profile(u);
    ws.jacobian.resize(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t col) {
      std::vector<double> d;
      if (col == 0) {
        const double h = 1e-6 * std::max(1.0, std::abs(lam));
        const auto p = evaluate_Psi(lam + h, eta, params, opt.grid, &base);
        const auto m = evaluate_Psi(lam - h, eta, params, opt.grid, &base);
        d.resize(p.values.size());
        for (std::size_t q = 0; q < d.size(); ++q) d[q] = (p.values[q] - m.values[q]) / (2.0 * h);
      } else {
        // direction cos((col+1) k x), stored at half amplitude to stay a valid profile
        std::vector<double> dir(col + 1, 0.0);
        dir[col] = 0.5;
        d = frechet_dPsi(lam, eta, params, WaveProfile(k, dir), opt.grid, 0.0, &base);
        for (double& v : d) v *= 2.0;
      }
      const auto c = cosine_coefficients(d, n, opt.grid.periods);
      for (int r = 0; r < n; ++r) ws.jacobian(r, static_cast<Eigen::Index>(col)) = c[r];
    });
    ws.lu.compute(ws.jacobian);
    ws.valid = true;
  }
};

[[noreturn]] void no_convergence(const std::string& why, double residual) {
  std::ostringstream os;
  os << "newton_correct: " << why << " (last residual " << residual << ")";
  fail(ErrorCode::no_convergence, os.str());
}

}  // namespace

BranchPoint newton_correct(double lambda_guess, const WaveProfile& guess, double s, const FluidParams& params,
                           BranchId id, const NewtonOptions& opt, NewtonReport* report, NewtonWorkspace* workspace) {
  params.validate();
  opt.grid.validate();
  require(std::isfinite(lambda_guess) && std::isfinite(s), ErrorCode::invalid_argument,
          "newton_correct: non-finite guess");
  require(guess.k() == id.k, ErrorCode::invalid_argument, "newton_correct: profile k differs from branch k");
  require(opt.harmonics >= 2 && opt.tol > 0 && opt.max_iter >= 1, ErrorCode::invalid_argument,
          "newton_correct: need harmonics >= 2, tol > 0, max_iter >= 1");
  const int n = static_cast<int>(opt.harmonics);
  require(n * opt.grid.periods < opt.grid.nx / 2, ErrorCode::invalid_argument,
          "newton_correct: harmonics exceed the grid's Nyquist limit");
  const System sys{id.k, s, n, params, opt};
  NewtonReport local_report;
  NewtonReport& rep = report ? *report : local_report;
  rep = {};
  NewtonWorkspace local_ws;
  NewtonWorkspace& ws = workspace ? *workspace : local_ws;
  if (ws.valid && ws.jacobian.rows() != n) ws.valid = false;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  u[0] = lambda_guess;
  for (int j = 2; j <= n; ++j) u[j - 1] = guess.coeff(j);
  const Eigen::VectorXd u0 = u;

  WaveProfile eta = sys.profile(u);
  PsiEvaluation eval = evaluate_Psi(u[0], eta, params, opt.grid);
  double r = sup_abs(eval.values);
  rep.residuals.push_back(r);
  auto finish = [&]() {
    BranchPoint p;
    p.s = s;
    p.lambda = u[0];
    p.profile = eta;
    p.residual = r;
    p.branch_id = id;
    return p;
  };
  if (r < opt.tol) return finish();
  if (!ws.valid) {
    sys.build_jacobian(u, eval, ws);
    ++rep.jacobian_builds;
  }
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::VectorXd du = -ws.lu.solve(sys.residual(eval));
    if (!du.allFinite()) no_convergence("singular Jacobian", r);
    u += du;
    rep.iterations = it;
    rep.corrections.push_back(du.lpNorm<Eigen::Infinity>());
    if ((u - u0).lpNorm<Eigen::Infinity>() > opt.max_correction) no_convergence("left the convergence basin", r);
    try {
      eta = sys.profile(u);
    } catch (const Error&) {
      no_convergence("iterate left the strip |eta| < 1", r);
    }
    PsiEvaluation next = evaluate_Psi(u[0], eta, params, opt.grid, &eval);
    const double rn = sup_abs(next.values);
    rep.residuals.push_back(rn);
    if (!std::isfinite(rn)) no_convergence("non-finite residual", r);
    eval = std::move(next);
    const double prev = r;
    r = rn;
    if (r < opt.tol) return finish();
    if (!(r <= opt.contraction * prev)) {
      sys.build_jacobian(u, eval, ws);
      ++rep.jacobian_builds;
    }
  }
  no_convergence("maximum iterations reached", r);
}

Branch trace_branch(int k, int i, const FluidParams& params, double s_max, double ds, const NewtonOptions& options) {
  params.validate();
  require(s_max > 0 && ds > 0 && std::isfinite(s_max) && std::isfinite(ds), ErrorCode::invalid_argument,
          "trace_branch: need s_max > 0 and ds > 0");
  if (!kernel_is_simple(k, i, params, 16)) fail(ErrorCode::setup_error, "trace_branch: kernel is not simple");
  if (transversality(k, i, params) == 0.0) fail(ErrorCode::setup_error, "trace_branch: transversality fails");

  NewtonOptions opt = options;
  const BranchId id{k, i};
  Branch br;
  br.branch_id = id;
  const double Lambda = bifurcation_point(k, i, params);
  NewtonWorkspace ws;
  br.points.push_back(newton_correct(Lambda, WaveProfile::flat(k, opt.harmonics), 0.0, params, id, opt, nullptr, &ws));
  br.iterations.push_back(0);

  const long steps = static_cast<long>(std::ceil(s_max / ds - 1e-9));
  for (long n = 1; n <= steps; ++n) {
    const double s = std::min(n * ds, s_max);
    double lam_guess;
    WaveProfile eta_guess;
    if (n == 1) {
      const auto e = branch_expansion(k, i, params, s, opt.variant, opt.harmonics);
      lam_guess = e.lambda;
      eta_guess = e.profile;
    } else {
      const auto& p1 = br.points[br.points.size() - 1];
      const auto& p0 = br.points[br.points.size() - 2];
      const double t = (s - p1.s) / (p1.s - p0.s);
      lam_guess = p1.lambda + t * (p1.lambda - p0.lambda);
      std::vector<double> a(opt.harmonics, 0.0);
      for (std::size_t j = 1; j <= opt.harmonics; ++j) a[j - 1] = p1.profile.coeff(j) + t * (p1.profile.coeff(j) - p0.profile.coeff(j));
      try {
        eta_guess = WaveProfile(k, a);
      } catch (const Error&) {
        br.stop_reason = "predictor left the strip";
        break;
      }
    }
    try {
      NewtonReport rep;
      BranchPoint p = newton_correct(lam_guess, eta_guess, s, params, id, opt, &rep, &ws);
      // adapt the truncation while the tail is not negligible
      while (std::abs(p.profile.coeff(opt.harmonics)) >= opt.tail_ratio * std::abs(p.profile.coeff(1))) {
        if (2 * opt.harmonics * opt.grid.periods >= static_cast<std::size_t>(opt.grid.nx / 2))
          fail(ErrorCode::no_convergence, "truncation cannot be doubled on this grid");
        opt.harmonics *= 2;
        ws.valid = false;
        p = newton_correct(p.lambda, p.profile.with_harmonics(opt.harmonics), s, params, id, opt, &rep, &ws);
      }
      br.points.push_back(std::move(p));
      br.iterations.push_back(rep.iterations);
    } catch (const Error& e) {
      if (n == 1) fail(e.code(), std::string("trace_branch: first step failed: ") + e.what());
      br.stop_reason = e.what();
      break;
    }
  }
  br.achieved_s = br.points.back().s;
  br.reached_s_max = std::abs(br.achieved_s - s_max) <= 1e-12 * s_max;
  if (br.reached_s_max) br.stop_reason = "reached s_max";
  br.harmonics = opt.harmonics;
  return br;
}

AnalyticityFit analyticity_fit(const WaveProfile& profile, double floor_rel) {
  double amax = 0.0;
  for (std::size_t j = 1; j <= profile.harmonics(); ++j) amax = std::max(amax, std::abs(profile.coeff(j)));
  std::vector<double> xs, ys;
  for (std::size_t j = 1; j <= profile.harmonics(); ++j) {
    const double a = std::abs(profile.coeff(j));
    if (a > floor_rel * amax && a > 0.0) {
      xs.push_back(static_cast<double>(j));
      ys.push_back(std::log(a));
    }
  }
  AnalyticityFit fit;
  fit.harmonics_used = static_cast<int>(xs.size());
  if (xs.size() < 2) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t q = 0; q < xs.size(); ++q) mx += xs[q], my += ys[q];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    sxx += (xs[q] - mx) * (xs[q] - mx);
    sxy += (xs[q] - mx) * (ys[q] - my);
    syy += (ys[q] - my) * (ys[q] - my);
  }
  const double slope = sxy / sxx;
  fit.r = std::exp(slope);
  fit.C = std::exp(my - slope * mx);
  fit.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

bool single_crest(const WaveProfile& profile, int samples) {
  const double h = pi / profile.k() / samples;
  for (int q = 1; q < samples; ++q)
    if (!(profile.derivative(q * h) > 0.0)) return false;
  return true;
}

}  // namespace stratawave

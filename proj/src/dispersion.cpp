#include "stratawave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stratawave {

double k_coth(double k) {
  if (k >= 20.0) return k * (1.0 + std::exp(-2.0 * k)) / -std::expm1(-2.0 * k);
  return k / std::tanh(k);
}

double mu_real(double k, double lambda, const FluidParams& p) {
  return 2.0 * (p.g * (p.rho_bar - p.rho) - p.sigma * k * k + p.omega_bar * p.rho_bar * lambda +
                p.rho_bar * k_coth(k) * lambda * lambda);
}

double mu(int k, double lambda, const FluidParams& p) {
  require(k >= 1, ErrorCode::invalid_argument, "mu: k must be >= 1");
  return mu_real(k, lambda, p);
}

double mu_lambda(int k, double lambda, const FluidParams& p) {
  require(k >= 1, ErrorCode::invalid_argument, "mu_lambda: k must be >= 1");
  return 2.0 * (p.omega_bar * p.rho_bar + 2.0 * p.rho_bar * k_coth(k) * lambda);
}

namespace {

BifurcationPoints roots_real(double k, const FluidParams& p) {
  // rho_bar K l^2 + omega_bar rho_bar l + c = 0
  const double a = p.rho_bar * k_coth(k);
  const double b = p.omega_bar * p.rho_bar;
  const double c = p.g * (p.rho_bar - p.rho) - p.sigma * k * k;
  const double disc = b * b - 4.0 * a * c;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q / a, r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace

BifurcationPoints bifurcation_points(int k, const FluidParams& params) {
  require(k >= 1, ErrorCode::invalid_argument, "bifurcation_points: k must be >= 1");
  params.validate();
  return roots_real(k, params);
}

double bifurcation_point(int k, int i, const FluidParams& params) {
  require(i == 1 || i == 2, ErrorCode::invalid_argument, "branch index must be 1 or 2");
  return bifurcation_points(k, params)[i];
}

double transversality(int k, int i, const FluidParams& params) {
  const double lam = bifurcation_point(k, i, params);
  return mu_lambda(k, lam, params);
}

bool kernel_is_simple(int k, int i, const FluidParams& p, int j_max) {
  require(j_max >= 2, ErrorCode::invalid_argument, "kernel_is_simple: j_max must be >= 2");
  const double lam = bifurcation_point(k, i, p);
  auto f = [&](double n) { return mu_real(n, lam, p); };
  auto scale = [&](double n) {
    return 2.0 * (std::abs(p.g * (p.rho_bar - p.rho)) + p.sigma * n * n + std::abs(p.omega_bar * p.rho_bar * lam) +
                  p.rho_bar * k_coth(n) * lam * lam);
  };
  auto nonzero = [&](double n) { return std::abs(f(n)) > 1e-10 * scale(n); };

  long j_last = j_max;
  if (p.sigma > 0.0) {
    // f'(n) <= -2 sigma n + rho_bar lam^2 coth(k): f decreases past this point
    const double n_dec = p.rho_bar * lam * lam * k_coth(k) / k / (2.0 * p.sigma);
    j_last = std::max<long>(j_last, static_cast<long>(std::ceil(n_dec / k)) + 1);
  }
  for (long j = 2; j <= j_last; ++j)
    if (!nonzero(static_cast<double>(j) * k)) return false;
  if (p.sigma == 0.0) {
    // n coth n is increasing and lam != 0, so f(jk) > f(k) = 0 for every j > 1
    return lam != 0.0;
  }
  // beyond j_last f is decreasing; once negative it stays negative
  for (long j = j_last;; ++j) {
    if (f(static_cast<double>(j) * k) < 0.0) return true;
    if (!nonzero(static_cast<double>(j) * k)) return false;
    if (j > j_last + 10000000L) return false;
  }
}

namespace {

int direction(const std::vector<double>& v) {
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) inc = false;
    if (!(v[i] < v[i - 1])) dec = false;
  }
  return inc ? 1 : (dec ? -1 : 0);
}

Monotonicity monotonicity_upto(const FluidParams& p, int kmax) {
  std::vector<double> l1(kmax), l2(kmax);
  for (int k = 1; k <= kmax; ++k) {
    const auto r = roots_real(k, p);
    l1[k - 1] = r.lambda1;
    l2[k - 1] = r.lambda2;
  }
  return {direction(l1), direction(l2)};
}

// For k >= K (tanh k = 1 to double precision) Lambda = -omega_bar/(2k) +- sqrt(R(k)),
// R(k) = g'/k + sigma' k + omega_bar^2/(4k^2). Certifies that both roots keep
// the direction they have at K for every k >= K.
bool tail_certificate(const FluidParams& p, double K) {
  const double gp = p.g * (p.rho - p.rho_bar) / p.rho_bar;
  const double sp = p.sigma / p.rho_bar;
  const double w = p.omega_bar;
  const double m = sp - gp / (K * K) - w * w / (2.0 * K * K * K);  // lower bound of R' on [K, inf)
  if (!(m > 0.0)) return false;
  const double R = gp / K + sp * K + w * w / (4.0 * K * K);
  // m k^2 / sqrt(R(k)) increases with k, so checking at K covers the tail
  return m * K * K > std::abs(w) * std::sqrt(R);
}

bool good_sigma(FluidParams p, double sigma, int k_max) {
  if (!(sigma > 0.0)) return false;
  p.sigma = sigma;
  int K = std::max(k_max, 21);
  while (!tail_certificate(p, K)) {
    if (K > (1 << 22)) return false;
    K *= 2;
  }
  const auto m = monotonicity_upto(p, K);
  return m.branch1 == -1 && m.branch2 == 1;
}

}  // namespace

Monotonicity observed_monotonicity(const FluidParams& params, int k_max) {
  require(k_max >= 2, ErrorCode::invalid_argument, "observed_monotonicity: k_max must be >= 2");
  params.validate();
  return monotonicity_upto(params, k_max);
}

double sigma_threshold(const FluidParams& params, int k_max) {
  require(k_max >= 2, ErrorCode::invalid_argument, "sigma_threshold: k_max must be >= 2");
  FluidParams p = params;
  p.sigma = 0.0;
  p.validate();

  double hi = 1e-6;
  while (!good_sigma(p, hi, k_max)) {
    hi *= 2.0;
    if (hi > 1e12) fail(ErrorCode::numerical_failure, "sigma_threshold: no admissible sigma found");
  }
  // coarse scan for the last inadmissible sigma below hi
  const int n = 400;
  double lo = 0.0;
  for (int j = 1; j < n; ++j) {
    const double s = hi * j / n;
    if (!good_sigma(p, s, k_max)) lo = s;
  }
  double up = lo + hi / n;
  if (lo == 0.0) up = std::min(up, hi);
  while (up - lo > 1e-7) {
    const double mid = 0.5 * (lo + up);
    if (good_sigma(p, mid, k_max)) {
      up = mid;
    } else {
      lo = mid;
    }
  }
  return up <= 1e-6 ? 0.0 : up;
}

VerticalProfile linear_vertical_profile(int k, double lambda, double omega_bar) {
  require(k >= 1, ErrorCode::invalid_argument, "linear_vertical_profile: k must be >= 1");
  const double kk = k;
  const double den = -std::expm1(-2.0 * kk);
  auto eval = [kk, den, lambda, omega_bar](double y) -> std::array<double, 3> {
    // (lambda/tanh k) sinh(ky) - lambda cosh(ky) = lambda sinh(k(y-1))/sinh k
    const double e1 = std::exp(kk * (y - 2.0)), e2 = std::exp(-kk * y);
    const double h0 = (e1 - e2) / den;
    const double h1 = kk * (e1 + e2) / den;
    const double h2 = kk * kk * h0;
    return {lambda * h0 + omega_bar * (y - y * y) + lambda * (1.0 - y),
            lambda * h1 + omega_bar * (1.0 - 2.0 * y) - lambda, lambda * h2 - 2.0 * omega_bar};
  };
  return VerticalProfile::closed_form("wbar_k", Interval::upper, eval);
}

double linear_profile_rhs(int k, double lambda, double omega_bar, double y) {
  return -2.0 * omega_bar - (1.0 - y) * (omega_bar * y + lambda) * k * k;
}

MultiplierBounds multiplier_bound_estimate(std::span<const double> M, double r, double s) {
  require(M.size() >= 3, ErrorCode::invalid_argument, "multiplier_bound_estimate: need at least 3 symbol values");
  require(r > 0 && s > 0, ErrorCode::invalid_argument, "multiplier_bound_estimate: r, s must be positive");
  require(r != std::floor(r) && s != std::floor(s), ErrorCode::invalid_argument,
          "multiplier_bound_estimate: r and s must be non-integers");
  MultiplierBounds b;
  b.sup0 = b.sup1 = b.sup2 = -1.0;
  const int P = static_cast<int>(M.size());
  for (int p = 1; p <= P; ++p) {
    const double v = std::pow(p, r - s) * std::abs(M[p - 1]);
    if (v > b.sup0) b.sup0 = v, b.argmax0 = p;
    if (p + 1 <= P) {
      const double v1 = std::pow(p, r - s + 1) * std::abs(M[p] - M[p - 1]);
      if (v1 > b.sup1) b.sup1 = v1, b.argmax1 = p;
    }
    if (p + 2 <= P) {
      const double v2 = std::pow(p, r - s + 2) * std::abs(M[p + 1] - 2.0 * M[p] + M[p - 1]);
      if (v2 > b.sup2) b.sup2 = v2, b.argmax2 = p;
    }
  }
  return b;
}

}  // namespace stratawave

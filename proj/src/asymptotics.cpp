#include "stratawave/asymptotics.hpp"

#include <cmath>

#include "stratawave/dispersion.hpp"
#include "stratawave/spectral.hpp"

namespace stratawave {

const char* to_string(AkVariant v) noexcept {
  return v == AkVariant::as_printed ? "as_printed" : "rho_bar_weighted";
}

AkVariant parse_ak_variant(const std::string& name) {
  if (name == "as_printed") return AkVariant::as_printed;
  if (name == "rho_bar_weighted") return AkVariant::rho_bar_weighted;
  fail(ErrorCode::invalid_argument, "unknown A_k variant: " + name);
}

double A_k_bracket(int k, double L, double wb) {
  const double kk = k;
  const double t1 = std::tanh(kk), t2 = std::tanh(2.0 * kk);
  const double a = kk * L / t1 + wb;
  return a * a + 4.0 * kk * kk * L * L / (t1 * t2) + 2.0 * kk * wb * L / t2 - 3.0 * kk * kk * L * L;
}

double A_k_value(int k, double Lambda, const FluidParams& p, AkVariant variant) {
  const double br = A_k_bracket(k, Lambda, p.omega_bar);
  const double weight = variant == AkVariant::rho_bar_weighted ? p.rho_bar : 1.0;
  return weight * br - p.rho * p.omega * p.omega;
}

ExpansionCoefficients second_order_coefficients(int k, int i, const FluidParams& params, AkVariant variant) {
  params.validate();
  ExpansionCoefficients c;
  c.k = k;
  c.i = i;
  c.variant = variant;
  c.Lambda = bifurcation_point(k, i, params);
  c.mu_2k = mu(2 * k, c.Lambda, params);
  const double scale = 2.0 * (std::abs(params.g * (params.rho_bar - params.rho)) + 4.0 * params.sigma * k * k +
                              std::abs(params.omega_bar * params.rho_bar * c.Lambda) +
                              params.rho_bar * k_coth(2.0 * k) * c.Lambda * c.Lambda);
  if (std::abs(c.mu_2k) <= 1e-10 * scale)
    fail(ErrorCode::degenerate_branch, "mu_2k vanishes at the bifurcation point: resonant branch");
  c.A_k = A_k_value(k, c.Lambda, params, variant);
  c.alpha_k = -c.A_k / (2.0 * c.mu_2k);
  c.transversality = transversality(k, i, params);
  return c;
}

BranchExpansion branch_expansion(int k, int i, const FluidParams& params, double s, AkVariant variant,
                                 std::size_t harmonics) {
  require(std::isfinite(s), ErrorCode::invalid_argument, "branch_expansion: s must be finite");
  const auto c = second_order_coefficients(k, i, params, variant);
  std::vector<double> a(std::max<std::size_t>(harmonics, 2), 0.0);
  a[0] = -s;
  a[1] = c.alpha_k * s * s;
  if (std::abs(s) + std::abs(a[1]) >= 1.0)
    fail(ErrorCode::amplitude_too_large, "branch_expansion: |eta| >= 1 for this amplitude");
  try {
    return {c.Lambda, WaveProfile(k, std::move(a))};
  } catch (const Error& e) {
    fail(ErrorCode::amplitude_too_large, e.what());
  }
}

namespace {

// sinh(k(y-1))/sinh k and cosh(k(y-1))/sinh k on [0, 1] without overflow
struct UpperHyperbolic {
  double S, C;
};
UpperHyperbolic upper_hyp(double k, double y) {
  const double den = -std::expm1(-2.0 * k);
  const double e1 = std::exp(k * (y - 2.0)), e2 = std::exp(-k * y);
  return {(e1 - e2) / den, (e1 + e2) / den};
}

// sinh(2k(1+y))/sinh 2k and its derivatives on [-1, 0]
std::array<double, 3> lower_H(double k, double y) {
  const double den = -std::expm1(-4.0 * k);
  const double e1 = std::exp(2.0 * k * y), e2 = std::exp(-2.0 * k * (2.0 + y));
  const double h = (e1 - e2) / den;
  const double hp = 2.0 * k * (e1 + e2) / den;
  return {h, hp, 4.0 * k * k * h};
}

}  // namespace

VerticalProfile beta_profile(int k) {
  require(k >= 1, ErrorCode::invalid_argument, "beta_profile: k must be >= 1");
  const double kk = k;
  return VerticalProfile::closed_form("beta_k", Interval::lower, [kk](double y) -> std::array<double, 3> {
    const auto H = lower_H(kk, y);
    const double a = 1.0 + y;
    return {-0.5 * (H[0] - a * a), -0.5 * (H[1] - 2.0 * a), -0.5 * (H[2] - 2.0)};
  });
}

VerticalProfile f_profile(int k) {
  require(k >= 1, ErrorCode::invalid_argument, "f_profile: k must be >= 1");
  const double kk = k;
  return VerticalProfile::closed_form("f_k", Interval::lower, [kk](double y) -> std::array<double, 3> {
    const auto H = lower_H(kk, y);
    return {0.5 * kk * H[0], 0.5 * kk * H[1], 0.5 * kk * H[2]};
  });
}

VerticalProfile f_profile_expanded(int k) {
  require(k >= 1, ErrorCode::invalid_argument, "f_profile_expanded: k must be >= 1");
  const double kk = k;
  return VerticalProfile::closed_form("f_k_expanded", Interval::lower, [kk](double y) -> std::array<double, 3> {
    const double t = std::tanh(2.0 * kk);
    const double sh = std::sinh(2.0 * kk * y), ch = std::cosh(2.0 * kk * y);
    const double v = sh / t + ch;
    const double vp = 2.0 * kk * (ch / t + sh);
    return {0.5 * kk * v, 0.5 * kk * vp, 0.5 * kk * 4.0 * kk * kk * v};
  });
}

double c_slope0_formula(int k, double L, double wb) { return -double(k) * k * L - 0.5 * wb; }

double d_slope0_formula(int k, double L, double wb) {
  const double kk = k;
  const double t1 = std::tanh(kk), t2 = std::tanh(2.0 * kk);
  return -kk * kk * L - kk * L / t1 + 2.0 * kk * kk * L / (t1 * t2) - wb + kk * wb / t2;
}

UpperSecondOrder upper_second_order_profiles(int k, double L, double wb, int intervals) {
  require(k >= 1, ErrorCode::invalid_argument, "upper_second_order_profiles: k must be >= 1");
  require(intervals >= 512, ErrorCode::invalid_argument, "upper_second_order_profiles: need >= 512 intervals");
  const double kk = k;
  auto E0 = [kk, L, wb](double y) -> std::array<double, 3> {
    const auto h = upper_hyp(kk, y);
    const double a = 1.0 - y, k2 = kk * kk, k3 = k2 * kk, k4 = k3 * kk, k5 = k4 * kk;
    return {-wb + 2.0 * k2 * L * h.S - a * k3 * L * h.C, 3.0 * k3 * L * h.C - a * k4 * L * h.S,
            4.0 * k4 * L * h.S - a * k5 * L * h.C};
  };
  auto E2 = [kk, L, wb](double y) -> std::array<double, 3> {
    const auto h = upper_hyp(kk, y);
    const double a = 1.0 - y, k2 = kk * kk, k3 = k2 * kk, k4 = k3 * kk, k5 = k4 * kk;
    return {-wb + 2.0 * k2 * wb * a * a + 2.0 * k2 * L * h.S + 3.0 * a * k3 * L * h.C,
            -4.0 * k2 * wb * a - k3 * L * h.C + 3.0 * a * k4 * L * h.S,
            4.0 * k2 * wb - 4.0 * k4 * L * h.S - 3.0 * a * k5 * L * h.C};
  };
  UpperSecondOrder out{VerticalProfile::closed_form("E_0", Interval::upper, E0),
                       VerticalProfile::closed_form("E_2k", Interval::upper, E2),
                       VerticalProfile::closed_form("c_k", Interval::upper, [](double) { return std::array<double, 3>{}; }),
                       VerticalProfile::closed_form("d_k", Interval::upper, [](double) { return std::array<double, 3>{}; })};
  const auto c = spectral::solve_numerov(0.0, 1.0, 0.0, [&](double y) { return -E0(y)[0]; }, intervals);
  const auto d = spectral::solve_numerov(0.0, 1.0, 4.0 * kk * kk, [&](double y) { return -E2(y)[0]; }, intervals);
  out.c_k = VerticalProfile::sampled("c_k", Interval::upper, c.values, 5);
  out.d_k = VerticalProfile::sampled("d_k", Interval::upper, d.values, 5);
  out.c_slope0 = c.slope_a;
  out.d_slope0 = d.slope_a;
  out.c_slope0_closed = c_slope0_formula(k, L, wb);
  out.d_slope0_closed = d_slope0_formula(k, L, wb);
  return out;
}

// ---------------------------------------------------------------------------

AsymptoticField::AsymptoticField(Layer layer, int k, int i, const FluidParams& params, double s,
                                 std::optional<double> lambda, AkVariant variant)
    : layer_(layer), k_(k), params_(params), s_(s) {
  coeffs_ = second_order_coefficients(k, i, params, variant);
  lambda_ = lambda.value_or(coeffs_.Lambda);
  profile_ = branch_expansion(k, i, params, s, variant).profile;
  if (layer == Layer::lower) {
    beta_ = beta_profile(k);
  } else {
    wk_ = linear_vertical_profile(k, coeffs_.Lambda, params.omega_bar);
    w2k_ = linear_vertical_profile(2 * k, coeffs_.Lambda, params.omega_bar);
    auto up = upper_second_order_profiles(k, coeffs_.Lambda, params.omega_bar);
    c_ = std::move(up.c_k);
    d_ = std::move(up.d_k);
  }
}

Derivatives AsymptoticField::reference(double x, double y) const {
  const double k = k_, s = s_, s2 = s * s, al = coeffs_.alpha_k;
  const double C1 = std::cos(k * x), S1 = std::sin(k * x);
  const double C2 = std::cos(2.0 * k * x), S2 = std::sin(2.0 * k * x);
  Derivatives d;
  if (layer_ == Layer::lower) {
    const double w = params_.omega;
    const double q = y * y + y, q1 = 2.0 * y + 1.0, q2 = 2.0;
    const auto b = beta_->evaluate(y);
    // mode-2 vertical factor and its derivatives
    const double m0 = al * q + 0.5 * b[0], m1 = al * q1 + 0.5 * b[1], m2 = al * q2 + 0.5 * b[2];
    d.f = w * (0.5 * y * y - s * q * C1 + s2 * (0.25 * q + m0 * C2));
    d.fy = w * (y - s * q1 * C1 + s2 * (0.25 * q1 + m1 * C2));
    d.fyy = w * (1.0 - s * q2 * C1 + s2 * (0.25 * q2 + m2 * C2));
    d.fx = w * (s * q * k * S1 - s2 * m0 * 2.0 * k * S2);
    d.fxy = w * (s * q1 * k * S1 - s2 * m1 * 2.0 * k * S2);
    d.fxx = w * (s * q * k * k * C1 - s2 * m0 * 4.0 * k * k * C2);
  } else {
    const double wb = params_.omega_bar, lam = lambda_;
    const auto W1 = wk_->evaluate(y);
    const auto W2 = w2k_->evaluate(y);
    const auto c = c_->evaluate(y);
    const auto dd = d_->evaluate(y);
    const double m0 = al * W2[0] + 0.5 * dd[0], m1 = al * W2[1] + 0.5 * dd[1], m2 = al * W2[2] + 0.5 * dd[2];
    d.f = 0.5 * wb * y * y + lam * y - s * W1[0] * C1 + s2 * (0.5 * c[0] + m0 * C2);
    d.fy = wb * y + lam - s * W1[1] * C1 + s2 * (0.5 * c[1] + m1 * C2);
    d.fyy = wb - s * W1[2] * C1 + s2 * (0.5 * c[2] + m2 * C2);
    d.fx = s * W1[0] * k * S1 - s2 * m0 * 2.0 * k * S2;
    d.fxy = s * W1[1] * k * S1 - s2 * m1 * 2.0 * k * S2;
    d.fxx = s * W1[0] * k * k * C1 - s2 * m0 * 4.0 * k * k * C2;
  }
  return d;
}

FieldGrid sample_field(const StreamFunction& field, const FieldSpec& spec, bool pushforward) {
  require(spec.nx >= 2 && spec.nx % 2 == 0 && spec.ny >= 2, ErrorCode::invalid_argument,
          "sample_field: nx must be even and positive, ny >= 2");
  FieldGrid g;
  g.layer = field.layer();
  g.nx = spec.nx;
  g.ny = spec.ny;
  const double P = field.profile().period();
  g.x.resize(g.nx);
  g.y.resize(g.ny);
  for (int i = 0; i < g.nx; ++i) g.x[i] = P * i / g.nx;
  for (int j = 0; j < g.ny; ++j) g.y[j] = field.y_min() + (field.y_max() - field.y_min()) * j / (g.ny - 1);
  g.y.back() = field.y_max();
  g.values.resize(static_cast<std::size_t>(g.nx) * g.ny);
  g.pushforward = pushforward;
  if (pushforward) g.physical_y.resize(g.values.size());
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      g.at(i, j) = field.reference(g.x[i], g.y[j]).f;
      if (pushforward) g.physical_y[static_cast<std::size_t>(i) * g.ny + j] = field.to_physical(g.x[i], g.y[j]);
    }
  }
  return g;
}

FieldGrid lower_field_expansion(int k, int i, const FluidParams& params, double s, const FieldSpec& spec,
                                bool pushforward, AkVariant variant) {
  return sample_field(AsymptoticField(Layer::lower, k, i, params, s, std::nullopt, variant), spec, pushforward);
}

FieldGrid upper_field_expansion(int k, int i, const FluidParams& params, double s, const FieldSpec& spec,
                                bool pushforward, std::optional<double> lambda, AkVariant variant) {
  return sample_field(AsymptoticField(Layer::upper, k, i, params, s, lambda, variant), spec, pushforward);
}

FieldGrid lower_field_x_derivative_expansion(int k, int i, const FluidParams& params, double s,
                                             const FieldSpec& spec, AkVariant variant) {
  const AsymptoticField field(Layer::lower, k, i, params, s, std::nullopt, variant);
  FieldGrid g = sample_field(field, spec, true);
  const auto f = f_profile(k);
  for (int a = 0; a < g.nx; ++a) {
    for (int b = 0; b < g.ny; ++b) {
      const double Y = g.physical_y[static_cast<std::size_t>(a) * g.ny + b];
      g.at(a, b) = params.omega * f(Y) * std::sin(2.0 * k * g.x[a]) * s * s;
    }
  }
  return g;
}

}  // namespace stratawave

#include "stratawave/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratawave/spectral.hpp"

namespace stratawave {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::degenerate_branch: return "degenerate-branch";
    case ErrorCode::amplitude_too_large: return "amplitude-too-large";
    case ErrorCode::invalid_profile: return "invalid-profile";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::setup_error: return "setup-error";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

const char* to_string(Layer layer) noexcept { return layer == Layer::lower ? "lower" : "upper"; }

void FluidParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(rho) && finite(rho_bar) && finite(g) && finite(sigma) && finite(omega) &&
              finite(omega_bar) && finite(wave_speed),
          ErrorCode::invalid_argument, "fluid parameters must be finite");
  require(rho > 0 && rho_bar > 0, ErrorCode::invalid_argument, "densities must be positive");
  require(g > 0, ErrorCode::invalid_argument, "gravity must be positive");
  require(sigma >= 0, ErrorCode::invalid_argument, "surface tension must be nonnegative");
  require(wave_speed > 0, ErrorCode::invalid_argument, "wave speed must be positive");
  require(rho > rho_bar, ErrorCode::domain_error, "unstable stratification: need rho > rho_bar");
}

// ---------------------------------------------------------------------------

WaveProfile::WaveProfile(int k, std::vector<double> coeffs) : k_(k), coeffs_(std::move(coeffs)) {
  require(k_ >= 1, ErrorCode::invalid_profile, "wave profile: k must be >= 1");
  for (double c : coeffs_) require(std::isfinite(c), ErrorCode::invalid_profile, "wave profile: non-finite coefficient");
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  const double sup = sup_norm();
  if (!(sup < 1.0)) {
    std::ostringstream os;
    os << "wave profile leaves the strip: sup|eta| = " << sup;
    fail(ErrorCode::invalid_profile, os.str());
  }
}

WaveProfile WaveProfile::flat(int k, std::size_t harmonics) {
  return WaveProfile(k, std::vector<double>(std::max<std::size_t>(harmonics, 1), 0.0));
}

double WaveProfile::coeff(std::size_t j) const noexcept {
  return (j >= 1 && j <= coeffs_.size()) ? coeffs_[j - 1] : 0.0;
}

std::array<double, 3> WaveProfile::evaluate(double x) const {
  // cos(j k x), sin(j k x) by the angle-addition recurrence
  const double c1 = std::cos(k_ * x), s1 = std::sin(k_ * x);
  double c = c1, s = s1;
  double e = 0.0, d = 0.0, dd = 0.0;
  for (std::size_t j = 1; j <= coeffs_.size(); ++j) {
    const double a = coeffs_[j - 1];
    const double jk = static_cast<double>(j) * k_;
    e += a * c;
    d -= a * jk * s;
    dd -= a * jk * jk * c;
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
  }
  return {e, d, dd};
}

double WaveProfile::operator()(double x) const { return evaluate(x)[0]; }
double WaveProfile::derivative(double x) const { return evaluate(x)[1]; }
double WaveProfile::second_derivative(double x) const { return evaluate(x)[2]; }

double WaveProfile::sup_norm() const {
  const int n = std::max<int>(64, 16 * static_cast<int>(coeffs_.size()));
  // eta is even and periodic: half a period suffices
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::abs((*this)(pi / k_ * i / n)));
  return m;
}

bool WaveProfile::is_flat() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

WaveProfile WaveProfile::with_harmonics(std::size_t n) const {
  std::vector<double> c(std::max<std::size_t>(n, 1), 0.0);
  for (std::size_t j = 0; j < std::min(c.size(), coeffs_.size()); ++j) c[j] = coeffs_[j];
  return WaveProfile(k_, std::move(c));
}

// ---------------------------------------------------------------------------

CosineSeriesOps cosine_series_ops(const WaveProfile& profile, int samples) {
  require(samples >= 4, ErrorCode::invalid_argument, "cosine_series_ops: too few samples");
  CosineSeriesOps ops;
  const int k = profile.k();
  ops.derivative.k = k;
  ops.second_derivative.k = k;
  for (std::size_t j = 1; j <= profile.harmonics(); ++j) {
    const double jk = static_cast<double>(j) * k;
    ops.derivative.coeffs.push_back(-jk * profile.coeff(j));
    ops.second_derivative.coeffs.push_back(-jk * jk * profile.coeff(j));
  }
  ops.x.resize(samples);
  ops.curvature_term.resize(samples);
  for (int i = 0; i < samples; ++i) {
    ops.x[i] = profile.period() * i / samples;
    const auto e = profile.evaluate(ops.x[i]);
    ops.curvature_term[i] = e[2] / std::pow(1.0 + e[1] * e[1], 1.5);
  }
  return ops;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

double periodic_mean(std::span<const double> samples) {
  require(!samples.empty(), ErrorCode::invalid_argument, "mean of empty sample set");
  return pairwise_sum(samples) / static_cast<double>(samples.size());
}

std::vector<double> project_mean_zero(std::span<const double> samples) {
  require(!samples.empty(), ErrorCode::invalid_argument, "project_mean_zero: empty input");
  const double m = periodic_mean(samples);
  std::vector<double> out(samples.begin(), samples.end());
  for (double& v : out) v -= m;
  return out;
}

std::vector<double> cosine_coefficients(std::span<const double> samples, int n, int periods) {
  const std::size_t m = samples.size();
  require(m > 0 && n >= 0 && periods >= 1, ErrorCode::invalid_argument, "cosine_coefficients: bad input");
  std::vector<double> out(n, 0.0);
  std::vector<double> terms(m);
  for (int j = 1; j <= n; ++j) {
    const long harmonic = static_cast<long>(j) * periods;
    for (std::size_t i = 0; i < m; ++i) {
      const long r = (harmonic * static_cast<long>(i)) % static_cast<long>(m);
      terms[i] = samples[i] * std::cos(2.0 * pi * static_cast<double>(r) / static_cast<double>(m));
    }
    // Nyquist harmonic carries weight 1 instead of 2
    const double w = (2 * harmonic == static_cast<long>(m)) ? 1.0 : 2.0;
    out[j - 1] = 2 * harmonic > static_cast<long>(m) ? 0.0 : w * pairwise_sum(terms) / static_cast<double>(m);
  }
  return out;
}

// ---------------------------------------------------------------------------

VerticalProfile VerticalProfile::closed_form(std::string tag, Interval domain, Evaluator eval) {
  require(static_cast<bool>(eval), ErrorCode::invalid_argument, "closed-form profile needs an evaluator");
  return VerticalProfile(std::move(tag), domain, std::move(eval));
}

VerticalProfile VerticalProfile::sampled(std::string tag, Interval domain, std::vector<double> samples,
                                         int order) {
  require(order >= 3, ErrorCode::invalid_argument, "sampled profile: interpolation order must be >= 3");
  require(samples.size() >= static_cast<std::size_t>(order + 1), ErrorCode::invalid_argument,
          "sampled profile: fewer samples than interpolation order");
  for (double v : samples) require(std::isfinite(v), ErrorCode::invalid_argument, "sampled profile: non-finite sample");
  return VerticalProfile(std::move(tag), domain, Samples{std::move(samples), order});
}

std::array<double, 3> VerticalProfile::evaluate(double y) const {
  if (const auto* f = std::get_if<Evaluator>(&rep_)) return (*f)(y);
  const auto& s = std::get<Samples>(rep_);
  const int n = static_cast<int>(s.values.size()) - 1;
  const double h = (hi() - lo()) / n;
  const int npts = s.order + 1;
  int first = static_cast<int>(std::floor((y - lo()) / h)) - (npts - 1) / 2;
  first = std::clamp(first, 0, n + 1 - npts);
  std::vector<double> nodes(npts);
  for (int j = 0; j < npts; ++j) nodes[j] = lo() + (first + j) * h;
  const auto w = spectral::fornberg_weights(y, nodes, 2);
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int d = 0; d < 3; ++d)
    for (int j = 0; j < npts; ++j) out[d] += w(d, j) * s.values[first + j];
  return out;
}

double VerticalProfile::derivative(double y, int order) const {
  require(order >= 0 && order <= 2, ErrorCode::invalid_argument, "VerticalProfile: derivative order 0..2");
  return evaluate(y)[order];
}

std::span<const double> VerticalProfile::samples() const {
  if (const auto* s = std::get_if<Samples>(&rep_)) return s->values;
  return {};
}

}  // namespace stratawave

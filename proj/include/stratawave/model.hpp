#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stratawave/error.hpp"

namespace stratawave {

inline constexpr double pi = 3.14159265358979323846;

/// Physical constants of the two-layer system. The wave speed never enters a
/// computation; it is carried along for display and for reconstructing u = c + psi_y.
struct FluidParams {
  double rho = 2.0;        // lower density
  double rho_bar = 1.0;    // upper density
  double g = 9.8;
  double sigma = 0.0;      // surface tension
  double omega = 1.0;      // lower vorticity
  double omega_bar = 0.0;  // upper vorticity
  double wave_speed = 1.0;

  // Throws invalid_argument for non-finite or non-positive entries and
  // domain_error when the stratification is not stable (rho <= rho_bar).
  void validate() const;
};

/// Even, mean-zero, 2pi/k-periodic interface eta(x) = sum_j a_j cos(j k x).
/// coeffs[0] holds a_1.
class WaveProfile {
 public:
  WaveProfile() = default;

  // Validates k >= 1, finite coefficients and sup|eta| < 1 (invalid_profile).
  WaveProfile(int k, std::vector<double> coeffs);

  static WaveProfile flat(int k, std::size_t harmonics = 1);

  int k() const noexcept { return k_; }
  std::size_t harmonics() const noexcept { return coeffs_.size(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  // a_j for j >= 1; zero beyond the stored range.
  double coeff(std::size_t j) const noexcept;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  // {eta, eta', eta''} in one pass.
  std::array<double, 3> evaluate(double x) const;

  double period() const noexcept { return 2.0 * pi / k_; }
  // Sampled maximum of |eta| on a grid fine enough for the stored harmonics.
  double sup_norm() const;
  bool is_flat() const noexcept;

  WaveProfile with_harmonics(std::size_t n) const;

 private:
  int k_ = 1;
  std::vector<double> coeffs_;
};

struct SineSeries {
  int k = 1;
  std::vector<double> coeffs;  // b_j multiplying sin(j k x), j >= 1
};

struct CosineSeries {
  int k = 1;
  std::vector<double> coeffs;  // c_j multiplying cos(j k x), j >= 1
};

struct CosineSeriesOps {
  SineSeries derivative;
  CosineSeries second_derivative;
  std::vector<double> x;               // uniform grid over one period
  std::vector<double> curvature_term;  // eta'' / (1 + eta'^2)^{3/2} on x
};

CosineSeriesOps cosine_series_ops(const WaveProfile& profile, int samples = 256);

std::vector<double> project_mean_zero(std::span<const double> samples);

// Arithmetic mean, summed pairwise for reproducibility.
double periodic_mean(std::span<const double> samples);
double pairwise_sum(std::span<const double> values);

// Cosine coefficients c_j (j = 1..n) of uniform samples over `periods` copies
// of one period 2pi/k: f ~ c_0 + sum c_j cos(j k x).
std::vector<double> cosine_coefficients(std::span<const double> samples, int n, int periods = 1);

enum class Interval { lower, upper };  // [-1, 0] and [0, 1]

/// A function of the vertical coordinate, either in closed form or as uniform
/// samples interpolated with local Lagrange polynomials.
class VerticalProfile {
 public:
  // Returns {f, f', f''} at y.
  using Evaluator = std::function<std::array<double, 3>(double)>;

  static VerticalProfile closed_form(std::string tag, Interval domain, Evaluator eval);
  // samples[i] at y = a + i h across the interval; order >= 3.
  static VerticalProfile sampled(std::string tag, Interval domain, std::vector<double> samples,
                                 int order = 5);

  const std::string& tag() const noexcept { return tag_; }
  Interval domain() const noexcept { return domain_; }
  bool is_sampled() const noexcept { return std::holds_alternative<Samples>(rep_); }
  double lo() const noexcept { return domain_ == Interval::lower ? -1.0 : 0.0; }
  double hi() const noexcept { return domain_ == Interval::lower ? 0.0 : 1.0; }

  double operator()(double y) const { return evaluate(y)[0]; }
  double derivative(double y, int order = 1) const;
  std::array<double, 3> evaluate(double y) const;

  std::span<const double> samples() const;

 private:
  struct Samples {
    std::vector<double> values;
    int order;
  };

  VerticalProfile(std::string tag, Interval domain, std::variant<Evaluator, Samples> rep)
      : tag_(std::move(tag)), domain_(domain), rep_(std::move(rep)) {}

  std::string tag_;
  Interval domain_;
  std::variant<Evaluator, Samples> rep_;
};

enum class Layer { lower, upper };

const char* to_string(Layer layer) noexcept;

/// Stream-function samples of one layer. Coordinates are on the fixed
/// rectangle unless `pushforward` is set, in which case `y` per column is the
/// physical height y + (1 +- y) eta(x) stored in `physical_y`.
struct FieldGrid {
  Layer layer = Layer::lower;
  int nx = 0;
  int ny = 0;
  std::vector<double> x;           // nx uniform nodes over one period
  std::vector<double> y;           // ny reference heights
  std::vector<double> values;      // values[i * ny + j]
  bool pushforward = false;
  std::vector<double> physical_y;  // nx * ny when pushforward

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * ny + j]; }
};

struct BranchId {
  int k = 1;
  int i = 1;
};

struct BranchPoint {
  double s = 0.0;
  double lambda = 0.0;
  WaveProfile profile;
  double residual = 0.0;
  BranchId branch_id;
};

}  // namespace stratawave

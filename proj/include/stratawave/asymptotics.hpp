#pragma once

#include <optional>

#include "stratawave/model.hpp"
#include "stratawave/stream_function.hpp"

namespace stratawave {

// as_printed: bracket - rho omega^2.  rho_bar_weighted: rho_bar * bracket - rho omega^2.
enum class AkVariant { as_printed, rho_bar_weighted };

// Selected by comparison with the finite-difference Hessian of Psi.
inline constexpr AkVariant default_ak_variant = AkVariant::rho_bar_weighted;

const char* to_string(AkVariant v) noexcept;
AkVariant parse_ak_variant(const std::string& name);

struct ExpansionCoefficients {
  int k = 1;
  int i = 1;
  double Lambda = 0.0;
  double A_k = 0.0;
  double alpha_k = 0.0;
  double transversality = 0.0;
  double mu_2k = 0.0;
  AkVariant variant = default_ak_variant;
};

// (k Lambda/tanh k + omega_bar)^2 + 4k^2 Lambda^2/(tanh k tanh 2k) + 2k omega_bar Lambda/tanh 2k - 3k^2 Lambda^2
double A_k_bracket(int k, double Lambda, double omega_bar);
double A_k_value(int k, double Lambda, const FluidParams& params, AkVariant variant);

ExpansionCoefficients second_order_coefficients(int k, int i, const FluidParams& params,
                                                AkVariant variant = default_ak_variant);

struct BranchExpansion {
  double lambda = 0.0;
  WaveProfile profile;
};

// eta = -s cos(kx) + alpha_k s^2 cos(2kx), lambda = Lambda.
BranchExpansion branch_expansion(int k, int i, const FluidParams& params, double s,
                                 AkVariant variant = default_ak_variant, std::size_t harmonics = 2);

VerticalProfile beta_profile(int k);
// k sinh(2k(1+y)) / (2 sinh 2k) and its expanded form (k/2)(sinh(2ky)/tanh 2k + cosh 2ky).
VerticalProfile f_profile(int k);
VerticalProfile f_profile_expanded(int k);

struct UpperSecondOrder {
  VerticalProfile E0, E2k, c_k, d_k;
  double c_slope0 = 0.0;          // from the BVP solve
  double d_slope0 = 0.0;
  double c_slope0_closed = 0.0;   // closed forms of the same slopes
  double d_slope0_closed = 0.0;
};

UpperSecondOrder upper_second_order_profiles(int k, double Lambda, double omega_bar, int intervals = 2048);

double c_slope0_formula(int k, double Lambda, double omega_bar);
double d_slope0_formula(int k, double Lambda, double omega_bar);

/// The second-order asymptotic stream function of one layer on branch (k, i).
/// For the upper layer `lambda` replaces Lambda in the laminar part.
class AsymptoticField : public StreamFunction {
 public:
  AsymptoticField(Layer layer, int k, int i, const FluidParams& params, double s,
                  std::optional<double> lambda = std::nullopt, AkVariant variant = default_ak_variant);

  Layer layer() const override { return layer_; }
  const WaveProfile& profile() const override { return profile_; }
  Derivatives reference(double x, double y) const override;

  const ExpansionCoefficients& coefficients() const noexcept { return coeffs_; }
  double s() const noexcept { return s_; }
  double lambda() const noexcept { return lambda_; }

 private:
  Layer layer_;
  int k_;
  FluidParams params_;
  double s_;
  double lambda_;
  ExpansionCoefficients coeffs_;
  WaveProfile profile_;
  std::optional<VerticalProfile> beta_, wk_, w2k_, c_, d_;
};

struct FieldSpec {
  int nx = 128;  // uniform over one period [0, 2pi/k)
  int ny = 65;   // uniform over the layer, endpoints included
};

// Samples on the fixed rectangle; `pushforward` also fills physical heights.
FieldGrid sample_field(const StreamFunction& field, const FieldSpec& spec, bool pushforward = false);

FieldGrid lower_field_expansion(int k, int i, const FluidParams& params, double s, const FieldSpec& spec,
                                bool pushforward = false, AkVariant variant = default_ak_variant);
FieldGrid upper_field_expansion(int k, int i, const FluidParams& params, double s, const FieldSpec& spec,
                                bool pushforward = false, std::optional<double> lambda = std::nullopt,
                                AkVariant variant = default_ak_variant);
// psi_x ~ omega f_k(Y) sin(2kx) s^2 at the physical points of the pushforward grid.
FieldGrid lower_field_x_derivative_expansion(int k, int i, const FluidParams& params, double s,
                                             const FieldSpec& spec, AkVariant variant = default_ak_variant);

}  // namespace stratawave

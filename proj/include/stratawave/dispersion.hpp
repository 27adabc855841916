#pragma once

#include <span>
#include <vector>

#include "stratawave/model.hpp"

namespace stratawave {

// k / tanh(k) without overflow for large k.
double k_coth(double k);

/// mu_k(lambda) = 2[g(rho_bar - rho) - sigma k^2 + omega_bar rho_bar lambda + rho_bar (k/tanh k) lambda^2]
double mu(int k, double lambda, const FluidParams& params);
// Same symbol with a real wavenumber; used by scans and tail arguments.
double mu_real(double k, double lambda, const FluidParams& params);
// d mu_k / d lambda.
double mu_lambda(int k, double lambda, const FluidParams& params);

struct BifurcationPoints {
  double lambda1 = 0.0;  // minus root
  double lambda2 = 0.0;  // plus root
  double operator[](int i) const { return i == 1 ? lambda1 : lambda2; }
};

BifurcationPoints bifurcation_points(int k, const FluidParams& params);
double bifurcation_point(int k, int i, const FluidParams& params);

// Coefficient of cos(kx) in the mixed derivative of Psi at (Lambda_k^i, 0).
double transversality(int k, int i, const FluidParams& params);

bool kernel_is_simple(int k, int i, const FluidParams& params, int j_max);

// Observed direction of (Lambda_k^i)_{k=1..k_max}: +1 increasing, -1 decreasing, 0 neither.
struct Monotonicity {
  int branch1 = 0;
  int branch2 = 0;
};
Monotonicity observed_monotonicity(const FluidParams& params, int k_max);

// Smallest sigma_0 such that both sequences of bifurcation points are strictly
// monotone for every sigma > sigma_0. `params.sigma` is ignored.
double sigma_threshold(const FluidParams& params, int k_max);

// Closed form of the linearized upper vertical profile on [0, 1].
VerticalProfile linear_vertical_profile(int k, double lambda, double omega_bar);
// Right-hand side b_k(y) of the ODE it solves.
double linear_profile_rhs(int k, double lambda, double omega_bar, double y);

struct MultiplierBounds {
  double sup0 = 0.0, sup1 = 0.0, sup2 = 0.0;
  int argmax0 = 0, argmax1 = 0, argmax2 = 0;  // p attaining each sup
};

// symbol[p - 1] = M_p, p = 1..P.
MultiplierBounds multiplier_bound_estimate(std::span<const double> symbol, double r, double s);

}  // namespace stratawave

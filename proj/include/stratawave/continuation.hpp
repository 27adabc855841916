#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stratawave/asymptotics.hpp"
#include "stratawave/elliptic.hpp"
#include "stratawave/model.hpp"

namespace stratawave {

struct NewtonOptions {
  double tol = 1e-9;          // sup-norm of Psi
  int max_iter = 25;
  std::size_t harmonics = 32;  // N: unknowns lambda, a_2..a_N
  GridSpec grid{};
  double contraction = 0.5;    // refresh the Jacobian when the residual ratio exceeds this
  double max_correction = 0.5; // total move allowed away from the guess (sup over unknowns)
  double tail_ratio = 1e-10;   // |a_N| / |a_1| accepted without doubling N
  AkVariant variant = default_ak_variant;
};

struct NewtonReport {
  int iterations = 0;
  int jacobian_builds = 0;
  std::vector<double> residuals;    // sup|Psi| per iterate, starting with the guess
  std::vector<double> corrections;  // sup-norm of each update
};

// Jacobian of the cosine coefficients of Psi with respect to (lambda, a_2..a_N),
// kept between calls so that successive corrections can reuse it.
struct NewtonWorkspace {
  Eigen::MatrixXd jacobian;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  bool valid = false;
};

BranchPoint newton_correct(double lambda_guess, const WaveProfile& profile_guess, double s, const FluidParams& params,
                           BranchId id, const NewtonOptions& options = {}, NewtonReport* report = nullptr,
                           NewtonWorkspace* workspace = nullptr);

struct Branch {
  BranchId branch_id;
  std::vector<BranchPoint> points;
  std::vector<int> iterations;
  double achieved_s = 0.0;
  bool reached_s_max = false;
  std::string stop_reason;
  std::size_t harmonics = 0;
};

Branch trace_branch(int k, int i, const FluidParams& params, double s_max, double ds,
                    const NewtonOptions& options = {});

struct AnalyticityFit {
  double C = 0.0;
  double r = 0.0;
  double r_squared = 0.0;
  int harmonics_used = 0;
};

// Least-squares fit of log|a_j| = log C + j log r over harmonics above
// `floor_rel * max|a_j|`.
AnalyticityFit analyticity_fit(const WaveProfile& profile, double floor_rel = 1e-11);

// eta' > 0 on (0, pi/k) sampled at `samples` points.
bool single_crest(const WaveProfile& profile, int samples = 1024);

}  // namespace stratawave

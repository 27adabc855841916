#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "stratawave/model.hpp"
#include "stratawave/stream_function.hpp"

namespace stratawave {

/// Fourier nodes in x over `periods` copies of 2pi/k, Chebyshev-Gauss-Lobatto
/// nodes in y. nx must be a power of two, ny >= 5.
struct GridSpec {
  int nx = 128;
  int ny = 33;
  int periods = 1;
  double tol = 1e-13;  // relative, on the preconditioned residual
  int max_iter = 600;
  int restart = 60;

  void validate() const;
};

struct OperatorCoefficients {
  double cxy = 0.0;
  double cyy = 1.0;
  double cyy_minus_one = 0.0;  // cyy - 1 without cancellation
  double cy = 0.0;
};

// Pointwise coefficients of the transformed operator
// w_xx + cxy w_xy + cyy w_yy + cy w_y at reference height y.
OperatorCoefficients operator_coefficients(Layer layer, double eta, double deta, double ddeta, double y);

struct TransformedOperator {
  Layer layer = Layer::lower;
  WaveProfile profile;
  int nx = 0, ny = 0;
  std::vector<double> x;  // nx
  std::vector<double> y;  // ny, y[0] = 0 is the interface
  // coefficient grids, index j * nx + i
  std::vector<double> cxy, cyy, cyy_minus_one, cy;
};

TransformedOperator build_operator(Layer layer, const WaveProfile& profile, const GridSpec& grid);

namespace detail {
struct Discretization;
}

class LayerSolution : public StreamFunction {
 public:
  LayerSolution(Layer layer, WaveProfile profile, double lambda, GridSpec grid,
                std::shared_ptr<const detail::Discretization> disc, std::vector<double> w, int iterations,
                double residual);

  Layer layer() const override { return layer_; }
  const WaveProfile& profile() const override { return profile_; }
  Derivatives reference(double x, double y) const override;

  double lambda() const noexcept { return lambda_; }
  const GridSpec& grid() const noexcept { return grid_; }
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

  // Node values, index j * nx + i (row j = reference height y[j]).
  const std::vector<double>& values() const noexcept { return w_; }
  const std::vector<double>& x() const;
  const std::vector<double>& y() const;
  // y-derivative on the interface row y = 0, one entry per x node.
  std::vector<double> trace_wy() const;
  std::vector<double> trace_wx() const;

  FieldGrid field_grid() const;

 private:
  Layer layer_;
  WaveProfile profile_;
  double lambda_;
  GridSpec grid_;
  std::shared_ptr<const detail::Discretization> disc_;
  std::vector<double> w_;
  int iterations_;
  double residual_;
  // Chebyshev-Fourier coefficients of w, w_t, w_tt: row n (degree), column m (mode)
  std::vector<std::complex<double>> c0_, c1_, c2_;
};

// The Dirichlet solves. `warm` (same layer and grid) seeds the iteration.
LayerSolution solve_lower(const WaveProfile& profile, const FluidParams& params, const GridSpec& grid,
                          const LayerSolution* warm = nullptr);
LayerSolution solve_upper(double lambda, const WaveProfile& profile, const FluidParams& params,
                          const GridSpec& grid, const LayerSolution* warm = nullptr);

// Boundary operators on the x nodes of the solution's grid.
std::vector<double> boundary_B(const WaveProfile& profile, const LayerSolution& lower);
std::vector<double> boundary_Bbar(const WaveProfile& profile, const LayerSolution& upper);

struct PsiEvaluation {
  std::vector<double> x;
  std::vector<double> values;  // mean-zero
  double Q = 0.0;              // the subtracted mean
  std::shared_ptr<const LayerSolution> lower, upper;
};

PsiEvaluation evaluate_Psi(double lambda, const WaveProfile& profile, const FluidParams& params,
                           const GridSpec& grid, const PsiEvaluation* warm = nullptr);

std::vector<double> Psi(double lambda, const WaveProfile& profile, const FluidParams& params,
                        const GridSpec& grid = {});

// Central-difference directional derivative of Psi in eta. h <= 0 selects
// 1e-5 * max(1, sup|eta|).
std::vector<double> frechet_dPsi(double lambda, const WaveProfile& profile, const FluidParams& params,
                                 const WaveProfile& direction, const GridSpec& grid = {}, double h = 0.0,
                                 const PsiEvaluation* base = nullptr);

// Second directional derivative of Psi(Lambda, .) at 0 along cos(kx),
// returned as cosine coefficients c_1..c_n of harmonics cos(j k x).
std::vector<double> directional_hessian(double Lambda, const FluidParams& params, int k, const GridSpec& grid = {},
                                        int n = 4, double eps = 1e-2);

}  // namespace stratawave

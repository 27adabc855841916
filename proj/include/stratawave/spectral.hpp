#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stratawave::spectral {

// Finite-difference weights for derivatives 0..m at x0 on arbitrary nodes
// (Fornberg's recursion). Result(d, j) multiplies f(nodes[j]) for the d-th derivative.
Eigen::MatrixXd fornberg_weights(double x0, std::span<const double> nodes, int m);

// Gauss-Lobatto points t_j = cos(pi j / n), j = 0..n.
std::vector<double> chebyshev_points(int n);

// Collocation derivative matrix on chebyshev_points(n), diagonal by negative row sums.
Eigen::MatrixXd chebyshev_diff_matrix(int n);

// Maps nodal values to Chebyshev coefficients: coeffs = M * values.
Eigen::MatrixXd chebyshev_analysis_matrix(int n);

// Coefficients of the t-derivative of sum c_n T_n(t).
template <typename Scalar>
std::vector<Scalar> chebyshev_derivative_coeffs(std::span<const Scalar> c) {
  const int n = static_cast<int>(c.size());
  std::vector<Scalar> d(c.size(), Scalar(0));
  if (n < 2) return d;
  d[n - 2] = Scalar(2.0 * (n - 1)) * c[n - 1];
  for (int j = n - 3; j >= 0; --j) {
    d[j] = (j + 2 < n ? d[j + 2] : Scalar(0)) + Scalar(2.0 * (j + 1)) * c[j + 1];
  }
  d[0] *= 0.5;
  return d;
}

template <typename Scalar>
Scalar clenshaw(std::span<const Scalar> c, double t) {
  Scalar b1(0), b2(0);
  for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j) {
    Scalar b0 = 2.0 * t * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return c.empty() ? Scalar(0) : t * b1 - b2 + c[0];
}

struct BvpSolution {
  double a = 0.0, b = 1.0;
  std::vector<double> y;       // uniform nodes
  std::vector<double> values;  // solution at y
  double slope_a = 0.0;        // w'(a)
  double slope_b = 0.0;        // w'(b)
};

// Solves w'' - q w = r(y) on [a, b], w(a) = w(b) = 0, with the fourth-order
// Numerov scheme on `intervals` uniform intervals. Throws numerical_failure
// when the tridiagonal elimination breaks down or produces non-finite values.
BvpSolution solve_numerov(double a, double b, double q, const std::function<double(double)>& r,
                          int intervals = 2048);

// One-sided derivative at an end of a uniform grid from the first `points` samples.
double one_sided_slope(std::span<const double> values, double h, bool at_start, int points = 7);

}  // namespace stratawave::spectral

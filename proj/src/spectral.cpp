#include "stratawave/spectral.hpp"

#include <cmath>

#include "stratawave/error.hpp"
#include "stratawave/model.hpp"

namespace stratawave::spectral {

Eigen::MatrixXd fornberg_weights(double x0, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  require(n > m && m >= 0, ErrorCode::invalid_argument, "fornberg_weights: need more nodes than derivative order");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + 1, n);
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<double> chebyshev_points(int n) {
  std::vector<double> t(n + 1);
  for (int j = 0; j <= n; ++j) t[j] = std::sin(pi * (n - 2.0 * j) / (2.0 * n));  // symmetric form of cos(pi j/n)
  return t;
}

Eigen::MatrixXd chebyshev_diff_matrix(int n) {
  require(n >= 1, ErrorCode::invalid_argument, "chebyshev_diff_matrix: n >= 1");
  const auto t = chebyshev_points(n);
  Eigen::MatrixXd d(n + 1, n + 1);
  auto weight = [n](int j) { return ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) {
        d(i, j) = 0.0;
      } else {
        d(i, j) = weight(i) / weight(j) / (t[i] - t[j]);
      }
    }
  }
  for (int i = 0; i <= n; ++i) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j)
      if (j != i) s += d(i, j);
    d(i, i) = -s;
  }
  return d;
}

Eigen::MatrixXd chebyshev_analysis_matrix(int n) {
  Eigen::MatrixXd m(n + 1, n + 1);
  for (int p = 0; p <= n; ++p) {
    const double cp = (p == 0 || p == n) ? 2.0 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
      // cos(pi p j / n) reduced to keep the argument small
      const long r = (static_cast<long>(p) * j) % (2L * n);
      m(p, j) = 2.0 / (n * cp * cj) * std::cos(pi * static_cast<double>(r) / n);
    }
  }
  return m;
}

BvpSolution solve_numerov(double a, double b, double q, const std::function<double(double)>& r,
                          int intervals) {
  require(intervals >= 4 && b > a, ErrorCode::invalid_argument, "solve_numerov: bad grid");
  const int n = intervals;
  const double h = (b - a) / n;
  BvpSolution out;
  out.a = a;
  out.b = b;
  out.y.resize(n + 1);
  out.values.assign(n + 1, 0.0);
  std::vector<double> rv(n + 1);
  for (int i = 0; i <= n; ++i) {
    out.y[i] = a + i * h;
    rv[i] = r(out.y[i]);
  }
  out.y[n] = b;
  // (1 - h^2 q/12) w_{i-1} - (2 + 10 h^2 q/12) w_i + (1 - h^2 q/12) w_{i+1} = h^2/12 (r_{i-1} + 10 r_i + r_{i+1})
  const double h2 = h * h;
  const double off = 1.0 - h2 * q / 12.0;
  const double diag = -(2.0 + 10.0 * h2 * q / 12.0);
  const int m = n - 1;
  std::vector<double> cp(m), dp(m);
  for (int i = 0; i < m; ++i) {
    const int node = i + 1;
    const double rhs = h2 / 12.0 * (rv[node - 1] + 10.0 * rv[node] + rv[node + 1]);
    const double denom = diag - (i > 0 ? off * cp[i - 1] : 0.0);
    if (denom == 0.0 || !std::isfinite(denom)) fail(ErrorCode::numerical_failure, "solve_numerov: zero pivot");
    cp[i] = off / denom;
    dp[i] = (rhs - (i > 0 ? off * dp[i - 1] : 0.0)) / denom;
  }
  for (int i = m - 1; i >= 0; --i) {
    out.values[i + 1] = dp[i] - (i + 1 < m ? cp[i] * out.values[i + 2] : 0.0);
    if (!std::isfinite(out.values[i + 1])) fail(ErrorCode::numerical_failure, "solve_numerov: non-finite solution");
  }
  out.slope_a = one_sided_slope(out.values, h, true);
  out.slope_b = one_sided_slope(out.values, h, false);
  return out;
}

double one_sided_slope(std::span<const double> values, double h, bool at_start, int points) {
  const int n = static_cast<int>(values.size());
  require(n >= points && points >= 2, ErrorCode::invalid_argument, "one_sided_slope: too few samples");
  std::vector<double> nodes(points);
  for (int j = 0; j < points; ++j) nodes[j] = j * h;
  const auto w = fornberg_weights(0.0, nodes, 1);
  double s = 0.0;
  for (int j = 0; j < points; ++j) s += w(1, j) * (at_start ? values[j] : values[n - 1 - j]);
  return at_start ? s : -s;
}

}  // namespace stratawave::spectral

#include <cmath>
#include <vector>

#include "doctest.h"
#include "stratawave/error.hpp"
#include "stratawave/model.hpp"

using namespace stratawave;

TEST_CASE("project_mean_zero removes constants and keeps cosines") {
  std::vector<double> c(32, 5.0);
  for (double v : project_mean_zero(c)) CHECK(v == doctest::Approx(0.0));

  const int n = 64;
  std::vector<double> f(n), g(n);
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * pi * i / n;
    f[i] = 3.0 + 2.0 * std::cos(x);
    g[i] = std::cos(3.0 * x);
  }
  // plain average as the oracle
  double mean = 0.0;
  for (double v : f) mean += v;
  mean /= n;
  const auto pf = project_mean_zero(f);
  const auto pg = project_mean_zero(g);
  for (int i = 0; i < n; ++i) {
    CHECK(pf[i] == doctest::Approx(f[i] - mean).epsilon(1e-14));
    CHECK(pf[i] == doctest::Approx(2.0 * std::cos(2.0 * pi * i / n)).scale(1.0).epsilon(1e-14));
    CHECK(pg[i] == doctest::Approx(g[i]).scale(1.0).epsilon(1e-15));
  }
}

TEST_CASE("wave profile evaluation and derivatives") {
  WaveProfile eta(2, {0.1, -0.03, 0.004});
  CHECK(eta.period() == doctest::Approx(pi));
  CHECK_FALSE(eta.is_flat());
  CHECK(WaveProfile::flat(2, 4).is_flat());
  const double h = 1e-5;
  for (double x : {0.0, 0.3, 1.1, 2.9}) {
    double direct = 0.0;
    for (int j = 1; j <= 3; ++j) direct += eta.coeff(j) * std::cos(2.0 * j * x);
    CHECK(eta(x) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(eta(x) == doctest::Approx(eta(-x)));
    CHECK(eta(x) == doctest::Approx(eta(x + pi)));
    const double fd1 = (eta(x + h) - eta(x - h)) / (2 * h);
    const double fd2 = (eta(x + h) - 2 * eta(x) + eta(x - h)) / (h * h);
    CHECK(eta.derivative(x) == doctest::Approx(fd1).scale(1.0).epsilon(1e-8));
    CHECK(eta.second_derivative(x) == doctest::Approx(fd2).scale(1.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(WaveProfile(0, {0.1}), Error);
  CHECK_THROWS_AS(WaveProfile(1, {NAN}), Error);
}

TEST_CASE("cosine series operations") {
  SUBCASE("flat") {
    const auto ops = cosine_series_ops(WaveProfile::flat(1, 3));
    for (double v : ops.curvature_term) CHECK(v == 0.0);
  }
  SUBCASE("a cos x") {
    const double a = 0.2;
    const auto ops = cosine_series_ops(WaveProfile(1, {a}));
    REQUIRE(ops.second_derivative.coeffs.size() >= 1);
    CHECK(ops.second_derivative.coeffs[0] == doctest::Approx(-a));
    CHECK(ops.derivative.coeffs[0] == doctest::Approx(-a));
  }
  SUBCASE("curvature of 0.1 cos 2x against finite differences") {
    WaveProfile eta(1, {0.0, 0.1});
    const auto ops = cosine_series_ops(eta, 256);
    CHECK(ops.curvature_term[0] == doctest::Approx(-0.4));
    auto f = [](double x) { return 0.1 * std::cos(2.0 * x); };
    const double h = 1e-4;
    for (std::size_t i = 0; i < ops.x.size(); i += 17) {
      const double x = ops.x[i];
      const double d1 = (f(x + h) - f(x - h)) / (2 * h);
      const double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
      CHECK(ops.curvature_term[i] == doctest::Approx(d2 / std::pow(1 + d1 * d1, 1.5)).scale(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("cosine coefficients recover a synthetic series") {
  const int n = 128;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * pi * i / n;
    f[i] = 0.5 * std::cos(x) - 0.25 * std::cos(3 * x) + 1e-3 * std::cos(7 * x);
  }
  const auto c = cosine_coefficients(f, 8);
  REQUIRE(c.size() == 8);
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(c[2] == doctest::Approx(-0.25));
  CHECK(c[6] == doctest::Approx(1e-3));
}

TEST_CASE("pairwise sum is order independent for exact data") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(periodic_mean(v) == doctest::Approx(0.1));
}

TEST_CASE("fluid parameter validation") {
  FluidParams p;
  CHECK_NOTHROW(p.validate());
  p.rho = 0.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.sigma = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.g = NAN;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("vertical profile sampled and closed form agree") {
  auto cf = VerticalProfile::closed_form("cubic", Interval::upper, [](double y) -> std::array<double, 3> {
    return {y * y * y, 3 * y * y, 6 * y};
  });
  std::vector<double> s(257);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::pow(double(j) / 256.0, 3);
  auto sp = VerticalProfile::sampled("cubic", Interval::upper, s);
  for (double y : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    CHECK(sp(y) == doctest::Approx(cf(y)).scale(1.0).epsilon(1e-12));
    CHECK(sp.derivative(y) == doctest::Approx(cf.derivative(y)).scale(1.0).epsilon(1e-8));
  }
  CHECK(sp.is_sampled());
  CHECK_FALSE(cf.is_sampled());
}

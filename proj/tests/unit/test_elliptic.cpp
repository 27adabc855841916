#include <cmath>

#include "doctest.h"
#include "stratawave/asymptotics.hpp"
#include "stratawave/dispersion.hpp"
#include "stratawave/elliptic.hpp"
#include "stratawave/error.hpp"

using namespace stratawave;

namespace {
const GridSpec small{64, 17};
}

TEST_CASE("operator coefficients") {
  SUBCASE("flat interface gives the Laplacian") {
    for (auto layer : {Layer::lower, Layer::upper}) {
      const auto c = operator_coefficients(layer, 0.0, 0.0, 0.0, layer == Layer::lower ? -0.4 : 0.4);
      CHECK(c.cxy == 0.0);
      CHECK(c.cyy == 1.0);
      CHECK(c.cy == 0.0);
    }
  }
  SUBCASE("chain rule of the straightening map") {
    // y(x, Y) = (Y - eta) / (1 + eta); w_xx keeps coefficient 1
    auto eta = [](double x) { return 0.1 * std::cos(x); };
    auto ymap = [&](double x, double Y) { return (Y - eta(x)) / (1.0 + eta(x)); };
    for (const double x : {0.0, 0.7}) {
      const double y = -0.5;
      const double Y = y + (1.0 + y) * eta(x);
      const double h = 1e-4;
      const double yx = (ymap(x + h, Y) - ymap(x - h, Y)) / (2 * h);
      const double yY = (ymap(x, Y + h) - ymap(x, Y - h)) / (2 * h);
      const double yxx = (ymap(x + h, Y) - 2 * ymap(x, Y) + ymap(x - h, Y)) / (h * h);
      const auto c = operator_coefficients(Layer::lower, eta(x), -0.1 * std::sin(x), -0.1 * std::cos(x), y);
      CHECK(c.cxy == doctest::Approx(2 * yx).scale(1.0).epsilon(1e-8));
      CHECK(c.cyy == doctest::Approx(yx * yx + yY * yY).epsilon(1e-8));
      CHECK(c.cy == doctest::Approx(yxx).scale(1.0).epsilon(1e-6));
      CHECK(c.cyy_minus_one == doctest::Approx(c.cyy - 1.0).scale(1.0).epsilon(1e-15));
    }
  }
  SUBCASE("upper with eta mirrors lower with -eta") {
    const double e = 0.07, de = -0.05, dde = 0.2;
    for (double y : {0.1, 0.5, 0.9}) {
      const auto u = operator_coefficients(Layer::upper, e, de, dde, y);
      const auto l = operator_coefficients(Layer::lower, -e, -de, -dde, -y);
      CHECK(u.cxy == doctest::Approx(-l.cxy));
      CHECK(u.cyy == doctest::Approx(l.cyy));
      CHECK(u.cy == doctest::Approx(-l.cy));
    }
  }
  CHECK_THROWS_AS(build_operator(Layer::lower, WaveProfile(1, {1.2}), small), Error);
}

TEST_CASE("laminar layer solutions") {
  FluidParams p;
  p.omega_bar = 0.4;
  const auto flat = WaveProfile::flat(1);
  const auto lower = solve_lower(flat, p, small);
  const auto upper = solve_upper(-1.3, flat, p, small);
  for (double x : {0.0, 1.0, 2.5})
    for (double t : {0.0, 0.25, 0.6, 1.0}) {
      CHECK(lower.reference(x, -t).f == doctest::Approx(p.omega * t * t / 2).scale(1.0).epsilon(1e-12));
      CHECK(upper.reference(x, t).f == doctest::Approx(p.omega_bar * t * t / 2 - 1.3 * t).scale(1.0).epsilon(1e-12));
    }
  FluidParams still = p;
  still.omega = 0.0;
  still.omega_bar = 0.0;
  const auto z = solve_lower(WaveProfile(1, {0.1}), still, small);
  for (double v : z.values()) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  const auto zu = solve_upper(0.0, WaveProfile(1, {0.1}), still, small);
  for (double v : zu.values()) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  const auto B = boundary_B(flat, lower);
  for (double b : B) CHECK(b == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  const auto Bb = boundary_Bbar(flat, upper);
  for (double b : Bb) CHECK(b == doctest::Approx(1.69).epsilon(1e-11));
}

TEST_CASE("solutions are even for even interfaces") {
  const FluidParams p;
  const WaveProfile eta(1, {0.05, 0.01});
  const auto w = solve_lower(eta, p, small);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = 0.3 * i;
    for (double y : {-0.9, -0.5, -0.2}) worst = std::max(worst, std::abs(w.reference(x, y).f - w.reference(-x, y).f));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("upper linearization matches the vertical profile") {
  FluidParams p;
  p.omega_bar = 0.6;
  const double lambda = -1.9;
  const GridSpec grid{64, 33};
  const auto base = solve_upper(lambda, WaveProfile::flat(1), p, grid);
  const auto wk = linear_vertical_profile(1, lambda, p.omega_bar);
  auto err = [&](double eps) {
    const auto s = solve_upper(lambda, WaveProfile(1, {eps}), p, grid, &base);
    double worst = 0.0;
    for (double x : {0.0, 0.7, 2.0})
      for (double y : {0.2, 0.5, 0.8}) {
        const double d = (s.reference(x, y).f - base.reference(x, y).f) / eps;
        worst = std::max(worst, std::abs(d - wk(y) * std::cos(x)));
      }
    return worst;
  };
  const double e1 = err(1e-3), e2 = err(5e-4);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Psi on the trivial line and its linearization") {
  const FluidParams p;
  const GridSpec grid{128, 33};
  for (double lambda : {-2.0, 0.5}) {
    const auto v = Psi(lambda, WaveProfile::flat(1, 2), p, grid);
    for (double x : v) CHECK(x == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  for (int k : {1, 2}) {
    const double lambda = bifurcation_point(k, 1, p) + 0.3;
    auto d = frechet_dPsi(lambda, WaveProfile::flat(k, 2), p, WaveProfile(k, {0.5}), grid);
    for (double& v : d) v *= 2.0;
    const double m = mu(k, lambda, p);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double x = 2.0 * pi * i / (k * d.size());
      CHECK(d[i] == doctest::Approx(m * std::cos(k * x)).scale(std::abs(m)).epsilon(1e-6));
    }
    // evenness of the output samples
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(d[d.size() - i]).scale(std::abs(m)).epsilon(1e-10));
    const auto z = frechet_dPsi(lambda, WaveProfile::flat(k, 2), p, WaveProfile::flat(k, 1), grid);
    for (double v : z) CHECK(v == doctest::Approx(0.0).scale(std::abs(m)).epsilon(1e-12));
  }
}

TEST_CASE("surface tension enters through the curvature only") {
  FluidParams p, q;
  q.sigma = 0.25;
  const GridSpec grid{128, 33};
  const WaveProfile eta(1, {0.03, 0.004});
  const auto a = Psi(-2.5, eta, p, grid);
  const auto b = Psi(-2.5, eta, q, grid);
  const auto ops = cosine_series_ops(eta, grid.nx);
  REQUIRE(ops.curvature_term.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(b[i] - a[i] == doctest::Approx(2.0 * q.sigma * ops.curvature_term[i]).scale(1e-3).epsilon(1e-9));
}

TEST_CASE("second directional derivative") {
  FluidParams p;
  p.omega_bar = 0.2;
  const auto c = second_order_coefficients(1, 1, p);
  const auto h = directional_hessian(c.Lambda, p, 1, GridSpec{128, 33});
  REQUIRE(h.size() >= 2);
  CHECK(std::abs(h[0]) < 1e-6 * std::abs(h[1]));
  CHECK(h[1] == doctest::Approx(c.A_k).epsilon(1e-2));

  FluidParams flat;
  flat.omega = 0.0;
  const auto c0 = second_order_coefficients(1, 2, flat);
  const auto h0 = directional_hessian(c0.Lambda, flat, 1, GridSpec{128, 33});
  const double t1 = std::tanh(1.0), t2 = std::tanh(2.0);
  const double reduced = flat.rho_bar * c0.Lambda * c0.Lambda * (1 / (t1 * t1) + 4 / (t1 * t2) - 3);
  CHECK(h0[1] == doctest::Approx(reduced).epsilon(1e-2));
}

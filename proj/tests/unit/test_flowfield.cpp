#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "stratawave/asymptotics.hpp"
#include "stratawave/error.hpp"
#include "stratawave/flowfield.hpp"

using namespace stratawave;

TEST_CASE("laminar velocities") {
  FluidParams p;
  p.omega_bar = 0.5;
  const AsymptoticField lower(Layer::lower, 1, 1, p, 0.0);
  const AsymptoticField upper(Layer::upper, 1, 1, p, 0.0);
  const auto vl = velocity(lower, {16, 9});
  for (int i = 0; i < vl.nx; ++i)
    for (int j = 0; j < vl.ny; ++j) {
      const auto q = static_cast<std::size_t>(i) * vl.ny + j;
      CHECK(vl.u_rel[q] == doctest::Approx(p.omega * vl.Y[q]).scale(1.0).epsilon(1e-14));
      CHECK(vl.v[q] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    }
  const auto vu = velocity(upper, {16, 9});
  for (std::size_t q = 0; q < vu.u_rel.size(); ++q)
    CHECK(vu.u_rel[q] == doctest::Approx(p.omega_bar * vu.Y[q] + upper.lambda()).epsilon(1e-13));
}

TEST_CASE("velocity symmetry and divergence") {
  const FluidParams p;
  const AsymptoticField f(Layer::lower, 1, 1, p, 0.03);
  const auto v = velocity(f, {32, 17});
  CHECK(v.divergence_ok());
  for (int i = 1; i < v.nx; ++i) {
    const int m = v.nx - i;
    for (int j = 0; j < v.ny; ++j) {
      const auto a = static_cast<std::size_t>(i) * v.ny + j, b = static_cast<std::size_t>(m) * v.ny + j;
      CHECK(v.u_rel[a] == doctest::Approx(v.u_rel[b]).scale(1.0).epsilon(1e-12));
      CHECK(v.v[a] == doctest::Approx(-v.v[b]).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("laminar streamline is horizontal") {
  const AsymptoticField f(Layer::lower, 1, 1, FluidParams{}, 0.0);
  const auto s = trace_streamline(f, {0.0, -0.5}, 0.01, 8.0);
  REQUIRE(s.points.size() > 10);
  for (const auto& q : s.points) CHECK(q.y == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(s.spans_period);
  CHECK_FALSE(s.closed);
  CHECK_THROWS_AS(find_stagnation_points(f), Error);
}

TEST_CASE("critical layer topology at small amplitude") {
  const FluidParams p;  // omega = 1, omega_bar = 0
  const double s = 0.02;
  const AsymptoticField lower(Layer::lower, 1, 1, p, s);
  AnalysisOptions opt;
  opt.nx = 128;
  opt.ny = 64;
  LayerAnalysis layer;
  const auto r = analyze_flow(lower, opt, &layer);
  REQUIRE(r.points.size() == 3);
  CHECK(r.warnings.empty());
  const auto* c = r.center();
  REQUIRE(c != nullptr);
  CHECK(c->x == doctest::Approx(pi).epsilon(1e-10));
  CHECK(r.points[0].kind == StagnationKind::surface);
  CHECK(r.points[0].x == doctest::Approx(2 * pi - r.points[2].x).epsilon(1e-10));
  CHECK(r.points[0].x == doctest::Approx(r.zeta));
  CHECK(std::abs(r.zeta - pi / 2) < 2 * s);
  CHECK(r.points[0].y == doctest::Approx(lower.profile()(r.zeta)).epsilon(1e-10));

  // y_zeta increases from the surface point to the crest column
  for (std::size_t j = 1; j < r.y_zeta_curve.size(); ++j)
    if (r.y_zeta_curve[j].x <= pi) CHECK(r.y_zeta_curve[j].y > r.y_zeta_curve[j - 1].y);
  CHECK(r.y_b < r.y_bar_b);
  CHECK(r.y_b < lower.profile()(r.zeta));
  REQUIRE(!r.xi_bar_curve.empty());
  CHECK(r.xi_bar_curve.back().x == doctest::Approx(r.zeta).epsilon(2e-2));

  // the minimum of omega psi sits at the center
  double best = 1e300;
  Point2 at{};
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 200; ++j) {
      const double x = 2 * pi * i / 400.0, y = -1.0 + j / 200.0;
      const double v = p.omega * lower.reference(x, y).f;
      if (v < best) best = v, at = {x, lower.to_physical(x, y)};
    }
  CHECK(at.x == doctest::Approx(c->x).epsilon(1e-2));
  CHECK(at.y == doctest::Approx(c->y).epsilon(1e-2));

  CHECK(layer.closes);
  CHECK(layer.area > 0.0);
  REQUIRE(!layer.closed_streamline_samples.empty());
  for (const auto& sl : layer.closed_streamline_samples) {
    CHECK(sl.closed);
    CHECK(std::abs(sl.winding) == 1);
    CHECK(sl.psi_drift < 1e-6);
  }
  for (const auto& sl : layer.outer_streamline_samples) {
    CHECK(sl.spans_period);
    CHECK_FALSE(sl.closed);
  }

  SignOptions so{128, 64, 1e-8};
  for (const auto& chk : lower_sign_checks(lower, p.omega, r, so)) CHECK_MESSAGE(chk.ok(), chk.name);
}

TEST_CASE("upper layer has no stagnation points") {
  const FluidParams p;
  const AsymptoticField upper(Layer::upper, 1, 1, p, 0.02);
  const auto r = find_stagnation_points(upper, {128, 64});
  CHECK(r.points.empty());
  // lambda is negative on branch (1,1): the reversed orientation holds
  const auto rev = upper_sign_checks(upper, -1.0, {128, 64, 1e-8});
  for (const auto& chk : rev) CHECK_MESSAGE(chk.ok(), chk.name);
}

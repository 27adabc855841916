#include <cmath>

#include "doctest.h"
#include "stratawave/asymptotics.hpp"
#include "stratawave/continuation.hpp"
#include "stratawave/dispersion.hpp"
#include "stratawave/error.hpp"

using namespace stratawave;

namespace {
NewtonOptions quick() {
  NewtonOptions o;
  o.grid = GridSpec{64, 25};
  o.harmonics = 16;
  o.tol = 1e-10;
  return o;
}
}  // namespace

TEST_CASE("newton at zero amplitude returns the bifurcation point") {
  const FluidParams p;
  NewtonReport r;
  const auto b = newton_correct(bifurcation_point(1, 1, p), WaveProfile::flat(1, 16), 0.0, p, {1, 1}, quick(), &r);
  CHECK(b.lambda == doctest::Approx(bifurcation_point(1, 1, p)).epsilon(1e-10));
  CHECK(b.profile.sup_norm() < 1e-12);
  CHECK(r.iterations <= 1);
}

TEST_CASE("newton from the expansion converges quickly") {
  const FluidParams p;
  const double s = 0.01;
  const auto e = branch_expansion(1, 1, p, s, default_ak_variant, 16);
  NewtonReport r;
  const auto b = newton_correct(e.lambda, e.profile, s, p, {1, 1}, quick(), &r);
  CHECK(r.iterations <= 5);
  CHECK(b.residual < 1e-10);
  CHECK(b.profile.coeff(1) == -s);
  CHECK(b.s == s);
  // lambda moves at second order
  CHECK(std::abs(b.lambda - e.lambda) < 10 * s * s);

  ErrorCode code{};
  try {
    newton_correct(e.lambda + 1.0, e.profile, s, p, {1, 1}, quick());
  } catch (const Error& err) {
    code = err.code();
  }
  CHECK(code == ErrorCode::no_convergence);
}

TEST_CASE("short branch trace") {
  FluidParams p;
  p.omega_bar = 0.3;
  auto o = quick();
  const auto b = trace_branch(1, 2, p, 0.02, 0.005, o);
  REQUIRE(b.points.size() >= 4);
  CHECK(b.reached_s_max);
  CHECK(b.achieved_s == doctest::Approx(0.02));
  for (const auto& pt : b.points) {
    CHECK(pt.residual < o.tol);
    CHECK(pt.profile.coeff(1) == doctest::Approx(-pt.s));
    CHECK(pt.branch_id.i == 2);
    if (pt.s > 0) CHECK(single_crest(pt.profile));
  }
}

TEST_CASE("analyticity fit of a geometric sequence") {
  std::vector<double> c;
  for (int j = 1; j <= 12; ++j) c.push_back((j % 2 ? -1.0 : 1.0) * 0.2 * std::pow(0.3, j));
  const auto fit = analyticity_fit(WaveProfile(1, c));
  CHECK(fit.r == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(fit.C == doctest::Approx(0.2).epsilon(1e-8));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.harmonics_used == 12);
}

TEST_CASE("single crest detection") {
  CHECK(single_crest(WaveProfile(1, {-0.1, 0.01})));
  CHECK_FALSE(single_crest(WaveProfile(1, {-0.01, 0.0, 0.1})));
}

#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "stratawave/asymptotics.hpp"
#include "stratawave/error.hpp"
#include "stratawave/flowfield.hpp"
#include "stratawave/plot.hpp"
#include "stratawave/serialize.hpp"

using namespace stratawave;

TEST_CASE("params round trip through JSON") {
  FluidParams p;
  p.rho = 3.1;
  p.sigma = 0.1 + 0.2;  // not exactly representable in short decimal
  p.omega_bar = -0.7;
  const auto back = params_from_json(json::parse(to_json(p).dump()));
  CHECK(back.rho == p.rho);
  CHECK(back.sigma == p.sigma);
  CHECK(back.omega_bar == p.omega_bar);
  CHECK_THROWS_AS(params_from_json(json{{"rho", 2.0}, {"density", 1.0}}), Error);
  CHECK(params_from_json(json::object()).g == FluidParams{}.g);
}

TEST_CASE("profile and branch point round trip") {
  BranchPoint b;
  b.s = 0.03;
  b.lambda = -2.71;
  b.profile = WaveProfile(2, {-0.03, 1.1e-3, 1e-17});
  b.residual = 3e-12;
  b.branch_id = {2, 1};
  const auto r = branch_point_from_json(json::parse(to_json(b).dump()));
  CHECK(r.lambda == b.lambda);
  CHECK(r.profile.k() == 2);
  REQUIRE(r.profile.harmonics() == 3);
  for (std::size_t j = 1; j <= 3; ++j) CHECK(r.profile.coeff(j) == b.profile.coeff(j));
  CHECK(r.branch_id.k == 2);
  CHECK(profile_from_json(to_json(b.profile)).coeff(2) == b.profile.coeff(2));
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("csv layouts") {
  const FluidParams p;
  const auto g = lower_field_expansion(1, 1, p, 0.02, {4, 3}, true);
  const auto csv = field_csv(g);
  CHECK(csv.rfind("x,y_ref,Y,psi,layer\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 3);
  CHECK(csv.find("\r") == std::string::npos);
  const auto lines = polylines_csv({{{0, 1}, {2, 3}}, {{4, 5}}});
  CHECK(lines == "id,x,y\n0,0,1\n0,2,3\n1,4,5\n");
}

TEST_CASE("flow picture renders") {
  const FluidParams p;
  const AsymptoticField lower(Layer::lower, 1, 1, p, 0.03);
  const auto r = find_stagnation_points(lower, {64, 32});
  const auto j = to_json(r);
  CHECK(j["points"].size() == 3);
  CHECK(j["layer"] == "lower");
  const auto lines = streamline_family(lower, r, 3, 0.01, 20.0);
  const auto svg = render_flow_svg(lower.profile(), r, lines, {}, {});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("circle") != std::string::npos);
}

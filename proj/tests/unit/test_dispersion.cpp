#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "stratawave/dispersion.hpp"
#include "stratawave/error.hpp"

using namespace stratawave;

namespace {

FluidParams still() {
  FluidParams p;
  p.omega_bar = 0.0;
  return p;
}

double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("symbol at lambda = 0 reduces to the buoyancy term") {
  for (int k = 1; k <= 6; ++k) CHECK(mu(k, 0.0, still()) == doctest::Approx(-19.6));
}

TEST_CASE("symbol against a long double evaluation") {
  FluidParams p = still();
  p.sigma = 0.5;
  p.omega_bar = 2.0;
  const long double k = 3, l = 1;
  const long double ref = 2.0L * (9.8L * (1.0L - 2.0L) - 0.5L * k * k + 2.0L * l + k / std::tanh(k) * l * l);
  CHECK(mu(3, 1.0, p) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
  CHECK_THROWS_AS(mu(0, 1.0, p), Error);
}

TEST_CASE("bifurcation points against bisection") {
  const auto p = still();
  const auto b = bifurcation_points(1, p);
  const double l1 = bisect([&](double l) { return mu(1, l, p); }, -10.0, 0.0);
  CHECK(b.lambda1 == doctest::Approx(l1).epsilon(1e-12));
  CHECK(b.lambda1 == doctest::Approx(-std::sqrt(9.8 * std::tanh(1.0))).epsilon(1e-12));
  CHECK(b.lambda2 == doctest::Approx(-b.lambda1).epsilon(1e-14));
  CHECK(b.lambda1 < b.lambda2);
  CHECK(b[1] == b.lambda1);

  FluidParams q;
  q.omega_bar = 0.8;
  q.sigma = 0.3;
  for (int k = 1; k <= 8; ++k) {
    const auto r = bifurcation_points(k, q);
    const double scale = 2.0 * q.rho_bar * k / std::tanh(double(k)) * r.lambda1 * r.lambda1;
    CHECK(std::abs(mu(k, r.lambda1, q)) < 1e-12 * scale);
    CHECK(std::abs(mu(k, r.lambda2, q)) < 1e-12 * scale);
    CHECK(bifurcation_point(k, 2, q) == r.lambda2);
  }
}

TEST_CASE("transversality is the lambda derivative of the symbol and nonzero") {
  FluidParams q;
  q.omega_bar = 0.4;
  for (int k = 1; k <= 4; ++k)
    for (int i = 1; i <= 2; ++i) {
      const double L = bifurcation_point(k, i, q);
      const double h = 1e-5;
      const double fd = (mu(k, L + h, q) - mu(k, L - h, q)) / (2 * h);
      CHECK(mu_lambda(k, L, q) == doctest::Approx(fd).epsilon(1e-8));
      CHECK(std::abs(transversality(k, i, q)) > 0.0);
      CHECK((transversality(k, i, q) > 0) == (i == 2));
    }
}

TEST_CASE("kernel simplicity") {
  CHECK(kernel_is_simple(1, 1, still(), 16));
  CHECK_THROWS_AS(kernel_is_simple(1, 1, still(), 1), Error);

  // tune sigma so that mu_2 vanishes at the k = 1 root as well
  auto resonance = [](double sigma) {
    FluidParams p = still();
    p.sigma = sigma;
    return mu(2, bifurcation_point(1, 1, p), p);
  };
  const double sigma = bisect(resonance, 0.1, 20.0);
  FluidParams p = still();
  p.sigma = sigma;
  CHECK(std::abs(resonance(sigma)) < 1e-9);
  CHECK_FALSE(kernel_is_simple(1, 1, p, 16));
}

TEST_CASE("sigma threshold matches a dense monotonicity scan") {
  CHECK_THROWS_AS(sigma_threshold(still(), 1), Error);
  FluidParams q;
  q.omega_bar = 1.5;
  const int k_max = 6;
  const double s0 = sigma_threshold(q, k_max);
  auto monotone = [&](double sigma) {
    FluidParams p = q;
    p.sigma = sigma;
    for (int i = 1; i <= 2; ++i) {
      std::vector<double> L;
      for (int k = 1; k <= k_max; ++k) L.push_back(bifurcation_point(k, i, p));
      bool up = true, down = true;
      for (std::size_t j = 1; j < L.size(); ++j) {
        up = up && L[j] > L[j - 1];
        down = down && L[j] < L[j - 1];
      }
      if (!up && !down) return false;
    }
    return true;
  };
  const double top = std::max(4.0 * s0, 1.0);
  for (int j = 1; j <= 400; ++j) {
    const double sigma = s0 + (top - s0) * j / 400.0;
    CHECK(monotone(sigma));
  }
  if (s0 > 0) CHECK_FALSE(monotone(0.999 * s0 - 1e-6));
}

TEST_CASE("without upper vorticity the threshold is the k = 1, 2 crossing") {
  // sigma = 0 is monotone, but any small sigma > 0 bends the sequence up at large k
  FluidParams p = still();
  const double s0 = sigma_threshold(p, 8);
  CHECK(s0 > 0.0);
  auto squares = [&](double sigma, int k_max = 8) {
    std::vector<double> v;
    for (int k = 1; k <= k_max; ++k) v.push_back((p.g * (p.rho - p.rho_bar) + sigma * k * k) * std::tanh(double(k)) / k);
    return v;
  };
  const auto zero = squares(0.0);
  for (int k = 1; k < 8; ++k) CHECK(zero[k] < zero[k - 1]);
  // the upturn starts near k = sqrt(g (rho - rho_bar) / sigma)
  const auto small = squares(0.1, 200);
  CHECK(small[199] > small[198]);
  // at the threshold Lambda_1 and Lambda_2 coincide in magnitude
  const auto at = squares(s0);
  CHECK(at[1] == doctest::Approx(at[0]).epsilon(1e-6));
}

TEST_CASE("linear vertical profile solves its ODE") {
  for (int k : {1, 2, 5}) {
    const double lambda = -1.7, wb = 0.6;
    const auto w = linear_vertical_profile(k, lambda, wb);
    CHECK(w(0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(w(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    const double h = 1.0 / 2048;
    double worst = 0.0;
    for (int j = 1; j < 2048; ++j) {
      const double y = j * h;
      // independent closed form of the source
      const double b = -2.0 * wb - (1.0 - y) * (wb * y + lambda) * k * k;
      const auto e = w.evaluate(y);
      worst = std::max(worst, std::abs(e[2] - k * k * e[0] - b));
      CHECK(linear_profile_rhs(k, lambda, wb, y) == doctest::Approx(b).scale(1.0).epsilon(1e-13));
      const double fd = (w(y + h) - 2 * w(y) + w(y - h)) / (h * h);
      CHECK(fd == doctest::Approx(e[2]).scale(1.0 + std::abs(e[2])).epsilon(1e-5));
    }
    CHECK(worst < 1e-9);
  }
  const auto zero = linear_vertical_profile(2, 0.0, 0.0);
  for (double y : {0.1, 0.5, 0.9}) CHECK(zero(y) == 0.0);
}

TEST_CASE("multiplier bound estimate") {
  std::vector<double> one(20, 1.0);
  const auto b = multiplier_bound_estimate(one, 1.5, 2.5);
  CHECK(b.argmax0 == 1);
  CHECK(b.sup0 == doctest::Approx(1.0));
  CHECK(b.sup1 == 0.0);
  CHECK(b.sup2 == 0.0);

  std::vector<double> sq(30);
  for (int p = 1; p <= 30; ++p) sq[p - 1] = double(p) * p;
  CHECK(multiplier_bound_estimate(sq, 0.5, 2.5).sup0 == doctest::Approx(1.0));

  const FluidParams q;
  std::vector<double> m(40);
  for (int p = 1; p <= 40; ++p) m[p - 1] = mu(p, 1.3, q) / p;
  const double r = 1.25, s = 0.25;
  double s0 = 0, s1 = 0, s2 = 0;
  for (int p = 1; p <= 40; ++p) {
    s0 = std::max(s0, std::pow(p, r - s) * std::abs(m[p - 1]));
    if (p + 1 <= 40) s1 = std::max(s1, std::pow(p, r - s + 1) * std::abs(m[p] - m[p - 1]));
    if (p + 2 <= 40) s2 = std::max(s2, std::pow(p, r - s + 2) * std::abs(m[p + 1] - 2 * m[p] + m[p - 1]));
  }
  const auto e = multiplier_bound_estimate(m, r, s);
  CHECK(e.sup0 == doctest::Approx(s0));
  CHECK(e.sup1 == doctest::Approx(s1));
  CHECK(e.sup2 == doctest::Approx(s2));
  CHECK_THROWS_AS(multiplier_bound_estimate(m, 1.0, 0.5), Error);
}

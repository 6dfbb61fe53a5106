#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fidsus/models.hpp"
#include "fidsus/numerics.hpp"

using namespace fidsus;

TEST_CASE("compensated sum survives catastrophic cancellation") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);  // a naive sum returns 0 here

  CompensatedSum tiny;
  for (int i = 0; i < 1000; ++i) tiny.add(0.1);
  CHECK(tiny.value() == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("central difference: exact on quadratics, accurate on smooth functions") {
  auto sq = [](double x) { return x * x; };
  CHECK(central_diff(sq, 3.0) == doctest::Approx(6.0).epsilon(1e-12));

  CHECK(std::abs(central_diff([](double x) { return std::sin(x); }, 0.0) - 1.0) < 1e-12);
  CHECK(std::abs(central_diff([](double x) { return std::exp(x); }, 1.0) - std::exp(1.0)) < 1e-10);
}

TEST_CASE("central difference: rapidity slope at a known point") {
  // theta(h) = artanh((1-gamma)/(2h-1-gamma)); at h=2, gamma=0.5 the slope is
  // -1/6 (chain rule through tanh).
  auto theta = [](double h) { return lmg_rapidity(h, 0.5).theta; };
  CHECK(std::abs(central_diff(theta, 2.0) - (-1.0 / 6.0)) < 1e-8);
}

TEST_CASE("central difference: Richardson extrapolation raises the order") {
  auto f = [](double x) { return std::sin(x); };
  const double exact = std::cos(1.0);

  const double e0 = std::abs(central_diff(f, 1.0, DiffSpec{1e-2, 0}) - exact);
  const double e1 = std::abs(central_diff(f, 1.0, DiffSpec{1e-2, 1}) - exact);
  CHECK(e1 < e0 * 1e-2);

  // base stencil is second order: halving the step cuts the error ~4x
  const double ea = std::abs(central_diff(f, 1.0, DiffSpec{1e-2, 0}) - exact);
  const double eb = std::abs(central_diff(f, 1.0, DiffSpec{5e-3, 0}) - exact);
  CHECK(ea / eb > 3.5);
  CHECK(ea / eb < 4.5);
}

TEST_CASE("central difference: input validation") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(central_diff(f, 0.0, DiffSpec{0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(central_diff(f, 0.0, DiffSpec{-1e-3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(central_diff(f, 0.0, DiffSpec{1e-3, 5}), std::invalid_argument);
  CHECK_THROWS_AS(central_diff(f, 0.0, DiffSpec{1e-3, -1}), std::invalid_argument);
  // sampling outside the domain produces NaN, reported as a runtime failure
  auto g = [](double x) { return std::log(x); };
  CHECK_THROWS_AS(central_diff(g, 1e-6, DiffSpec{1e-4, 1}), std::runtime_error);
}

TEST_CASE("Gauss-Legendre nodes and weights") {
  {
    auto [x, w] = gauss_legendre(2);
    CHECK(std::abs(x[0] + 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(x[1] - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    auto [x, w] = gauss_legendre(64);
    CHECK(std::abs(w.sum() - 2.0) < 1e-14);
    for (int i = 0; i < 32; ++i) {
      CHECK(x[i] == doctest::Approx(-x[63 - i]).epsilon(1e-15));
      CHECK(w[i] == doctest::Approx(w[63 - i]).epsilon(1e-15));
    }
  }
  {
    // n-point rule integrates degree 2n-1 exactly: x^10 with n=6 over [-1,1]
    auto [x, w] = gauss_legendre(6);
    CompensatedSum s;
    for (int i = 0; i < 6; ++i) s.add(w[i] * std::pow(x[i], 10));
    CHECK(std::abs(s.value() - 2.0 / 11.0) < 1e-15);
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("zone integration: normalization and simple integrands") {
  const QuadratureSpec gl{QuadratureRule::GaussLegendre, 64};
  const QuadratureSpec mid{QuadratureRule::Midpoint, 64};

  CHECK(bz_integrate_2d([](double, double) { return 1.0; }, gl) == 1.0);
  CHECK(bz_integrate_2d([](double, double) { return 1.0; }, mid) == 1.0);

  CHECK(std::abs(bz_integrate_2d([](double kx, double) { return std::cos(kx); }, gl)) < 1e-14);
  CHECK(std::abs(bz_integrate_2d([](double kx, double) { return std::cos(kx); }, mid)) < 1e-14);

  const double c2g =
      bz_integrate_2d([](double kx, double) { return std::cos(kx) * std::cos(kx); }, gl);
  const double c2m =
      bz_integrate_2d([](double kx, double) { return std::cos(kx) * std::cos(kx); }, mid);
  CHECK(c2g == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c2m == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zone integration: two rules agree on the spin-wave integrand") {
  auto f = [](double kx, double ky) { return xxz_chi_integrand(kx, ky, 2.0); };
  const double gauss = bz_integrate_2d(f, QuadratureSpec{QuadratureRule::GaussLegendre, 64});
  const double midp = bz_integrate_2d(f, QuadratureSpec{QuadratureRule::Midpoint, 256});
  CHECK(std::abs(gauss - midp) <= 1e-8 * std::abs(gauss));

  // refinement self-consistency of the default rule
  const double gauss128 = bz_integrate_2d(f, QuadratureSpec{QuadratureRule::GaussLegendre, 128});
  CHECK(std::abs(gauss - gauss128) <= 1e-8 * std::abs(gauss));
}

TEST_CASE("zone integration: validation") {
  CHECK_THROWS_AS(
      bz_integrate_2d([](double, double) { return 1.0; }, QuadratureSpec{QuadratureRule::Midpoint, 1}),
      std::invalid_argument);
  CHECK_THROWS_AS(bz_integrate_2d([](double kx, double) { return 1.0 / (kx - kx); },
                                  QuadratureSpec{QuadratureRule::Midpoint, 8}),
                  std::runtime_error);
}

TEST_CASE("zone integration is reproducible bit for bit") {
  auto f = [](double kx, double ky) { return xxz_chi_integrand(kx, ky, 1.5); };
  const QuadratureSpec gl{QuadratureRule::GaussLegendre, 64};
  const double a = bz_integrate_2d(f, gl);
  const double b = bz_integrate_2d(f, gl);
  CHECK(a == b);
  CHECK(std::isfinite(a));
  CHECK(a > 0.0);
}

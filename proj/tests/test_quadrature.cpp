#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fuzzyds/quadrature.hpp"

using namespace fuzzyds;
using std::numbers::pi;

TEST_CASE("gauss_legendre integrates low-degree polynomials exactly") {
  const auto g2 = gauss_legendre(2, 0.0, 1.0);
  CHECK(g2.integrate([](double x) { return x * x; }) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto g1 = gauss_legendre(1, -1.0, 1.0);
  CHECK(g1.integrate([](double) { return 1.0; }) == doctest::Approx(2.0));

  const auto g32 = gauss_legendre(32, 0.0, pi);
  const double got = g32.integrate([](double x) {
    const double s = std::sin(x);
    return s * s;
  });
  CHECK(std::fabs(got - pi / 2.0) < 1e-14);
}

TEST_CASE("gauss_legendre node/weight structure") {
  const auto g = gauss_legendre(16, -2.0, 5.0);
  double sum = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    CHECK(g.weights[std::size_t(i)] > 0.0);
    if (i > 0)
      CHECK(g.nodes[std::size_t(i)] > g.nodes[std::size_t(i - 1)]);
    CHECK(g.nodes[std::size_t(i)] > -2.0);
    CHECK(g.nodes[std::size_t(i)] < 5.0);
    sum += g.weights[std::size_t(i)];
  }
  CHECK(sum == doctest::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("gauss_legendre rejects bad arguments") {
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(4, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("periodic_trapezoid is exact Fourier quadrature") {
  const auto g8 = periodic_trapezoid(8);
  const std::complex<double> f3 = g8.integrate(
      [](double t) { return std::polar(1.0, 3.0 * t); });
  CHECK(std::abs(f3) < 1e-14);

  CHECK(g8.integrate([](double) { return 1.0; }) ==
        doctest::Approx(2.0 * pi).epsilon(1e-15));

  const auto g4 = periodic_trapezoid(4);
  const double c2 = g4.integrate([](double t) {
    const double c = std::cos(t);
    return c * c;
  });
  CHECK(std::fabs(c2 - pi) < 1e-14);

  CHECK(g8.total_weight() == doctest::Approx(2.0 * pi));
  CHECK_THROWS_AS(periodic_trapezoid(0), std::invalid_argument);
}

TEST_CASE("tau_window_grid captures Gaussian trains") {
  const auto g = tau_window_grid(0, 1.0);
  const double mass = g.integrate([](double t) {
    return std::sqrt(1.0 / pi) * std::exp(-t * t);
  });
  CHECK(std::fabs(mass - 1.0) < 1e-12);

  // window half-width T = M + 10/sqrt(eps)
  CHECK(tau_window_halfwidth(2, 0.1) ==
        doctest::Approx(2.0 + 10.0 / std::sqrt(0.1)).epsilon(1e-15));

  const auto g1 = tau_window_grid(1, 1.0);
  const double mean = g1.integrate([](double t) {
    return t * std::sqrt(1.0 / pi) * std::exp(-(t - 1.0) * (t - 1.0));
  });
  CHECK(std::fabs(mean - 1.0) < 1e-12);

  const double T = tau_window_halfwidth(1, 1.0);
  for (double x : g1.nodes) {
    CHECK(x > -T);
    CHECK(x < T);
  }

  CHECK_THROWS_AS(tau_window_grid(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(tau_window_grid(1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(tau_window_grid(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tau_window_grid(1, 1.0, 0), std::invalid_argument);
}

TEST_CASE("s3_product_grid reproduces S^3 moments") {
  const auto g = s3_product_grid(32, 32, 32);

  const double vol = g.integrate_compact([](auto) { return 1.0; });
  CHECK(std::fabs(vol - 2.0 * pi * pi) / (2.0 * pi * pi) < 1e-10);

  // (xi . e0)^2 = cos^2 chi averages to 1/4 of the volume
  const double c2 = g.integrate_compact([](std::span<const double> a) {
    const double c = std::cos(a[0]);
    return c * c;
  });
  CHECK(std::fabs(c2 - pi * pi / 2.0) < 1e-10);

  const double odd = g.integrate_compact(
      [](std::span<const double> a) { return std::cos(a[0]); });
  CHECK(std::fabs(odd) < 1e-12);

  CHECK_THROWS_AS(s3_product_grid(0, 4, 4), std::invalid_argument);
}

TEST_CASE("all grids integrate 1 to the domain measure") {
  CHECK(std::fabs(gauss_legendre(5, 0.25, 1.5).total_weight() - 1.25) <
        1e-12 * 1.25);
  CHECK(std::fabs(periodic_trapezoid(7).total_weight() - 2.0 * pi) <
        1e-12 * 2.0 * pi);
  const auto tw = tau_window_grid(3, 0.5, 8);
  const double T = tau_window_halfwidth(3, 0.5);
  CHECK(std::fabs(tw.total_weight() - 2.0 * T) < 1e-12 * 2.0 * T);
  const auto s3 = s3_product_grid(16, 16, 16);
  CHECK(std::fabs(s3.compact_total() - 2.0 * pi * pi) < 1e-12 * 2.0 * pi * pi);
  const auto circle = theta_circle_grid(9);
  CHECK(std::fabs(circle.compact_total() - 1.0) < 1e-12);
}

TEST_CASE("ProductGrid with a time factor integrates separable functions") {
  const auto grid = theta_circle_grid(8).with_time(tau_window_grid(0, 1.0));
  // integral of e^{-tau^2} cos^2(theta) dtau dtheta/(2pi) = sqrt(pi)/2
  const double got = grid.integrate([](double tau, std::span<const double> a) {
    const double c = std::cos(a[0]);
    return std::exp(-tau * tau) * c * c;
  });
  CHECK(std::fabs(got - std::sqrt(pi) / 2.0) < 1e-12);
  CHECK_THROWS_AS(theta_circle_grid(8).time(), std::logic_error);
}

#include "oracles.hpp"

#include "polymv/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace polymv;

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("radial moments over balls") {
  QuadratureSpec spec;
  for (int n = 2; n <= 3; ++n) {
    for (int j = 1; j <= 3; ++j) {
      const double r = 1.7;
      const auto ball = StarDomain::ball(n, r);
      const double avg = average([j](std::span<const double> x) { return std::pow(norm2(x), j); }, ball, spec);
      CHECK(avg == doctest::Approx(oracle::ball_moment(n, r, j)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Monte Carlo directions in four dimensions") {
  QuadratureSpec spec;
  spec.mc_samples = 2048;
  const auto ball = StarDomain::ball(4, 1.0);
  const auto res = integrate([](std::span<const double> x) { return norm2(x) + x[0]; }, ball, spec);
  const double exact = ball_volume(4, 1.0) * oracle::ball_moment(4, 1.0, 1);
  CHECK(std::abs(res.value - exact) <= 5.0 * res.error + 1e-12);
  // radial integrands are exact for every direction sample
  const auto radial = integrate([](std::span<const double> x) { return norm2(x); }, ball, spec);
  CHECK(radial.value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("off-center balls and ellipses") {
  QuadratureSpec spec;
  const auto ball = StarDomain::ball(2, 0.8, {0.3, -0.4});
  const double avg = average([](std::span<const double> x) { return x[0] * x[0] + x[1]; }, ball, spec);
  // avg of x^2 over B_R(c) is c_x^2 + R^2/4; avg of y is c_y.
  CHECK(avg == doctest::Approx(0.09 + 0.16 - 0.4).epsilon(1e-12));
  const auto e = StarDomain::ellipsoid({1.0, 1.2});
  const auto area = integrate([](std::span<const double>) { return 1.0; }, e, spec);
  CHECK(area.value == doctest::Approx(1.2 * M_PI).epsilon(1e-12));
}

TEST_CASE("integrable pole on the boundary") {
  // Potential of the unit disk at a rim point: int |x - z|^{-1} dx = 4.
  QuadratureSpec spec;
  const Point z = {1.0, 0.0};
  const auto disk = StarDomain::ball(2, 1.0);
  auto f = [&](std::span<const double> x) { return 1.0 / std::hypot(x[0] - z[0], x[1] - z[1]); };
  const std::vector<Point> poles = {z};
  const auto res = integrate(f, disk, spec, poles);
  CHECK(res.value == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(res.converged);
  CHECK(res.levels >= 2);
}

TEST_CASE("pole on the boundary in three dimensions") {
  // int_{B_1} |x - z|^{-1} dx for |z| = 1 is the Newtonian potential 4 pi / 3.
  QuadratureSpec spec;
  spec.tolerance = 1e-8;
  const Point z = {0.0, 0.6, 0.8};
  auto f = [&](std::span<const double> x) {
    return 1.0 / std::sqrt(std::pow(x[0] - z[0], 2) + std::pow(x[1] - z[1], 2) + std::pow(x[2] - z[2], 2));
  };
  const std::vector<Point> poles = {z};
  const auto res = integrate(f, StarDomain::ball(3, 1.0), spec, poles);
  CHECK(res.value == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-7));
}

TEST_CASE("non-convergence is reported with both estimates") {
  QuadratureSpec spec;
  spec.tolerance = 1e-15;
  spec.max_refinements = 1;
  spec.max_intervals = 20;
  const Point z = {1.0, 0.0};
  auto f = [&](std::span<const double> x) { return std::pow(std::hypot(x[0] - z[0], x[1] - z[1]), -1.9); };
  try {
    const std::vector<Point> poles = {z};
    integrate(f, StarDomain::ball(2, 1.0), spec, poles);
    FAIL("expected a quadrature error");
  } catch (const QuadratureError& e) {
    CHECK_FALSE(e.result().converged);
    CHECK(e.result().value != e.result().previous);
  }
}

TEST_CASE("scale equivariance") {
  QuadratureSpec spec;
  const auto b = StarDomain::bump(2, 1.0, 0.25, 5);
  auto f = [](std::span<const double> x) { return std::exp(x[0]) * x[1] * x[1]; };
  const auto base = integrate(f, b, spec);
  const double lambda = 3.0;
  auto g = [&](std::span<const double> x) {
    const double y[2] = {x[0] / lambda, x[1] / lambda};
    return f(y);
  };
  const auto scaled = integrate(g, rescale(b, lambda), spec);
  CHECK(scaled.value == doctest::Approx(lambda * lambda * base.value).epsilon(1e-12));
}

TEST_CASE("spec text round trip") {
  QuadratureSpec spec;
  spec.tolerance = 1e-8;
  spec.seed = 42;
  CHECK(QuadratureSpec::parse(spec.to_string()) == spec);
  const auto d = spec.doubled();
  CHECK(d.radial_panels == 2 * spec.radial_panels);
  CHECK(d.angular_cells == 2 * spec.angular_cells);
  CHECK(d.tolerance == spec.tolerance);
  CHECK(spec.to_string().find(',') == std::string::npos);
  CHECK_THROWS_AS(QuadratureSpec::parse("radial_panels=0"), std::invalid_argument);
  CHECK_THROWS_AS(QuadratureSpec::parse("bogus=1"), std::invalid_argument);
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * M_PI));
}

TEST_CASE("repeated runs are bitwise identical") {
  QuadratureSpec spec;
  const auto b = StarDomain::bump(3, 1.0, 0.2, 3);
  auto f = [](std::span<const double> x) { return std::cos(3.0 * x[0]) + x[1] * x[2]; };
  const auto first = integrate(f, b, spec);
  const auto second = integrate(f, b, spec);
  CHECK(first.value == second.value);
  CHECK(first.abs_value == second.abs_value);
  QuadratureSpec mc;
  mc.mc_samples = 256;
  const auto b4 = StarDomain::ball(4, 1.0);
  CHECK(integrate(f, b4, mc).value == integrate(f, b4, mc).value);
}

TEST_CASE("fixed-level errors shrink under doubling") {
  const auto b = StarDomain::bump(2, 1.0, 0.3, 3);
  auto f = [](std::span<const double> x) { return std::cos(9.0 * x[0]) * std::exp(x[1]); };
  QuadratureSpec spec;
  spec.radial_panels = 1;
  spec.angular_cells = 2;
  QuadratureSpec fine = spec;
  for (int i = 0; i < 6; ++i) fine = fine.doubled();
  const double reference = integrate_level(f, b, fine, {}, 1.0).value;
  std::vector<double> errors;
  QuadratureSpec level = spec;
  for (int i = 0; i < 3; ++i) {
    errors.push_back(std::abs(integrate_level(f, b, level, {}, 1.0).value - reference));
    level = level.doubled();
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] > 1e-13) CHECK(errors[i + 1] <= errors[i]);
  }
  CHECK(errors.front() > errors.back());
}

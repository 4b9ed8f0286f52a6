#include "oracles.hpp"
#include "support.hpp"

#include "polymv/pole_function.hpp"

#include <doctest.h>

using namespace polymv;
using R = Rational;

TEST_CASE("radial powers around the pole") {
  for (int n = 2; n <= 5; ++n) {
    RationalPoint z(static_cast<std::size_t>(n), R(0));
    z[0] = R(1, 2);
    const MultiPoly one = MultiPoly::constant(n, 1);
    for (int a = -n - 2; a <= 4; ++a) {
      const PoleFunction f = PoleFunction::term(one, a, z);
      const PoleFunction expected = PoleFunction::term(one * R(a * (a + n - 2)), a - 2, z);
      CHECK(equivalent(f.laplacian(), expected));
    }
    // fundamental solution
    if (n > 2) CHECK(PoleFunction::term(one, 2 - n, z).laplacian().is_zero());
  }
}

TEST_CASE("canonical form strips exact |x-z|^2 factors") {
  const RationalPoint z = {R(1), R(2)};
  const MultiPoly d2 = MultiPoly::distance_squared(z);
  const PoleFunction f = PoleFunction::term(d2 * d2, -2, z);
  const PoleFunction g = PoleFunction::from_poly(d2, z);
  CHECK_FALSE(f == g);
  CHECK(equivalent(f, g));
  CHECK(f.normalized() == g.normalized());
  PoleFunction h = PoleFunction::term(d2, -3, z);
  h.add_term(MultiPoly::constant(2, -1), -1);
  CHECK(h.is_zero());
}

TEST_CASE("exact evaluation and signs") {
  const RationalPoint z = {R(0), R(1)};
  const MultiPoly x1 = MultiPoly::variable(2, 0);
  const PoleFunction even = PoleFunction::term(x1, -2, z);
  const RationalPoint p = {R(3), R(5)};  // |p - z|^2 = 25
  CHECK(even.evaluate_exact(p).value() == R(3, 25));
  const PoleFunction odd = PoleFunction::term(x1, -1, z);
  CHECK_FALSE(odd.evaluate_exact(p).has_value());
  CHECK(odd.exact_sign(p).value() == 1);
  CHECK(odd.exact_sign({R(-3), R(5)}).value() == -1);
  CHECK(odd.exact_sign({R(0), R(5)}).value() == 0);
  PoleFunction mixed = odd;
  mixed.add_term(x1, 0);
  CHECK_FALSE(mixed.exact_sign(p).has_value());
  const Point pd = {3.0, 5.0};
  CHECK(odd.evaluate(pd) == doctest::Approx(3.0 / 5.0));
  const Point zd = {0.0, 1.0};
  CHECK_THROWS(odd.evaluate(zd));
}

TEST_CASE("laplacian matches finite differences away from the pole") {
  Rng rng(5);
  for (int n = 2; n <= 4; ++n) {
    RationalPoint z(static_cast<std::size_t>(n), R(0));
    z[0] = 1;
    PoleFunction f(z);
    f.add_term(MultiPoly::norm_squared(n) * R(2) - MultiPoly::variable(n, 0), -n);
    f.add_term(MultiPoly::variable(n, n - 1), 1);
    const PoleFunction lap = f.laplacian();
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (auto& v : x) v = rng.uniform(-0.4, 0.4);
    auto fn = [&](const std::vector<double>& v) { return f.evaluate(std::span<const double>(v)); };
    CHECK(oracle::fd_laplacian(fn, x, 1e-3) == doctest::Approx(lap.evaluate(std::span<const double>(x))).epsilon(1e-6));
  }
}

TEST_CASE("text form") {
  const RationalPoint z = {R(1), R(0)};
  PoleFunction f(z);
  f.add_term(MultiPoly::constant(2, 2), -2);
  f.add_term(MultiPoly::variable(2, 1), 0);
  CHECK(f.to_string() == "[e=-2] 2 ; [e=0] 1*x2");
  CHECK(f.has_negative_exponent());
}

#include "oracles.hpp"
#include "support.hpp"

#include "polymv/multipoly.hpp"

#include <doctest.h>

using namespace polymv;
using R = Rational;

namespace {

MultiPoly random_poly(Rng& rng, int n, int degree, int terms) {
  MultiPoly p(n);
  for (int t = 0; t < terms; ++t) {
    Exponent e(static_cast<std::size_t>(n), 0);
    const long d = rng.uniform_int(0, degree);
    for (long u = 0; u < d; ++u) e[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] += 1;
    p.add_term(e, ratio(rng.uniform_int(-5, 5), rng.uniform_int(1, 4)));
  }
  return p;
}

}  // namespace

TEST_CASE("construction and canonical text") {
  const MultiPoly x = MultiPoly::variable(2, 0);
  const MultiPoly y = MultiPoly::variable(2, 1);
  const MultiPoly p = x * x * R(3) - y + MultiPoly::constant(2, R(1, 2));
  CHECK(p.to_string() == "3*x1^2 + -1*x2 + 1/2");
  CHECK(p.degree() == 2);
  CHECK(p.coefficient({2, 0}) == 3);
  CHECK((p - p).is_zero());
  CHECK(MultiPoly::norm_squared(3).term_count() == 3);
  CHECK(MultiPoly::distance_squared({R(1), R(0)}) == (x - MultiPoly::constant(2, 1)).pow(2) + y * y);
}

TEST_CASE("laplacian of radial powers") {
  for (int n = 2; n <= 5; ++n) {
    const MultiPoly s = MultiPoly::norm_squared(n);
    for (int j = 1; j <= 4; ++j) {
      CHECK(s.pow(j).laplacian() == s.pow(j - 1) * R(2 * j * (n + 2 * j - 2)));
    }
  }
}

TEST_CASE("laplacian matches finite differences") {
  Rng rng(3);
  for (int n = 2; n <= 4; ++n) {
    const MultiPoly p = random_poly(rng, n, 5, 8);
    const MultiPoly lap = p.laplacian();
    const std::vector<double> x = {0.3, -0.7, 0.2, 0.5};
    const std::vector<double> xn(x.begin(), x.begin() + n);
    auto f = [&](const std::vector<double>& v) { return p.evaluate(std::span<const double>(v)); };
    CHECK(oracle::fd_laplacian(f, xn, 1e-3) == doctest::Approx(lap.evaluate(std::span<const double>(xn))).epsilon(1e-6));
  }
}

TEST_CASE("shift, exact division and evaluation agree") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    const MultiPoly p = random_poly(rng, n, 4, 6);
    const MultiPoly q = random_poly(rng, n, 2, 3) + MultiPoly::constant(n, 1);
    if (q.is_zero()) continue;
    const RationalPoint s = testing::random_point(rng, n);
    const RationalPoint x = testing::random_point(rng, n);
    RationalPoint xs(x);
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] += s[static_cast<std::size_t>(i)];
    CHECK(p.shifted(s).evaluate(x) == p.evaluate(xs));
    CHECK((p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x));
    const auto back = (p * q).divide_exact(q);
    REQUIRE(back.has_value());
    CHECK(*back == p);
    const Point xd = to_point(x);
    CHECK(p.evaluate(std::span<const double>(xd)) == doctest::Approx(to_double(p.evaluate(x))).epsilon(1e-12));
    CompiledPoly compiled(p);
    CHECK(compiled(xd) == doctest::Approx(to_double(p.evaluate(x))).epsilon(1e-12));
  }
}

TEST_CASE("non-divisible quotient is reported") {
  const MultiPoly x = MultiPoly::variable(2, 0);
  const MultiPoly s = MultiPoly::norm_squared(2);
  CHECK_FALSE((s + x).divide_exact(s).has_value());
  CHECK(MultiPoly::constant(2, 0).divide_exact(s).value().is_zero());
}

TEST_CASE("derivatives") {
  const MultiPoly x = MultiPoly::variable(2, 0);
  const MultiPoly y = MultiPoly::variable(2, 1);
  const MultiPoly p = x.pow(3) * y + y * y * R(5);
  CHECK(p.derivative(0) == x * x * y * R(3));
  CHECK(p.derivative(1) == x.pow(3) + y * R(10));
  CHECK(laplacian_poly(p) == x * y * R(6) + MultiPoly::constant(2, 10));
}

#include "oracles.hpp"
#include "support.hpp"

#include "polymv/coefficients.hpp"

#include <doctest.h>

using namespace polymv;
using R = Rational;

TEST_CASE("two radii 1/2, 1") {
  const AlphaVector<R> a({R(1, 2), R(1)});
  CHECK(determinant(build_vandermonde(a)) == R(3, 4));
  CHECK(det_vandermonde_closed(a) == R(3, 4));
  const auto c = coefficients(a);
  CHECK(c.c == std::vector<R>{R(4, 3), R(1, 3)});
  CHECK(c.mode == ArithmeticMode::exact);
  CHECK(c.alternating_sum() == 1);
}

TEST_CASE("three radii 1/4, 1/2, 1") {
  const AlphaVector<R> a({R(1, 4), R(1, 2), R(1)});
  CHECK(det_vandermonde_closed(a) == R(135, 1024));
  CHECK(minor_v_k1(a, 1) == R(3, 16));
  CHECK(minor_v_k1(a, 2) == R(15, 256));
  CHECK(minor_v_k1(a, 3) == R(3, 1024));
  CHECK(coefficients(a).c == std::vector<R>{R(64, 45), R(4, 9), R(1, 45)});
  CHECK_THROWS_AS(minor_v_k1(a, 0), std::out_of_range);
  CHECK_THROWS_AS(minor_v_k1(a, 4), std::out_of_range);
}

TEST_CASE("biharmonic closed form") {
  const auto [c1, c2] = biharmonic_coefficients(R(1, 3));
  CHECK(c1 == R(9, 8));
  CHECK(c2 == R(1, 8));
  CHECK(coefficients(AlphaVector<R>({R(1, 3), R(1)})).c == std::vector<R>{c1, c2});
  CHECK_THROWS_AS(biharmonic_coefficients(R(1)), std::invalid_argument);
  CHECK_THROWS_AS(biharmonic_coefficients(R(0)), std::invalid_argument);
}

TEST_CASE("alpha vector validation") {
  CHECK_THROWS_AS(AlphaVector<R>({R(1)}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaVector<R>({R(0), R(1)}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaVector<R>({R(1, 2), R(1, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaVector<R>({R(1, 2), R(1, 3)}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaVector<R>({R(1, 2), R(3, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaVector<R>({R(1, 4), R(1, 2), R(1)}, R(1, 3)), std::invalid_argument);
  CHECK_NOTHROW(AlphaVector<R>({R(1, 4), R(1, 3), R(1)}, R(1, 3)));
  CHECK_FALSE(AlphaVector<R>({R(1, 4), R(1, 2)}).ends_at_one());
}

TEST_CASE("random alphas: positivity, alternating sum, determinants, moment system") {
  Rng rng(7);
  for (int m = 2; m <= 6; ++m) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto values = testing::random_alphas(rng, m, trial % 2 == 0);
      const AlphaVector<R> a(values);
      const auto c = coefficients(a);
      for (const auto& ck : c.c) CHECK(ck > 0);
      CHECK(c.alternating_sum() == 1);
      const R brute = oracle::cofactor_det(oracle::vandermonde_rows(values));
      CHECK(det_vandermonde_closed(a) == brute);
      CHECK(determinant(build_vandermonde(a)) == brute);
      CHECK(c.c == oracle::moment_coefficients(values));
    }
  }
}

TEST_CASE("floating mode tracks the exact coefficients") {
  const AlphaVector<double> a({0.2, 0.45, 0.7, 1.0});
  const auto cd = coefficients(a);
  CHECK(cd.mode == ArithmeticMode::floating);
  const auto cq = coefficients(AlphaVector<R>({exact_from_double(0.2), exact_from_double(0.45),
                                               exact_from_double(0.7), R(1)}));
  for (std::size_t k = 0; k < 4; ++k) CHECK(cd.c[k] == doctest::Approx(to_double(cq.c[k])).epsilon(1e-12));
  CHECK(cd.alternating_sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("geometric tuples") {
  CHECK(geometric_coefficients(2, R(1, 4)).c == std::vector<R>{R(16, 15), R(1, 15)});
  CHECK(coefficient_bound_check(2, R(1), R(2)));
  const auto a = geometric_alphas(3, R(1), R(2));
  CHECK(std::vector<R>(a.values().begin(), a.values().end()) == std::vector<R>{R(1, 16), R(1, 4), R(1)});
  CHECK_THROWS_AS(geometric_alphas(3, R(2), R(3)), std::invalid_argument);
  for (int m = 2; m <= 6; ++m) {
    for (const R x : {R(1, 3), R(1, 4), R(1, 5)}) {
      const auto closed = geometric_coefficients(m, x);
      CHECK(closed.c == coefficients(geometric_tuple(m, x)).c);
      for (int k = 1; k <= m; ++k) {
        // every factor of the denominator is 1 - x^2 exactly when m = 2 or (m, k) = (3, 2)
        const R& ck = closed.c[static_cast<std::size_t>(k - 1)];
        const R bound = geometric_coefficient_bound(m, x, k);
        if (m == 2 || (m == 3 && k == 2)) {
          CHECK(ck == bound);
        } else {
          CHECK(ck < bound);
        }
      }
    }
  }
}

TEST_CASE("collapse exponent is non-negative on the admissible range") {
  for (int m = 2; m <= 60; ++m) {
    for (int k = 1; k < m; ++k) CHECK(stability_collapse_exponent(m, k) >= 0);
  }
  CHECK(stability_collapse_exponent(2, 1) == 0);
  CHECK(stability_collapse_exponent(3, 2) == 0);
}

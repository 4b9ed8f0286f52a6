#include "polymv/rational.hpp"

#include <doctest.h>

using namespace polymv;

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5e2") == Rational(250));
  CHECK(parse_rational(" 6/8 ") == Rational(3, 4));
  CHECK(parse_rational_list("1/4,1/2,1") == std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(1)});
}

TEST_CASE("malformed rationals are rejected") {
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
}

TEST_CASE("doubles convert to dyadic rationals without rounding") {
  const Rational q = exact_from_double(0.1);
  CHECK(q != Rational(1, 10));
  CHECK(to_double(q) == 0.1);
  CHECK(exact_from_double(0.375) == Rational(3, 8));
  CHECK(exact_from_double(-1e-300) < 0);
}

TEST_CASE("decimal formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_decimal17(0.1) == "0.10000000000000001");
  CHECK(to_string(ratio(6, 8)) == "3/4");
  CHECK_THROWS_AS(ratio(1, 0), std::invalid_argument);
  CHECK(to_string(Rational(5)) == "5");
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mertens/errors.hpp"
#include "mertens/rational.hpp"

using namespace mertens;

TEST_CASE("parse accepts fractions, integers, and decimals") {
  REQUIRE(parse_rational("3/4") == Rational(3, 4));
  REQUIRE(parse_rational("6/8") == Rational(3, 4));
  REQUIRE(parse_rational("-6/8") == Rational(-3, 4));
  REQUIRE(parse_rational("42") == Rational(42));
  REQUIRE(parse_rational("-7") == Rational(-7));
  REQUIRE(parse_rational("0.25") == Rational(1, 4));
  REQUIRE(parse_rational("-0.125") == Rational(-1, 8));
  REQUIRE(parse_rational("2.5") == Rational(5, 2));
  REQUIRE(parse_rational(".5") == Rational(1, 2));
  REQUIRE(parse_rational(" 1/2 ") == Rational(1, 2));
  REQUIRE(parse_rational("0.1") == Rational(1, 10));
}

TEST_CASE("parse rejects malformed input") {
  REQUIRE_THROWS_AS(parse_rational(""), DomainError);
  REQUIRE_THROWS_AS(parse_rational("abc"), DomainError);
  REQUIRE_THROWS_AS(parse_rational("1/0"), DomainError);
  REQUIRE_THROWS_AS(parse_rational("1/-2"), DomainError);
  REQUIRE_THROWS_AS(parse_rational("1/"), DomainError);
  REQUIRE_THROWS_AS(parse_rational("/2"), DomainError);
  REQUIRE_THROWS_AS(parse_rational("1.2.3"), DomainError);
  REQUIRE_THROWS_AS(parse_rational("1."), DomainError);
  REQUIRE_THROWS_AS(parse_rational("1e5"), DomainError);
  REQUIRE_THROWS_AS(parse_rational("1/2/3"), DomainError);
}

TEST_CASE("decimal rendering is truncated and flags exactness") {
  CHECK(to_decimal(Rational(0)) == DecimalString{"0", true});
  CHECK(to_decimal(Rational(1, 2)) == DecimalString{"0.5", true});
  CHECK(to_decimal(Rational(21, 32)) == DecimalString{"0.65625", true});
  CHECK(to_decimal(Rational(-21, 32)) == DecimalString{"-0.65625", true});
  CHECK(to_decimal(Rational(100)) == DecimalString{"100", true});
  CHECK(to_decimal(Rational(1, 4), 1) == DecimalString{"0.2", false});

  // 1/3 cannot terminate: 12 significant digits, inexact
  CHECK(to_decimal(Rational(1, 3)).digits == "0.333333333333");
  CHECK_FALSE(to_decimal(Rational(1, 3)).exact);
  CHECK(to_decimal(Rational(2, 3)).digits == "0.666666666666");  // truncated, not rounded
  CHECK(to_decimal(Rational(1, 1000))== DecimalString{"0.001", true});
  CHECK(to_decimal(Rational(1234567890123L)).digits == "1234567890120");
  CHECK_FALSE(to_decimal(Rational(1234567890123L)).exact);
  CHECK(to_decimal(Rational(999999999999L)) == DecimalString{"999999999999", true});

  // inexact renderings keep trailing zeros that mark significant width
  CHECK(to_decimal(Rational(1, 999983), 6).digits == "0.00000100001");
  CHECK(to_decimal(Rational(1, 10000000)) == DecimalString{"0.0000001", true});
}

TEST_CASE("double rendering goes through the exact binary value") {
  CHECK(to_decimal(0.5) == DecimalString{"0.5", true});
  CHECK(to_decimal(0.0) == DecimalString{"0", true});
  CHECK(to_decimal(-3.0) == DecimalString{"-3", true});
  // 0.1 in binary is 0.1000000000000000055511151231257827...
  CHECK(to_decimal(0.1).digits == "0.100000000000");
  CHECK_FALSE(to_decimal(0.1).exact);
  CHECK(to_decimal(std::nan("")) == DecimalString{"nan", false});
  CHECK(to_decimal(1.0 / 0.0) == DecimalString{"inf", false});
  CHECK(to_decimal(-1.0 / 0.0) == DecimalString{"-inf", false});
}

TEST_CASE("pow_rational") {
  CHECK(pow_rational(Rational(1, 2), 10) == Rational(1, 1024));
  CHECK(pow_rational(Rational(2, 3), 0) == Rational(1));
  CHECK(pow_rational(Rational(-1, 2), 3) == Rational(-1, 8));
  CHECK(pow_rational(Rational(0), 5) == Rational(0));
}

TEST_CASE("rendering guards") {
  REQUIRE_THROWS_AS(to_decimal(Rational(1, 3), 0), DomainError);
}

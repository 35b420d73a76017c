#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pepslab/rational.hpp>

#include <sstream>
#include <stdexcept>
#include <vector>

using pepslab::Rational;

TEST_CASE("construction normalizes gcd and sign") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(1, -2));
  CHECK(Rational(3, -9).num() == -1);
  CHECK(Rational(3, -9).den() == 3);
  CHECK(Rational(0, -7) == Rational(0));
  CHECK(Rational(0, -7).den() == 1);
  CHECK(Rational(42).is_integer());
  CHECK_FALSE(Rational(1, 3).is_integer());
  CHECK(Rational(5, 1).is_integer());
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("field axioms on a signed grid") {
  std::vector<Rational> grid;
  for (long long n = -3; n <= 3; ++n) {
    for (long long d = 1; d <= 3; ++d) grid.emplace_back(n, d);
  }
  for (const auto& a : grid) {
    CHECK(a + Rational(0) == a);
    CHECK(a * Rational(1) == a);
    CHECK(a - a == Rational(0));
    CHECK(-(-a) == a);
    if (!a.is_zero()) CHECK(a / a == Rational(1));
    for (const auto& b : grid) {
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      if (!b.is_zero()) CHECK((a / b) * b == a);
      for (const auto& c : grid) {
        CHECK((a + b) * c == a * c + b * c);
      }
    }
  }
}

TEST_CASE("comparisons cross signs and scales") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(-5) < Rational(1, 1000000));
  CHECK(Rational(7, 3) > Rational(2));
  CHECK(Rational(2, 6) <= Rational(1, 3));
  CHECK(Rational(2, 6) >= Rational(1, 3));
  CHECK_FALSE(Rational(1, 3) < Rational(1, 3));
}

TEST_CASE("pow handles negative exponents") {
  CHECK(Rational::pow(Rational(-1, 2), 3) == Rational(-1, 8));
  CHECK(Rational::pow(Rational(5), 0) == Rational(1));
  CHECK(Rational::pow(Rational(2, 3), -2) == Rational(9, 4));
}

TEST_CASE("conversions and printing") {
  CHECK(Rational(-5, 16).to_double() == doctest::Approx(-0.3125).epsilon(1e-15));
  CHECK(Rational(1, 3).str() == "1/3");
  CHECK(Rational(-5, 16).str() == "-5/16");
  CHECK(Rational(7).str() == "7");
  CHECK(Rational(-2).str() == "-2");
  std::ostringstream os;
  os << Rational(-83, 16384);
  CHECK(os.str() == "-83/16384");
}

TEST_CASE("division by zero throws") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("values exceeding 64 bits are refused, not wrapped") {
  const Rational big(3037000500LL, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

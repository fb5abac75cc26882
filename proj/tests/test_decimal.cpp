#include <doctest.h>

#include <random>
#include <vector>

#include "nrot/decimal.hpp"
#include "nrot/error.hpp"
#include "oracle/rational_oracle.hpp"

using nrot::ExactDecimal;

namespace {

ExactDecimal D(const char* s) { return ExactDecimal::parse(s); }

std::string random_decimal(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> digits(1, 12), frac(0, 6), d(0, 9), sign(0, 1);
  std::string s = sign(gen) ? "-" : "";
  int n = digits(gen);
  for (int i = 0; i < n; ++i) s += char('0' + d(gen));
  int f = frac(gen);
  if (f) {
    s += '.';
    for (int i = 0; i < f; ++i) s += char('0' + d(gen));
  }
  return s;
}

}  // namespace

TEST_SUITE("decimal") {
  TEST_CASE("parse and render canonical forms") {
    CHECK(D("0.1").to_string() == "0.1");
    CHECK(D("1.50").to_string() == "1.5");
    CHECK(D("007").to_string() == "7");
    CHECK(D("-0").to_string() == "0");
    CHECK(D("-0.00").to_string() == "0");
    CHECK(D("+12.340").to_string() == "12.34");
    CHECK(D("-0.05").to_string() == "-0.05");
    CHECK(D("1.50") == D("1.5"));
  }

  TEST_CASE("0.1 + 0.2 is exactly 0.3") {
    CHECK(D("0.1") + D("0.2") == D("0.3"));
    CHECK((D("0.1") + D("0.2")).to_string() == "0.3");
  }

  TEST_CASE("parse errors carry a column") {
    auto column_of = [](const char* text) {
      try {
        ExactDecimal::parse(text);
      } catch (const nrot::ParseError& e) {
        return e.position();
      }
      return std::size_t{0};
    };
    CHECK(column_of("") == 1);
    CHECK(column_of("1.") == 3);
    CHECK(column_of("1x") == 2);
    CHECK(column_of("--1") == 2);
    CHECK_FALSE(ExactDecimal::try_parse("abc").has_value());
  }

  TEST_CASE("ordering") {
    CHECK(D("-1.5") < D("-1.25"));
    CHECK(D("2") > D("1.999999"));
    CHECK(D("3.10") == D("3.1"));
  }

  TEST_CASE("half-even rounding and division") {
    CHECK(D("0.125").round_half_even(2) == D("0.12"));
    CHECK(D("0.135").round_half_even(2) == D("0.14"));
    CHECK(D("-0.125").round_half_even(2) == D("-0.12"));
    CHECK(D("2.5").round_half_even(0) == D("2"));
    CHECK(D("3.5").round_half_even(0) == D("4"));
    CHECK(D("10").divide_rounded(3, 2) == D("3.33"));
    CHECK(D("-10").divide_rounded(3, 2) == D("-3.33"));
    CHECK(D("1").divide_rounded(8, 2) == D("0.12"));
    CHECK_THROWS_AS(D("1").divide_rounded(0, 2), std::domain_error);
    std::vector<ExactDecimal> v{D("1"), D("2"), D("2")};
    CHECK(nrot::mean_rounded(v, 2) == D("1.67"));
  }

  TEST_CASE("overflow is reported, not wrapped") {
    ExactDecimal big = ExactDecimal::from_parts(nrot::pow10_coefficient(38), 0);
    CHECK_THROWS_AS(big + big + big + big + big + big + big + big + big + big + big + big + big + big + big + big +
                        big + big,
                    std::overflow_error);
  }

  TEST_CASE("property: render/parse round trip and arithmetic match rationals") {
    std::mt19937_64 gen(1234);
    for (int i = 0; i < 5000; ++i) {
      std::string a = random_decimal(gen), b = random_decimal(gen);
      ExactDecimal x = D(a.c_str()), y = D(b.c_str());
      CHECK(D(x.to_string().c_str()) == x);
      CHECK(oracle::parse_decimal(x.to_string()) == oracle::parse_decimal(a));
      CHECK(oracle::parse_decimal((x + y).to_string()) == oracle::parse_decimal(a) + oracle::parse_decimal(b));
      CHECK(oracle::parse_decimal((x - y).to_string()) == oracle::parse_decimal(a) - oracle::parse_decimal(b));
      CHECK(((x < y) == (oracle::parse_decimal(a) < oracle::parse_decimal(b))));
    }
  }
}

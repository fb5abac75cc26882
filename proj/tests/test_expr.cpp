#include <doctest.h>

#include <random>

#include "nrot/error.hpp"
#include "nrot/expr.hpp"
#include "oracle/rational_oracle.hpp"

using nrot::eval_expr;
using nrot::ExactDecimal;

namespace {

std::size_t error_column(const char* text) {
  try {
    eval_expr(text);
  } catch (const nrot::ParseError& e) {
    return e.position();
  }
  return 0;
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("worked expressions") {
    CHECK(eval_expr("0.1 + 0.2").to_string() == "0.3");
    CHECK(eval_expr("517.4 - 17484 - 10071.75 + 1013.21") == ExactDecimal::parse("-26025.14"));
    CHECK(oracle::evaluate("517.4 - 17484 - 10071.75 + 1013.21") == oracle::Rational(-1301257, 50));
    CHECK(eval_expr("-5 + 3").to_string() == "-2");
    CHECK(eval_expr("100 - 37.5").to_string() == "62.5");
    CHECK(eval_expr("min(3, 1.5, 2)").to_string() == "1.5");
    CHECK(eval_expr("max(3, 1.5, 2)").to_string() == "3");
    CHECK(eval_expr("avg(1, 2, 2)").to_string() == "1.67");
    CHECK(eval_expr("avg(1, 2, 2)", 4).to_string() == "1.6667");
    CHECK(eval_expr("avg(0.125, 0.125)").to_string() == "0.12");
    CHECK(eval_expr("max(-1, -2)").to_string() == "-1");
    CHECK(eval_expr("  7  ").to_string() == "7");
  }

  TEST_CASE("errors name the column") {
    CHECK(error_column("2 * 3") == 3);
    CHECK(error_column("") >= 1);
    CHECK(error_column("1 +") >= 3);
    CHECK(error_column("foo(1, 2)") == 1);
    CHECK(error_column("min(1, 2") >= 8);
    CHECK(error_column("1 2") == 3);
    CHECK_THROWS_AS(eval_expr("1..2"), nrot::ParseError);
  }

  TEST_CASE("property: random chains agree with the rational oracle") {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> len(1, 6), v(0, 2000000), frac(0, 3), coin(0, 1);
    for (int i = 0; i < 3000; ++i) {
      std::string expr;
      int n = len(gen);
      for (int k = 0; k < n; ++k) {
        if (k) expr += coin(gen) ? " + " : " - ";
        else if (coin(gen)) expr += "-";
        int f = frac(gen);
        std::string digits = std::to_string(v(gen));
        if (f && digits.size() > static_cast<std::size_t>(f)) digits.insert(digits.size() - f, ".");
        expr += digits;
      }
      INFO(expr);
      CHECK(oracle::parse_decimal(eval_expr(expr).to_string()) == oracle::evaluate(expr));
    }
  }
}

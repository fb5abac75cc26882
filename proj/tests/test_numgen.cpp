#include <doctest.h>

#include <set>
#include <string>

#include "nrot/error.hpp"
#include "nrot/expr.hpp"
#include "nrot/numgen.hpp"
#include "oracle/rational_oracle.hpp"

using namespace nrot;

namespace {

oracle::Rational as_rational(const ExactDecimal& d) { return oracle::parse_decimal(d.to_string()); }

std::size_t count_minus_signs(const std::string& expr) {
  std::size_t n = expr.rfind('-', 0) == 0 ? 1 : 0;
  for (std::size_t p = expr.find(" - "); p != std::string::npos; p = expr.find(" - ", p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("numgen") {
  TEST_CASE("template parsing") {
    auto chain = ExprTemplate::parse(TemplateFamily::combination, "s1 f1 s2 f2 s3 f3");
    CHECK(chain.number_slots() == 3);
    CHECK_FALSE(chain.is_function());
    auto fn = ExprTemplate::parse(TemplateFamily::min_max_avg, "o(f1, f2, f3)", {"min", "max", "avg"});
    CHECK(fn.is_function());
    CHECK(fn.number_slots() == 3);
    CHECK(ExprTemplate::parse(TemplateFamily::percent, "100 - f1").number_slots() == 1);

    CHECK_THROWS_AS(ExprTemplate::parse(TemplateFamily::combination, "s1 f1 f2"), ConfigError);
    CHECK_THROWS_AS(ExprTemplate::parse(TemplateFamily::combination, ""), ConfigError);
    CHECK_THROWS_AS(ExprTemplate::parse(TemplateFamily::min_max_avg, "o(f1, f2", {"min"}), ConfigError);
    CHECK_THROWS_AS(ExprTemplate::parse(TemplateFamily::min_max_avg, "o(f1, f2)", {"median"}), ConfigError);
    CHECK_THROWS_AS(ExprTemplate::parse(TemplateFamily::combination, "s1 x1"), ConfigError);
  }

  TEST_CASE("range validation") {
    NumRange empty;
    empty.min = ExactDecimal::parse("0.5");
    empty.max = ExactDecimal::parse("0.7");
    empty.min_frac_digits = 0;
    empty.max_frac_digits = 0;
    CHECK_THROWS_AS(validate(empty), ConfigError);
    empty.max_frac_digits = 1;
    CHECK_NOTHROW(validate(empty));
    NumRange inverted;
    inverted.min = ExactDecimal::from_integer(10);
    inverted.max = ExactDecimal::from_integer(1);
    CHECK_THROWS_AS(validate(inverted), ConfigError);

    auto config = NumGenConfig::defaults();
    config.families.clear();
    CHECK_THROWS_AS(generate_num(10, config, 1), ConfigError);
    CHECK_THROWS_AS(generate_num(0, NumGenConfig::defaults(), 1), ConfigError);
  }

  TEST_CASE("same seed gives the same corpus regardless of threads or shard layout") {
    auto config = NumGenConfig::defaults();
    config.shard_size = 97;
    auto a = generate_num(2000, config, 42);
    config.threads = 4;
    auto b = generate_num(2000, config, 42);
    CHECK(a == b);
    auto c = generate_num(2000, config, 43);
    CHECK(a != c);
    auto prefix = generate_num(500, config, 42);
    CHECK(std::equal(prefix.begin(), prefix.end(), a.begin()));
  }

  TEST_CASE("every generated answer agrees with the rational oracle") {
    auto config = NumGenConfig::defaults();
    config.threads = 4;
    auto examples = generate_num(20000, config, 7);
    std::set<TemplateFamily> seen;
    std::size_t mismatches = 0;
    for (const auto& e : examples) {
      seen.insert(e.family);
      if (oracle::evaluate(e.expression, config.avg_frac_digits) != as_rational(e.answer)) {
        if (++mismatches < 5) MESSAGE(e.expression << " -> " << e.answer.to_string());
      }
    }
    CHECK(mismatches == 0);
    CHECK(seen.size() == 6);
  }

  TEST_CASE("sign slots are balanced") {
    auto tmpl = ExprTemplate::parse(TemplateFamily::combination, "s1 f1 s2 f2 s3 f3");
    RangeConfig ranges;
    std::size_t minus = 0;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) minus += count_minus_signs(instantiate(tmpl, i, ranges).expression);
    double fraction = static_cast<double>(minus) / (3.0 * n);
    CHECK(fraction == doctest::Approx(0.5).epsilon(0.04));
  }

  TEST_CASE("drawn numbers respect slot ranges and digit counts") {
    auto tmpl = ExprTemplate::parse(TemplateFamily::addition_sub, "f1 + f2");
    RangeConfig ranges;
    NumRange first;
    first.min = ExactDecimal::parse("-3.5");
    first.max = ExactDecimal::parse("2.25");
    first.min_frac_digits = 1;
    first.max_frac_digits = 3;
    NumRange second;
    second.min = ExactDecimal::from_integer(100);
    second.max = ExactDecimal::from_integer(105);
    second.max_frac_digits = 0;
    ranges.per_slot[1] = first;
    ranges.per_slot[2] = second;
    bool saw_negative = false;
    for (std::uint64_t s = 0; s < 3000; ++s) {
      auto e = instantiate(tmpl, s, ranges);
      auto plus = e.expression.find(" + ");
      REQUIRE(plus != std::string::npos);
      auto a = ExactDecimal::parse(e.expression.substr(0, plus));
      auto b = ExactDecimal::parse(e.expression.substr(plus + 3));
      CHECK(a >= first.min);
      CHECK(a <= first.max);
      CHECK(a.scale() <= 3);
      CHECK(b >= second.min);
      CHECK(b <= second.max);
      CHECK(b.scale() == 0);
      saw_negative = saw_negative || a.is_negative();
    }
    CHECK(saw_negative);
  }

  TEST_CASE("difference family is non-negative") {
    auto config = NumGenConfig::defaults();
    for (const auto& e : generate_num(3000, config, 5))
      if (e.family == TemplateFamily::difference) CHECK_FALSE(e.answer.is_negative());
  }

  TEST_CASE("config JSON round trip") {
    auto config = NumGenConfig::defaults();
    config.avg_frac_digits = 3;
    config.families[0].weight = 4;
    config.families[1].ranges.per_slot[2].max = ExactDecimal::from_integer(50);
    auto j = to_json(config);
    auto back = num_config_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(generate_num(300, back, 11) == generate_num(300, config, 11));
  }

  TEST_CASE("example record") {
    NumExample e;
    e.expression = "517.4 - 17484 - 10071.75 + 1013.21";
    e.answer = eval_expr(e.expression);
    auto ex = to_example(e, 3);
    CHECK(ex.task == TaskTag::calculate);
    CHECK(ex.input.rfind("calculate: 517.4 - 17484", 0) == 0);
    CHECK(ex.target == "-26025.14");
    CHECK(ex.answer_type == AnswerType::number);
    validate(ex);
  }
}

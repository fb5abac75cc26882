#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "nrot/error.hpp"
#include "nrot/eval.hpp"
#include "test_support.hpp"

using namespace nrot;

namespace {

GoldAnswer gold_from_json(const nlohmann::json& j) {
  GoldAnswer g;
  g.number = j.value("number", "");
  if (j.contains("spans")) g.spans = j["spans"].get<std::vector<std::string>>();
  if (j.contains("date")) {
    g.date.day = j["date"].value("day", "");
    g.date.month = j["date"].value("month", "");
    g.date.year = j["date"].value("year", "");
  }
  return g;
}

GoldAnswer span_gold(std::vector<std::string> spans) {
  GoldAnswer g;
  g.spans = std::move(spans);
  return g;
}

GoldAnswer number_gold(std::string n) {
  GoldAnswer g;
  g.number = std::move(n);
  return g;
}

DropRecord record(std::string id, std::vector<GoldAnswer> answers) {
  return DropRecord{"p", std::move(id), "passage", "question?", std::move(answers)};
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("normalization") {
    // numbers take Python's float text, as in the official scorer
    CHECK(normalize_answer("The Untitled (1981) painting") == "untitled 1981.0 painting");
    CHECK(to_bag("The Untitled (1981) painting").tokens == std::set<std::string>{"untitled", "1981.0", "painting"});
    CHECK(to_bag("4,300,000").tokens == to_bag("4300000").tokens);
    CHECK(to_bag("").tokens.empty());
    CHECK(normalize_answer("  a  well-known   Author! ") == "well known author");
  }

  TEST_CASE("python float text") {
    CHECK(is_python_float("12"));
    CHECK(is_python_float(" -1.5e3 "));
    CHECK(is_python_float("1_000"));
    CHECK(is_python_float("inf"));
    CHECK(is_python_float("NaN"));
    CHECK(is_python_float(".5"));
    CHECK(is_python_float("5."));
    CHECK_FALSE(is_python_float("1__0"));
    CHECK_FALSE(is_python_float("_1"));
    CHECK_FALSE(is_python_float("1,000"));
    CHECK_FALSE(is_python_float(""));
    CHECK_FALSE(is_python_float("."));
    CHECK(python_float_repr(12.0) == "12.0");
    CHECK(python_float_repr(0.1) == "0.1");
    CHECK(python_float_repr(1e16) == "1e+16");
    CHECK(python_float_repr(1234567890123456.0) == "1234567890123456.0");
    CHECK(python_float_repr(0.0001) == "0.0001");
    CHECK(python_float_repr(0.00001) == "1e-05");
    CHECK(python_float_repr(-2.5) == "-2.5");
    CHECK(python_float_repr(1.0 / 3.0) == "0.3333333333333333");
  }

  TEST_CASE("worked pairs") {
    auto s = score_pair("John Kasay", span_gold({"John Kasay"}));
    CHECK(s.em == 1.0);
    CHECK(s.f1 == 1.0);
    s = score_pair("Kasay", span_gold({"John Kasay"}));
    CHECK(s.em == 0.0);
    CHECK(s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    s = score_pair("13 million", span_gold({"12 million"}));
    CHECK(s.f1 == 0.0);
    EvalOptions ungated;
    ungated.numeric_gate = false;
    CHECK(score_pair("13 million", span_gold({"12 million"}), ungated).f1 == 0.5);
    s = score_pair("4300000", number_gold("4300000"));
    CHECK(s.em == 1.0);
    CHECK(s.f1 == 1.0);
    EvalOptions rounded;
    rounded.round_f1 = true;
    CHECK(score_pair("Kasay", span_gold({"John Kasay"}), rounded).f1 == 0.67);
  }

  TEST_CASE("max over golds") {
    auto q = score(record("q", {span_gold({"12 million"}), number_gold("4300000")}), "4300000");
    CHECK(q.em == 1.0);
    CHECK(q.f1 == 1.0);
    CHECK(q.type == AnswerType::number);
    q = score(record("q", {span_gold({"Jake Delhomme"}), span_gold({"Delhomme"})}), "Delhomme");
    CHECK(q.em == 1.0);
    q = score(record("q", {span_gold({"touchdown"})}), "");
    CHECK(q.em == 0.0);
    CHECK(q.f1 == 0.0);
  }

  TEST_CASE("properties") {
    const std::vector<std::string> texts = {"John Kasay",      "Kasay",        "the Carolina Panthers", "12 million",
                                            "13 million",      "4,300,000",    "Tom Brady threw 3",     "3 yards",
                                            "field goal",      "a field goal", "1975",                  "November 16 1975",
                                            "2-yard run",      "run",          "33%",                   ""};
    for (const auto& a : texts) {
      for (const auto& b : texts) {
        if (a.empty() || b.empty()) continue;
        auto ab = score_pair(a, span_gold({b}));
        auto ba = score_pair(b, span_gold({a}));
        // the official gate only looks at gold numbers, so symmetry needs both or neither side numeric
        auto has_digit = [](const std::string& t) { return t.find_first_of("0123456789") != std::string::npos; };
        if (has_digit(a) == has_digit(b)) CHECK(ab.f1 == ba.f1);
        EvalOptions ungated;
        ungated.numeric_gate = false;
        CHECK(score_pair(a, span_gold({b}), ungated).f1 == score_pair(b, span_gold({a}), ungated).f1);
        if (ab.em == 1.0) CHECK(ab.f1 == 1.0);
        auto one = score(record("q", {span_gold({b})}), a);
        for (const auto& c : texts) {
          if (c.empty()) continue;
          auto two = score(record("q", {span_gold({b}), span_gold({c})}), a);
          CHECK(two.em >= one.em);
          CHECK(two.f1 >= one.f1);
        }
      }
    }
    // gate dominance: one number each side, different values, heavy word overlap
    CHECK(score_pair("Tom Brady threw 3 touchdown passes", span_gold({"Tom Brady threw 4 touchdown passes"})).f1 == 0.0);
  }

  TEST_CASE("official scorer cases") {
    auto cases = nlohmann::json::parse(testing_support::read_file(testing_support::fixture("eval_official_cases.json")));
    REQUIRE(cases.size() >= 70);
    EvalOptions raw;
    EvalOptions rounded;
    rounded.round_f1 = true;
    for (const auto& c : cases) {
      std::vector<GoldAnswer> answers;
      for (const auto& a : c["answers"]) answers.push_back(gold_from_json(a));
      auto rec = record(c["id"], answers);
      const std::string pred = c["prediction"];
      INFO(c["id"].get<std::string>() << " pred=" << pred);
      auto r = score(rec, pred, raw);
      CHECK(r.em == doctest::Approx(c["em_raw"].get<double>()).epsilon(1e-4));
      CHECK(r.f1 == doctest::Approx(c["f1_raw"].get<double>()).epsilon(1e-4));
      CHECK(to_string(r.type) == c["type_raw"].get<std::string>());
      auto o = score(rec, pred, rounded);
      CHECK(o.em == doctest::Approx(c["em"].get<double>()).epsilon(1e-4));
      CHECK(o.f1 == doctest::Approx(c["f1"].get<double>()).epsilon(1e-4));
      CHECK(to_string(o.type) == c["type"].get<std::string>());
    }
  }

  TEST_CASE("report macro means and per-type breakdown") {
    std::vector<DropRecord> records = {
        record("n1", {number_gold("12")}),
        record("n2", {number_gold("7")}),
        record("s1", {span_gold({"John Kasay"})}),
        record("s2", {span_gold({"Panthers"})}),
    };
    std::vector<Prediction> preds = {{"n1", "12"}, {"n2", "8"}, {"s1", "Kasay"}, {"s2", "the Panthers"}};
    auto rep = report(records, preds);
    CHECK(rep.overall.count == 4);
    CHECK(rep.overall.em == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.overall.f1 == doctest::Approx((1.0 + 0.0 + 2.0 / 3.0 + 1.0) / 4.0).epsilon(1e-12));
    CHECK(rep.per_type.at(AnswerType::number).em == 0.5);
    CHECK(rep.per_type.at(AnswerType::number).f1 == 0.5);
    CHECK(rep.per_type.at(AnswerType::span).em == 0.5);
    CHECK(rep.per_type.at(AnswerType::span).f1 == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    double mean = 0;
    for (const auto& q : rep.questions) mean += q.f1;
    CHECK(std::abs(mean / 4 - rep.overall.f1) < 1e-12);

    auto partial = report(records, {{"n1", "12"}});
    CHECK(partial.answered == 1);
    CHECK(partial.overall.em == 0.25);

    auto j = to_json(rep, true);
    CHECK(j["overall"]["em"] == 0.5);
    CHECK(j["per_type"].contains("number"));
    CHECK(j["questions"].size() == 4);

    auto perfect = report(records, {{"n1", "12"}, {"n2", "7"}, {"s1", "John Kasay"}, {"s2", "Panthers"}});
    CHECK(perfect.overall.em == 1.0);
    CHECK(perfect.overall.f1 == 1.0);
  }

  TEST_CASE("unknown or duplicated prediction ids") {
    std::vector<DropRecord> records = {record("a", {number_gold("1")})};
    try {
      report(records, {{"a", "1"}, {"zz-9", "2"}});
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("zz-9") != std::string::npos);
    }
    CHECK_THROWS_AS(report(records, {{"a", "1"}, {"a", "2"}}), ValidationError);
  }

  TEST_CASE("prediction files") {
    std::istringstream in(
        "{\"_meta\": {\"tool\": \"x\"}}\n"
        "{\"id\": \"q1\", \"prediction\": \"Kasay\"}\n"
        "\n"
        "{\"id\": \"q2\", \"prediction\": [\"Tom Brady\", \"Randy Moss\"]}\n");
    auto preds = read_predictions(in);
    REQUIRE(preds.size() == 2);
    CHECK(preds[1].text == "Tom Brady; Randy Moss");
    std::istringstream bad("{\"id\": \"q1\", \"prediction\": \"x\"}\n{\"id\": 3}\n");
    try {
      read_predictions(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.position() == 2);
    }
    CHECK(split_prediction("a; b;c", "; ") == std::vector<std::string>{"a", "b;c"});
  }
}

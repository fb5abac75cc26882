#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "nrot/error.hpp"
#include "nrot/mixer.hpp"

using namespace nrot;

namespace {

std::vector<DatasetStat> corpus_sizes() {
  return {{"TXT", 1'000'000, 1.0, {}}, {"NUM", 2'000'000, 1.0, {}}, {"DROP", 96'000, 1.0, {}}};
}

std::vector<Example> make_source(const std::string& tag, std::size_t n) {
  std::vector<Example> out;
  for (std::size_t i = 0; i < n; ++i) {
    Example e;
    e.input = "answer_me: q context: c";
    e.target = "t";
    e.source_id = tag + "-" + std::to_string(i);
    out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_SUITE("mixer") {
  TEST_CASE("T = 1 is examples-proportional") {
    auto plan = compute_plan(corpus_sizes(), 1.0);
    REQUIRE(plan.entries.size() == 3);
    CHECK(std::abs(plan.entries[0].ratio - 0.32299741602067183463) < 1e-12);
    CHECK(std::abs(plan.entries[1].ratio - 0.64599483204134366925) < 1e-12);
    CHECK(std::abs(plan.entries[2].ratio - 0.031007751937984496124) < 1e-12);
    double sum = 0;
    for (const auto& e : plan.entries) sum += e.ratio;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(plan.find("NUM")->rate == 2'000'000.0);
    CHECK(plan.find("SQuAD") == nullptr);
  }

  TEST_CASE("T = 10 matches high-precision values") {
    auto plan = compute_plan(corpus_sizes(), 10.0);
    CHECK(std::abs(plan.entries[0].ratio - 0.34930035308278916397) < 1e-12);
    CHECK(std::abs(plan.entries[1].ratio - 0.3743708488886907065) < 1e-12);
    CHECK(std::abs(plan.entries[2].ratio - 0.27632879802852012952) < 1e-12);
  }

  TEST_CASE("large T approaches uniform, single dataset is 1") {
    auto plan = compute_plan(corpus_sizes(), 1e9);
    for (const auto& e : plan.entries) CHECK(std::abs(e.ratio - 1.0 / 3.0) < 1e-6);
    auto one = compute_plan({{"DROP", 77'409, 1.0, {}}}, 3.0);
    CHECK(one.entries[0].ratio == 1.0);
  }

  TEST_CASE("monotone flattening") {
    double previous_large = 1.0;
    for (double t : {1.0, 1.5, 2.0, 4.0, 10.0, 100.0, 1000.0}) {
      auto plan = compute_plan(corpus_sizes(), t);
      double large = plan.entries[1].ratio;
      CHECK(large < previous_large);
      CHECK(large > plan.entries[0].ratio);
      CHECK(plan.entries[0].ratio > plan.entries[2].ratio);
      previous_large = large;
    }
  }

  TEST_CASE("cap") {
    auto stats = corpus_sizes();
    stats[1].cap = 500'000.0;
    auto capped = compute_plan(stats, 1.0);
    CHECK(capped.entries[1].rate == 500'000.0);
    stats[1].cap = 5'000'000.0;
    auto raised = compute_plan(stats, 2.0);
    auto uncapped = compute_plan(corpus_sizes(), 2.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(raised.entries[i].rate == uncapped.entries[i].rate);
  }

  TEST_CASE("scale invariance") {
    for (double t : {1.0, 3.0, 10.0}) {
      auto base = compute_plan(corpus_sizes(), t);
      for (double k : {2.0, 0.25, 1024.0}) {
        auto stats = corpus_sizes();
        for (auto& s : stats) s.scale *= k;
        auto scaled = compute_plan(stats, t);
        for (std::size_t i = 0; i < 3; ++i) CHECK(scaled.entries[i].ratio == base.entries[i].ratio);
      }
      for (double k : {3.0, 0.1, 7.5}) {
        auto stats = corpus_sizes();
        for (auto& s : stats) s.scale *= k;
        auto scaled = compute_plan(stats, t);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(scaled.entries[i].ratio - base.entries[i].ratio) < 1e-15);
      }
    }
  }

  TEST_CASE("plan errors") {
    CHECK_THROWS_AS(compute_plan(corpus_sizes(), 0.0), ConfigError);
    CHECK_THROWS_AS(compute_plan(corpus_sizes(), -1.0), ConfigError);
    CHECK_THROWS_AS(compute_plan(corpus_sizes(), NAN), ConfigError);
    CHECK_THROWS_AS(compute_plan({}, 1.0), ConfigError);
    CHECK_THROWS_AS(compute_plan({{"A", 0, 1.0, {}}}, 1.0), ConfigError);
    CHECK_THROWS_AS(compute_plan({{"A", 5, 0.0, {}}}, 1.0), ConfigError);
    CHECK_THROWS_AS(compute_plan({{"A", 5, 1.0, 0.0}}, 1.0), ConfigError);
    CHECK_THROWS_AS(compute_plan({{"A", 5, 1.0, {}}, {"A", 6, 1.0, {}}}, 1.0), ConfigError);
  }

  TEST_CASE("steps per epoch") {
    CHECK(steps_per_epoch({{"A", 10, 1.0, {}}, {"B", 20, 1.0, {}}}, 5, EpochMode::cover_all_epoch) == 6);
    std::vector<DatasetStat> multitask = {{"DROP", 96'000, 1.0, {}}, {"TXT", 1'000'000, 1.0, {}}, {"NUM", 2'000'000, 1.0, {}}};
    CHECK(steps_per_epoch(multitask, 32, EpochMode::drop_epoch_exception) == 3000);
    CHECK(steps_per_epoch({{"A", 10, 1.0, {}}}, 1000, EpochMode::cover_all_epoch) == 1);
    CHECK(steps_per_epoch({{"A", 11, 1.0, {}}}, 5, EpochMode::cover_all_epoch) == 3);
    CHECK_THROWS_AS(steps_per_epoch({{"A", 10, 1.0, {}}}, 0, EpochMode::cover_all_epoch), ConfigError);
    CHECK_THROWS_AS(steps_per_epoch({{"A", 10, 1.0, {}}}, 4, EpochMode::drop_epoch_exception), ConfigError);
    CHECK(parse_epoch_mode(to_string(EpochMode::drop_epoch_exception)) == EpochMode::drop_epoch_exception);
    CHECK_FALSE(parse_epoch_mode("sometimes"));
  }

  TEST_CASE("sampled frequencies fit the plan") {
    auto plan = compute_plan({{"A", 500, 1.0, {}}, {"B", 300, 1.0, {}}, {"C", 200, 1.0, {}}}, 2.0);
    auto a = make_source("A", 500), b = make_source("B", 300), c = make_source("C", 200);
    const std::size_t n = 100'000;
    MixtureSampler sampler(plan, {a, b, c}, 31337);
    std::vector<double> observed(3, 0.0);
    for (std::size_t i = 0; i < n; ++i) observed[sampler.next().dataset] += 1.0;
    double chi2 = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      double expected = plan.entries[k].ratio * n;
      chi2 += (observed[k] - expected) * (observed[k] - expected) / expected;
      CHECK(std::abs(observed[k] / n - plan.entries[k].ratio) <= 0.01);
    }
    boost::math::chi_squared dist(2);
    double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    CHECK(p_value > 1e-4);
  }

  TEST_CASE("epoch-shuffled cursor covers every example before repeating") {
    auto plan = compute_plan({{"A", 7, 1.0, {}}}, 1.0);
    auto a = make_source("A", 7);
    auto stream = sample_stream(plan, {a}, 21, 4);
    for (std::size_t epoch = 0; epoch < 3; ++epoch) {
      std::set<std::string> ids;
      for (std::size_t i = 0; i < 7; ++i) ids.insert(stream[epoch * 7 + i].source_id);
      CHECK(ids.size() == 7);
    }
    CHECK(stream == sample_stream(plan, {a}, 21, 4));
    CHECK(stream != sample_stream(plan, {a}, 21, 5));
  }

  TEST_CASE("repeats disabled") {
    auto plan = compute_plan({{"A", 3, 1.0, {}}, {"SMALL", 1, 1.0, {}}}, 1.0);
    auto a = make_source("A", 3), s = make_source("SMALL", 1);
    try {
      sample_stream(plan, {a, s}, 50, 1, SampleOptions{false});
      FAIL("expected exhaustion");
    } catch (const StreamError& e) {
      CHECK(std::string(e.what()).find('\'') != std::string::npos);
    }
    CHECK_NOTHROW(sample_stream(plan, {a, s}, 1, 1, SampleOptions{false}));
    CHECK_THROWS_AS(sample_stream(plan, {a, s}, 0, 1), ConfigError);
    CHECK_THROWS_AS(sample_stream(plan, {a}, 3, 1), ConfigError);
  }

  TEST_CASE("plan JSON") {
    auto j = to_json(compute_plan(corpus_sizes(), 10.0));
    CHECK(j["T"] == 10.0);
    CHECK(j["datasets"].size() == 3);
    CHECK(j["datasets"][0]["name"] == "TXT");
    CHECK(j["datasets"][0]["cap"].is_null());
  }
}

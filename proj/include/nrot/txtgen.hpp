#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrot/corpus.hpp"
#include "nrot/world.hpp"

namespace nrot {

/// Names and plain-text templates for narrative problems.
///
/// Sentence templates use the holes {container}, {qty}, {entity} and, for
/// transfers, {target}. Question templates use {entity}, {container} and
/// {other}.
struct Vocab {
  std::vector<std::string> containers;
  std::vector<std::string> entities;
  std::map<VerbClass, std::vector<std::string>> sentences;
  std::map<QuestionKind, std::vector<std::string>> questions;

  static Vocab defaults();
};

/// Throws ConfigError unless the vocab has >= 2 containers, >= 2 entities,
/// and templates with the required holes for every verb and question kind.
void validate(const Vocab& vocab);

Vocab vocab_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const Vocab& vocab);

struct TxtGenConfig {
  Vocab vocab = Vocab::defaults();
  unsigned min_events = 2;
  unsigned max_events = 6;
  unsigned max_quantity = 20;
  bool fractional = false;   // quantities on a 10^-frac_digits grid when set
  unsigned frac_digits = 1;
  std::size_t shard_size = 4096;
  unsigned threads = 1;
};

void validate(const TxtGenConfig& config);

struct TxtExample {
  std::string context;
  std::string question;
  std::string answer;
  std::vector<Event> events;
  QuestionSpec query;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const TxtExample&, const TxtExample&) = default;
};

/// Fills a sentence or question template.
std::string fill_template(const std::string& tmpl, const std::map<std::string, std::string>& holes);
std::string render_event(const std::string& tmpl, const Event& event);

/// One narrative built from a generator seeded with `seed`.
TxtExample make_txt_example(const TxtGenConfig& config, std::uint64_t seed);

using TxtSink = std::function<void(std::size_t index, const TxtExample&)>;

/// Same shard/seed layout as generate_num. Each example is re-simulated
/// from its events before emission.
void generate_txt(std::size_t count, const TxtGenConfig& config, std::uint64_t seed, const TxtSink& sink);
std::vector<TxtExample> generate_txt(std::size_t count, const TxtGenConfig& config, std::uint64_t seed);

/// Replays the events from an empty state.
WorldState simulate(const std::vector<Event>& events);

/// {context, question, answer, events, seed, query}
nlohmann::ordered_json to_json(const TxtExample& example);
TxtExample txt_example_from_json(const nlohmann::json& j);
/// Corpus record with task answer_me.
Example to_example(const TxtExample& example, std::size_t index);

}  // namespace nrot

#include "nrot/txtgen.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "nrot/error.hpp"
#include "nrot/rng.hpp"
#include "sharding.hpp"
#include "text_util.hpp"

namespace nrot {

Vocab Vocab::defaults() {
  Vocab v;
  v.containers = {"Mary",  "John",  "Sara",  "Tom",   "Alice", "Ben",  "Carla", "David",
                  "Emma",  "Frank", "Grace", "Henry", "Iris",  "Jack", "Karen"};
  v.entities = {"apples", "oranges", "marbles",  "pencils", "books",  "stickers", "cookies", "coins",
                "stamps", "balloons", "cards",  "shells",  "toys",   "flowers",  "candies"};
  v.sentences[VerbClass::observe] = {
      "{container} has {qty} {entity}.",
      "{container} had {qty} {entity}.",
      "{container} started with {qty} {entity}.",
      "{container} owns {qty} {entity}.",
      "At first {container} had {qty} {entity}.",
  };
  v.sentences[VerbClass::gain] = {
      "{container} bought {qty} {entity}.",
      "{container} found {qty} more {entity}.",
      "{container} received {qty} {entity} as a gift.",
      "{container} picked up {qty} {entity}.",
      "{container} got {qty} more {entity}.",
  };
  v.sentences[VerbClass::lose] = {
      "{container} lost {qty} {entity}.",
      "{container} sold {qty} {entity}.",
      "{container} threw away {qty} {entity}.",
      "{container} used {qty} {entity}.",
      "{container} donated {qty} {entity}.",
  };
  v.sentences[VerbClass::transfer] = {
      "{container} gave {qty} {entity} to {target}.",
      "{container} handed {target} {qty} {entity}.",
      "{container} passed {qty} {entity} to {target}.",
      "{target} took {qty} {entity} from {container}.",
      "{container} sent {qty} {entity} to {target}.",
  };
  v.questions[QuestionKind::how_many] = {
      "How many {entity} does {container} have now?",
      "How many {entity} does {container} have?",
  };
  v.questions[QuestionKind::how_many_more] = {
      "How many more {entity} does {container} have than {other}?",
  };
  v.questions[QuestionKind::total] = {
      "How many {entity} are there in total?",
      "How many {entity} do they have altogether?",
  };
  return v;
}

namespace {

void require_holes(const std::string& tmpl, std::initializer_list<std::string_view> holes) {
  for (auto hole : holes)
    if (tmpl.find(hole) == std::string::npos)
      throw ConfigError("template '" + tmpl + "' is missing " + std::string(hole));
}

void require_distinct(const std::vector<std::string>& names, const char* what) {
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError(std::string("duplicate ") + what + " names in vocab");
  for (const auto& n : names)
    if (detail::trim(n).empty()) throw ConfigError(std::string("empty ") + what + " name in vocab");
}

}  // namespace

void validate(const Vocab& vocab) {
  if (vocab.containers.size() < 2) throw ConfigError("vocab needs at least 2 containers");
  if (vocab.entities.size() < 2) throw ConfigError("vocab needs at least 2 entities");
  require_distinct(vocab.containers, "container");
  require_distinct(vocab.entities, "entity");
  for (VerbClass verb : {VerbClass::observe, VerbClass::gain, VerbClass::lose, VerbClass::transfer}) {
    auto it = vocab.sentences.find(verb);
    if (it == vocab.sentences.end() || it->second.empty())
      throw ConfigError("vocab has no sentence templates for " + std::string(to_string(verb)));
    for (const auto& t : it->second) {
      require_holes(t, {"{container}", "{qty}", "{entity}"});
      if (verb == VerbClass::transfer) require_holes(t, {"{target}"});
    }
  }
  for (QuestionKind kind : {QuestionKind::how_many, QuestionKind::how_many_more, QuestionKind::total}) {
    auto it = vocab.questions.find(kind);
    if (it == vocab.questions.end() || it->second.empty())
      throw ConfigError("vocab has no question templates for " + std::string(to_string(kind)));
    for (const auto& t : it->second) {
      require_holes(t, {"{entity}"});
      if (kind != QuestionKind::total) require_holes(t, {"{container}"});
      if (kind == QuestionKind::how_many_more) require_holes(t, {"{other}"});
    }
  }
}

Vocab vocab_from_json(const nlohmann::json& j) {
  try {
    Vocab v = Vocab::defaults();
    if (!j.is_object()) throw ConfigError("vocab must be a JSON object");
    if (j.contains("containers")) v.containers = j["containers"].get<std::vector<std::string>>();
    if (j.contains("entities")) v.entities = j["entities"].get<std::vector<std::string>>();
    if (j.contains("sentences")) {
      for (const auto& [key, list] : j["sentences"].items()) {
        auto verb = parse_verb_class(key);
        if (!verb) throw ConfigError("unknown verb class '" + key + "' in vocab");
        v.sentences[*verb] = list.get<std::vector<std::string>>();
      }
    }
    if (j.contains("questions")) {
      for (const auto& [key, list] : j["questions"].items()) {
        auto kind = parse_question_kind(key);
        if (!kind) throw ConfigError("unknown question kind '" + key + "' in vocab");
        v.questions[*kind] = list.get<std::vector<std::string>>();
      }
    }
    validate(v);
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad vocab: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const Vocab& vocab) {
  nlohmann::ordered_json j;
  j["containers"] = vocab.containers;
  j["entities"] = vocab.entities;
  for (const auto& [verb, list] : vocab.sentences) j["sentences"][std::string(to_string(verb))] = list;
  for (const auto& [kind, list] : vocab.questions) j["questions"][std::string(to_string(kind))] = list;
  return j;
}

void validate(const TxtGenConfig& config) {
  validate(config.vocab);
  if (config.min_events < 1 || config.min_events > config.max_events)
    throw ConfigError("event count range must satisfy 1 <= min_events <= max_events");
  if (config.max_quantity < 1) throw ConfigError("max_quantity must be >= 1");
  if (config.fractional && (config.frac_digits < 1 || config.frac_digits > 6))
    throw ConfigError("frac_digits must be in [1, 6]");
  if (config.shard_size == 0) throw ConfigError("shard_size must be >= 1");
}

std::string fill_template(const std::string& tmpl, const std::map<std::string, std::string>& holes) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      if (close != std::string::npos) {
        auto it = holes.find(tmpl.substr(i + 1, close - i - 1));
        if (it != holes.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::string render_event(const std::string& tmpl, const Event& event) {
  return fill_template(tmpl, {{"container", event.container},
                              {"qty", event.quantity.to_string()},
                              {"entity", event.entity},
                              {"target", event.target}});
}

WorldState simulate(const std::vector<Event>& events) {
  WorldState state;
  for (const auto& e : events) state.apply(e);
  return state;
}

namespace {

std::vector<std::string> sample_distinct(const std::vector<std::string>& pool, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(pool[idx[i]]);
  }
  return out;
}

void remember(std::vector<std::string>& seen, const std::string& name) {
  if (std::find(seen.begin(), seen.end(), name) == seen.end()) seen.push_back(name);
}

}  // namespace

TxtExample make_txt_example(const TxtGenConfig& config, std::uint64_t seed) {
  const Vocab& vocab = config.vocab;
  Rng rng(seed);

  const unsigned digits = config.fractional ? config.frac_digits : 0;
  const auto max_coef = static_cast<std::int64_t>(config.max_quantity * pow10_coefficient(digits));
  auto draw_qty = [&](std::int64_t bound) { return ExactDecimal::from_parts(rng.between(1, bound), digits); };

  auto containers = sample_distinct(vocab.containers, rng.between(2, std::min<std::int64_t>(3, vocab.containers.size())), rng);
  auto entities = sample_distinct(vocab.entities, rng.between(1, std::min<std::int64_t>(2, vocab.entities.size())), rng);
  const auto n_events = static_cast<unsigned>(rng.between(config.min_events, config.max_events));

  using Cell = std::pair<std::string, std::string>;
  std::vector<Cell> all_cells;
  for (const auto& c : containers)
    for (const auto& e : entities) all_cells.emplace_back(c, e);

  TxtExample out;
  out.rng_seed = seed;
  WorldState state;
  std::vector<Cell> mentioned;
  std::vector<std::string> mentioned_containers, mentioned_entities;
  std::vector<std::string> sentences;

  for (unsigned i = 0; i < n_events; ++i) {
    std::vector<Cell> unseen, holding;
    for (const auto& cell : all_cells) {
      bool seen = std::find(mentioned.begin(), mentioned.end(), cell) != mentioned.end();
      if (!seen) unseen.push_back(cell);
      else if (!state.count(cell.first, cell.second).is_zero()) holding.push_back(cell);
    }
    std::vector<VerbClass> verbs;
    if (!unseen.empty()) verbs.push_back(VerbClass::observe);
    if (i > 0) {
      verbs.push_back(VerbClass::gain);
      if (!holding.empty()) {
        verbs.push_back(VerbClass::lose);
        verbs.push_back(VerbClass::transfer);
      }
    }

    Event event;
    event.verb = rng.pick(verbs);
    Cell cell;
    switch (event.verb) {
      case VerbClass::observe: cell = rng.pick(unseen); break;
      case VerbClass::gain: cell = rng.pick(mentioned); break;
      default: cell = rng.pick(holding); break;
    }
    event.container = cell.first;
    event.entity = cell.second;
    if (event.verb == VerbClass::lose || event.verb == VerbClass::transfer) {
      ExactDecimal held = state.count(cell.first, cell.second);
      auto held_coef = static_cast<std::int64_t>(held.coefficient() * pow10_coefficient(digits - held.scale()));
      event.quantity = draw_qty(held_coef);
    } else {
      event.quantity = draw_qty(max_coef);
    }
    if (event.verb == VerbClass::transfer) {
      std::vector<std::string> others;
      for (const auto& c : containers)
        if (c != event.container) others.push_back(c);
      event.target = rng.pick(others);
    }

    state.apply(event);
    sentences.push_back(render_event(rng.pick(vocab.sentences.at(event.verb)), event));
    mentioned.push_back(cell);
    remember(mentioned_containers, event.container);
    remember(mentioned_entities, event.entity);
    if (event.verb == VerbClass::transfer) {
      Cell target_cell{event.target, event.entity};
      if (std::find(mentioned.begin(), mentioned.end(), target_cell) == mentioned.end()) mentioned.push_back(target_cell);
      remember(mentioned_containers, event.target);
    }
    out.events.push_back(std::move(event));
  }

  std::vector<QuestionKind> kinds{QuestionKind::how_many, QuestionKind::total};
  if (mentioned_containers.size() >= 2) kinds.push_back(QuestionKind::how_many_more);
  QuestionSpec& q = out.query;
  q.kind = rng.pick(kinds);
  q.entity = rng.pick(mentioned_entities);
  if (q.kind == QuestionKind::how_many) {
    q.container = rng.pick(mentioned_containers);
  } else if (q.kind == QuestionKind::how_many_more) {
    auto pair = sample_distinct(mentioned_containers, 2, rng);
    if (state.count(pair[0], q.entity) < state.count(pair[1], q.entity)) std::swap(pair[0], pair[1]);
    q.container = pair[0];
    q.other_container = pair[1];
  }

  out.context = detail::join(sentences, " ");
  out.question = fill_template(rng.pick(vocab.questions.at(q.kind)),
                               {{"entity", q.entity}, {"container", q.container}, {"other", q.other_container}});
  out.answer = answer_question(state, q);
  return out;
}

void generate_txt(std::size_t count, const TxtGenConfig& config, std::uint64_t seed, const TxtSink& sink) {
  if (count == 0) throw ConfigError("count must be >= 1");
  validate(config);
  detail::run_sharded<TxtExample>(
      count, config.shard_size, config.threads, seed,
      [&](std::size_t, std::uint64_t example_seed) {
        TxtExample example = make_txt_example(config, example_seed);
        if (answer_question(simulate(example.events), example.query) != example.answer)
          throw std::logic_error("TXT self-check failed for seed " + std::to_string(example_seed));
        return example;
      },
      sink);
}

std::vector<TxtExample> generate_txt(std::size_t count, const TxtGenConfig& config, std::uint64_t seed) {
  std::vector<TxtExample> out;
  out.reserve(count);
  generate_txt(count, config, seed, [&](std::size_t, const TxtExample& e) { out.push_back(e); });
  return out;
}

nlohmann::ordered_json to_json(const TxtExample& example) {
  nlohmann::ordered_json j;
  j["context"] = example.context;
  j["question"] = example.question;
  j["answer"] = example.answer;
  j["events"] = nlohmann::ordered_json::array();
  for (const auto& e : example.events) j["events"].push_back(to_json(e));
  j["seed"] = example.rng_seed;
  j["query"] = to_json(example.query);
  return j;
}

TxtExample txt_example_from_json(const nlohmann::json& j) {
  try {
    TxtExample example;
    example.context = j.at("context").get<std::string>();
    example.question = j.at("question").get<std::string>();
    example.answer = j.at("answer").get<std::string>();
    for (const auto& e : j.at("events")) example.events.push_back(event_from_json(e));
    example.rng_seed = j.at("seed").get<std::uint64_t>();
    example.query = question_from_json(j.at("query"));
    return example;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad TXT record: ") + e.what());
  }
}

Example to_example(const TxtExample& example, std::size_t index) {
  Example out;
  out.task = TaskTag::answer_me;
  out.input = format_input(TaskTag::answer_me, example.question, example.context);
  out.target = example.answer;
  out.answer_type = AnswerType::number;
  out.source_id = "txt-" + std::to_string(index);
  return out;
}

}  // namespace nrot

#include "nrot/world.hpp"

#include <array>
#include <utility>

#include "nrot/error.hpp"

namespace nrot {

namespace {

constexpr std::array<std::pair<VerbClass, std::string_view>, 4> kVerbNames{{
    {VerbClass::observe, "observe"},
    {VerbClass::gain, "gain"},
    {VerbClass::lose, "lose"},
    {VerbClass::transfer, "transfer"},
}};

constexpr std::array<std::pair<QuestionKind, std::string_view>, 3> kQuestionNames{{
    {QuestionKind::how_many, "how_many"},
    {QuestionKind::how_many_more, "how_many_more"},
    {QuestionKind::total, "total"},
}};

}  // namespace

std::string_view to_string(VerbClass verb) {
  for (const auto& [v, name] : kVerbNames)
    if (v == verb) return name;
  return "unknown";
}

std::optional<VerbClass> parse_verb_class(std::string_view text) {
  for (const auto& [v, name] : kVerbNames)
    if (name == text) return v;
  return std::nullopt;
}

std::string_view to_string(QuestionKind kind) {
  for (const auto& [k, name] : kQuestionNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<QuestionKind> parse_question_kind(std::string_view text) {
  for (const auto& [k, name] : kQuestionNames)
    if (name == text) return k;
  return std::nullopt;
}

ExactDecimal WorldState::count(const std::string& container, const std::string& entity) const {
  auto c = cells_.find(container);
  if (c == cells_.end()) return {};
  auto e = c->second.find(entity);
  return e == c->second.end() ? ExactDecimal{} : e->second;
}

ExactDecimal WorldState::total(const std::string& entity) const {
  ExactDecimal sum;
  for (const auto& [container, entities] : cells_) {
    auto e = entities.find(entity);
    if (e != entities.end()) sum += e->second;
  }
  return sum;
}

bool WorldState::has_entity(const std::string& entity) const {
  for (const auto& [container, entities] : cells_)
    if (entities.count(entity)) return true;
  return false;
}

void WorldState::apply(const Event& event) {
  if (event.container.empty() || event.entity.empty()) throw ValidationError("event needs a container and an entity");
  if (event.quantity.is_negative()) throw ValidationError("event quantity must be >= 0");

  switch (event.verb) {
    case VerbClass::observe:
      cells_[event.container][event.entity] = event.quantity;
      return;
    case VerbClass::gain: {
      ExactDecimal held = count(event.container, event.entity);
      cells_[event.container][event.entity] = held + event.quantity;
      return;
    }
    case VerbClass::lose: {
      ExactDecimal held = count(event.container, event.entity);
      if (held < event.quantity)
        throw SimulationError(event.container + " cannot lose " + event.quantity.to_string() + " " + event.entity +
                              " while holding " + held.to_string());
      cells_[event.container][event.entity] = held - event.quantity;
      return;
    }
    case VerbClass::transfer: {
      if (event.target.empty() || event.target == event.container)
        throw ValidationError("transfer needs a distinct target container");
      ExactDecimal held = count(event.container, event.entity);
      if (held < event.quantity)
        throw SimulationError(event.container + " cannot give " + event.quantity.to_string() + " " + event.entity +
                              " while holding " + held.to_string());
      ExactDecimal received = count(event.target, event.entity) + event.quantity;
      cells_[event.container][event.entity] = held - event.quantity;
      cells_[event.target][event.entity] = received;
      return;
    }
  }
}

WorldState apply_event(WorldState state, const Event& event) {
  state.apply(event);
  return state;
}

std::string answer_question(const WorldState& state, const QuestionSpec& question) {
  if (!state.has_entity(question.entity))
    throw ValidationError("question refers to unknown entity '" + question.entity + "'");
  auto require = [&](const std::string& container) {
    if (!state.has_container(container)) throw ValidationError("question refers to unknown container '" + container + "'");
  };
  switch (question.kind) {
    case QuestionKind::how_many:
      require(question.container);
      return state.count(question.container, question.entity).to_string();
    case QuestionKind::how_many_more:
      require(question.container);
      require(question.other_container);
      return (state.count(question.container, question.entity) - state.count(question.other_container, question.entity))
          .to_string();
    case QuestionKind::total:
      return state.total(question.entity).to_string();
  }
  throw ValidationError("unknown question kind");
}

nlohmann::ordered_json to_json(const Event& event) {
  nlohmann::ordered_json j;
  j["verb"] = to_string(event.verb);
  j["container"] = event.container;
  j["entity"] = event.entity;
  j["quantity"] = event.quantity.to_string();
  if (event.verb == VerbClass::transfer) j["target"] = event.target;
  return j;
}

Event event_from_json(const nlohmann::json& j) {
  try {
    Event event;
    auto verb = parse_verb_class(j.at("verb").get<std::string>());
    if (!verb) throw ValidationError("unknown verb " + j.at("verb").dump());
    event.verb = *verb;
    event.container = j.at("container").get<std::string>();
    event.entity = j.at("entity").get<std::string>();
    auto quantity = ExactDecimal::try_parse(j.at("quantity").get<std::string>());
    if (!quantity) throw ValidationError("bad quantity " + j.at("quantity").dump());
    event.quantity = *quantity;
    if (event.verb == VerbClass::transfer) event.target = j.at("target").get<std::string>();
    return event;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad event: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const QuestionSpec& question) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(question.kind);
  if (question.kind != QuestionKind::total) j["container"] = question.container;
  if (question.kind == QuestionKind::how_many_more) j["other_container"] = question.other_container;
  j["entity"] = question.entity;
  return j;
}

QuestionSpec question_from_json(const nlohmann::json& j) {
  try {
    QuestionSpec q;
    auto kind = parse_question_kind(j.at("kind").get<std::string>());
    if (!kind) throw ValidationError("unknown question kind " + j.at("kind").dump());
    q.kind = *kind;
    q.entity = j.at("entity").get<std::string>();
    if (q.kind != QuestionKind::total) q.container = j.at("container").get<std::string>();
    if (q.kind == QuestionKind::how_many_more) q.other_container = j.at("other_container").get<std::string>();
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad question: ") + e.what());
  }
}

}  // namespace nrot

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nrot/decimal.hpp"

namespace nrot {

enum class VerbClass { observe, gain, lose, transfer };

std::string_view to_string(VerbClass verb);
std::optional<VerbClass> parse_verb_class(std::string_view text);

/// One narrative state change.
struct Event {
  VerbClass verb = VerbClass::observe;
  std::string container;
  std::string entity;
  ExactDecimal quantity;
  std::string target;  // receiving container, transfer only

  friend bool operator==(const Event&, const Event&) = default;
};

/// Container -> entity -> count. Cells that were never touched read as zero.
class WorldState {
public:
  using Cells = std::map<std::string, std::map<std::string, ExactDecimal>>;

  ExactDecimal count(const std::string& container, const std::string& entity) const;
  /// Sum over all containers.
  ExactDecimal total(const std::string& entity) const;

  bool has_container(const std::string& container) const { return cells_.count(container) != 0; }
  bool has_entity(const std::string& entity) const;

  /// Applies in place. Throws ValidationError for malformed events and
  /// SimulationError when a lose/transfer exceeds the held count; the state
  /// is unchanged on error.
  void apply(const Event& event);

  const Cells& cells() const { return cells_; }

  friend bool operator==(const WorldState&, const WorldState&) = default;

private:
  Cells cells_;
};

/// Value-semantics form of WorldState::apply.
WorldState apply_event(WorldState state, const Event& event);

enum class QuestionKind { how_many, how_many_more, total };

std::string_view to_string(QuestionKind kind);
std::optional<QuestionKind> parse_question_kind(std::string_view text);

struct QuestionSpec {
  QuestionKind kind = QuestionKind::how_many;
  std::string container;        // how_many, how_many_more (minuend)
  std::string other_container;  // how_many_more (subtrahend)
  std::string entity;

  friend bool operator==(const QuestionSpec&, const QuestionSpec&) = default;
};

/// Answer text read from the final state. Containers or entities that never
/// appeared in the state throw ValidationError.
std::string answer_question(const WorldState& state, const QuestionSpec& question);

nlohmann::ordered_json to_json(const Event& event);
Event event_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const QuestionSpec& question);
QuestionSpec question_from_json(const nlohmann::json& j);

}  // namespace nrot

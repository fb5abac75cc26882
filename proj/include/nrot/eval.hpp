#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nrot/corpus.hpp"
#include "nrot/drop.hpp"

namespace nrot {

struct EvalOptions {
  std::string span_delimiter = "; ";  // splits a predicted string into spans
  bool round_f1 = false;              // round each pair F1 to 2 decimals like the leaderboard script
  bool numeric_gate = true;           // false gives plain bag F1
};

/// True when Python's float() would accept `text`: optional sign, digits
/// with single underscores between them, optional fraction and exponent,
/// or inf/infinity/nan. Surrounding whitespace is allowed.
bool is_python_float(std::string_view text);

/// Python repr of a double: shortest round-trip digits, "1e+16" style past
/// 16 integer digits or below 1e-4, otherwise fixed with at least ".0".
std::string python_float_repr(double value);

/// Normalized span: lowercased, split on spaces and hyphens, punctuation
/// removed from non-numeric tokens, numbers canonicalized, articles dropped.
std::string normalize_answer(std::string_view text);

struct AnswerBag {
  std::string normalized;
  std::set<std::string> tokens;
};

AnswerBag to_bag(std::string_view span);

/// Bag F1; precision (recall) is 1 when the predicted (gold) bag is empty.
double bag_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold);

/// False when the gold bag holds numbers and none of them is in the
/// predicted bag.
bool numbers_match(const std::set<std::string>& gold, const std::set<std::string>& predicted);

/// Predicted text split on the delimiter; a text without it is one span.
std::vector<std::string> split_prediction(std::string_view text, std::string_view delimiter);

struct PairScore {
  double em = 0.0;
  double f1 = 0.0;
};

/// Span lists against span lists: EM on the normalized span collections,
/// F1 as the mean over max(#pred, #gold) of an optimal one-to-one alignment.
PairScore score_spans(const std::vector<std::string>& predicted, const std::vector<std::string>& gold,
                      const EvalOptions& options = {});

struct GoldStrings {
  std::vector<std::string> strings;
  AnswerType type = AnswerType::none;
};

/// Scoring view of a gold answer: number, else spans, else the date as
/// "day month year".
GoldStrings scoring_strings(const GoldAnswer& answer);

PairScore score_pair(std::string_view predicted, const GoldAnswer& gold, const EvalOptions& options = {});

struct QuestionScore {
  std::string query_id;
  double em = 0.0;
  double f1 = 0.0;
  AnswerType type = AnswerType::none;  // type of the gold answer that set the max
  bool answered = false;
};

/// Max over gold answers, em and f1 independently. Golds whose first string
/// is blank are skipped.
QuestionScore score(const DropRecord& record, std::string_view predicted, const EvalOptions& options = {});

struct Prediction {
  std::string id;
  std::string text;
};

/// JSONL {"id": ..., "prediction": ...}; prediction may be a string or an
/// array of spans (joined with `span_delimiter`). A leading {"_meta": ...}
/// line and blank lines are skipped. Errors are ParseError with the line.
std::vector<Prediction> read_predictions(std::istream& in, std::string_view span_delimiter = "; ");

struct Aggregate {
  std::size_t count = 0;
  double em = 0.0;
  double f1 = 0.0;
};

struct ScoreReport {
  std::vector<QuestionScore> questions;  // record order
  Aggregate overall;
  std::map<AnswerType, Aggregate> per_type;
  std::size_t answered = 0;
};

/// Scores every record; unanswered questions count as 0. Throws
/// ValidationError listing unknown or duplicated prediction ids.
ScoreReport report(const std::vector<DropRecord>& records, const std::vector<Prediction>& predictions,
                   const EvalOptions& options = {});

nlohmann::ordered_json to_json(const ScoreReport& report, bool include_questions = false);

}  // namespace nrot

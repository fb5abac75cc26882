#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nrot/corpus.hpp"

namespace nrot {

struct DateParts {
  std::string day;
  std::string month;
  std::string year;

  bool empty() const { return day.empty() && month.empty() && year.empty(); }
  friend bool operator==(const DateParts&, const DateParts&) = default;
};

/// One DROP answer annotation. Valid answers populate at least one of
/// number, spans or date.
struct GoldAnswer {
  std::string number;
  std::vector<std::string> spans;
  DateParts date;

  bool empty() const { return number.empty() && spans.empty() && date.empty(); }
  friend bool operator==(const GoldAnswer&, const GoldAnswer&) = default;
};

struct DropRecord {
  std::string passage_id;
  std::string query_id;
  std::string passage;
  std::string question;
  std::vector<GoldAnswer> answers;  // primary annotation first, then validated ones
};

struct SquadRecord {
  std::string id;
  std::string passage;
  std::string question;
  std::vector<std::string> answers;
};

struct IngestIssue {
  std::string question_id;
  std::string message;
};

template <typename Record>
struct IngestResult {
  std::vector<Record> records;
  std::vector<IngestIssue> errors;  // skipped qa pairs
};

/// Reads the public DROP JSON layout, preserving passage and qa order.
/// Malformed JSON throws ParseError with the byte offset; a structurally
/// wrong document throws ValidationError; qa pairs with no usable answer
/// are skipped and listed in `errors`.
IngestResult<DropRecord> ingest_drop(std::istream& source);
IngestResult<DropRecord> ingest_drop(std::string_view json_text);

/// Reads the public SQuAD v1.1 JSON layout.
IngestResult<SquadRecord> ingest_squad(std::istream& source);
IngestResult<SquadRecord> ingest_squad(std::string_view json_text);

/// number > date > spans; one span is `span`, more are `spans`.
AnswerType derive_answer_type(const GoldAnswer& answer);

/// Populated date fields in day, month, year order joined by single spaces.
std::string render_date(const DateParts& date);

/// Target text for an answer: the number, the rendered date, or the spans
/// joined with `span_separator`.
std::string gold_answer_text(const GoldAnswer& answer, std::string_view span_separator = "; ");

/// Gold strings handed to the scorer: one per span, or a single number/date.
std::vector<std::string> gold_answer_spans(const GoldAnswer& answer);

Example make_answer_example(const DropRecord& record, std::string_view span_separator = "; ");
Example make_classification_example(const DropRecord& record);
Example make_squad_example(const SquadRecord& record);

/// Answer-type histogram over each record's first gold answer.
std::map<AnswerType, std::size_t> count_answer_types(const std::vector<DropRecord>& records);

}  // namespace nrot

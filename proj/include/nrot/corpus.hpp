#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nrot {

enum class TaskTag { answer_me, calculate, classify_me, squad_context };
enum class AnswerType { number, date, span, spans, none };

std::string_view to_string(TaskTag tag);
std::string_view to_string(AnswerType type);
std::optional<TaskTag> parse_task_tag(std::string_view text);
std::optional<AnswerType> parse_answer_type(std::string_view text);

/// One prefix-tagged text-to-text training record.
struct Example {
  std::string input;
  std::string target;
  TaskTag task = TaskTag::answer_me;
  AnswerType answer_type = AnswerType::none;
  std::string source_id;

  friend bool operator==(const Example&, const Example&) = default;
};

/// Throws ValidationError if `example` breaks the record invariants:
/// recognized prefix, question before context, non-empty target.
void validate(const Example& example);

/// "<prefix>: <question> context: <context>"; the context part is dropped
/// only for calculate examples with an empty context.
std::string format_input(TaskTag task, std::string_view question, std::string_view context);

struct ParsedInput {
  TaskTag task;
  std::string question;
  std::string context;  // empty when absent
};

/// Inverse of format_input. The first " context: " after the prefix is the
/// separator, so questions must not contain that marker.
ParsedInput parse_input(std::string_view input);

// ---------------------------------------------------------------------------
// Digit tokenization

struct Token {
  std::string text;
  std::string leading_space;  // whitespace between the previous token and this one
};

struct TokenizedText {
  std::vector<Token> tokens;
  std::string trailing_space;
};

/// Splits on whitespace; inside each chunk every digit becomes its own token,
/// as does a '.' flanked by digits. Other characters stay grouped.
TokenizedText digit_tokenize_with_spacing(std::string_view text);
std::vector<std::string> digit_tokenize(std::string_view text);

/// Rebuilds the original text exactly.
std::string detokenize(const TokenizedText& tokenized);

// ---------------------------------------------------------------------------
// Truncation audit

struct LengthLimits {
  std::size_t encoder_max = 512;
  std::size_t decoder_max = 54;
};

using TokenCounter = std::function<std::size_t(std::string_view)>;

/// Number of digit_tokenize tokens.
std::size_t count_digit_tokens(std::string_view text);
/// Number of whitespace-separated words.
std::size_t count_words(std::string_view text);

struct AuditReport {
  std::size_t total = 0;
  std::size_t encoder_cutoff_count = 0;
  std::size_t decoder_cutoff_count = 0;
  double encoder_cutoff_fraction = 0.0;
  double decoder_cutoff_fraction = 0.0;
};

AuditReport audit_truncation(const std::vector<Example>& examples, LengthLimits limits,
                             const TokenCounter& counter = count_digit_tokens);

// ---------------------------------------------------------------------------
// JSONL records: {input, target, task, answer_type, source_id} in that order.

std::string to_jsonl_line(const Example& example);

/// Writes one line per example; returns the number written.
std::size_t write_examples(const std::vector<Example>& examples, std::ostream& sink);

/// Reads records until EOF. Blank lines and one leading `{"_meta": ...}`
/// header line are skipped. Throws ParseError carrying the 1-based line number.
std::vector<Example> read_examples(std::istream& source);

}  // namespace nrot

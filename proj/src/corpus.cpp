#include "nrot/corpus.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "nrot/error.hpp"
#include "text_util.hpp"

namespace nrot {

namespace {

constexpr std::string_view kContextMarker = " context: ";

constexpr std::array<std::pair<TaskTag, std::string_view>, 4> kTaskNames{{
    {TaskTag::answer_me, "answer_me"},
    {TaskTag::calculate, "calculate"},
    {TaskTag::classify_me, "classify_me"},
    {TaskTag::squad_context, "squad_context"},
}};

constexpr std::array<std::pair<AnswerType, std::string_view>, 5> kAnswerTypeNames{{
    {AnswerType::number, "number"},
    {AnswerType::date, "date"},
    {AnswerType::span, "span"},
    {AnswerType::spans, "spans"},
    {AnswerType::none, "none"},
}};

}  // namespace

std::string_view to_string(TaskTag tag) {
  for (const auto& [t, name] : kTaskNames)
    if (t == tag) return name;
  return "unknown";
}

std::string_view to_string(AnswerType type) {
  for (const auto& [t, name] : kAnswerTypeNames)
    if (t == type) return name;
  return "unknown";
}

std::optional<TaskTag> parse_task_tag(std::string_view text) {
  for (const auto& [t, name] : kTaskNames)
    if (name == text) return t;
  return std::nullopt;
}

std::optional<AnswerType> parse_answer_type(std::string_view text) {
  for (const auto& [t, name] : kAnswerTypeNames)
    if (name == text) return t;
  return std::nullopt;
}

std::string format_input(TaskTag task, std::string_view question, std::string_view context) {
  question = detail::trim(question);
  context = detail::trim(context);
  if (question.empty()) throw ValidationError("format_input: question must not be empty");
  if (!parse_task_tag(to_string(task))) throw ValidationError("format_input: unknown task tag");
  if (question.find(kContextMarker) != std::string_view::npos)
    throw ValidationError("format_input: question contains the context marker");

  std::string out(to_string(task));
  out += ": ";
  out += question;
  if (context.empty()) {
    if (task != TaskTag::calculate)
      throw ValidationError("format_input: context may only be empty for calculate examples");
    return out;
  }
  out += kContextMarker;
  out += context;
  return out;
}

ParsedInput parse_input(std::string_view input) {
  auto colon = input.find(": ");
  if (colon == std::string_view::npos) throw ValidationError("input has no task prefix");
  auto tag = parse_task_tag(input.substr(0, colon));
  if (!tag) throw ValidationError("unrecognized task prefix '" + std::string(input.substr(0, colon)) + "'");

  std::string_view rest = input.substr(colon + 2);
  ParsedInput parsed{*tag, {}, {}};
  auto marker = rest.find(kContextMarker);
  if (marker == std::string_view::npos) {
    if (rest.starts_with("context: ")) throw ValidationError("context appears before the question");
    parsed.question = std::string(rest);
  } else {
    parsed.question = std::string(rest.substr(0, marker));
    parsed.context = std::string(rest.substr(marker + kContextMarker.size()));
  }
  if (detail::trim(parsed.question).empty()) throw ValidationError("input has an empty question");
  return parsed;
}

void validate(const Example& example) {
  parse_input(example.input);
  if (example.target.empty()) throw ValidationError("example target must not be empty");
}

// ---------------------------------------------------------------------------

TokenizedText digit_tokenize_with_spacing(std::string_view text) {
  TokenizedText out;
  std::string pending_space;
  std::size_t i = 0;
  while (i < text.size()) {
    if (detail::is_ascii_space(text[i])) {
      pending_space.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && !detail::is_ascii_space(text[end])) ++end;
    std::string_view chunk = text.substr(i, end - i);

    std::string run;
    auto emit = [&](std::string token) {
      out.tokens.push_back(Token{std::move(token), std::move(pending_space)});
      pending_space.clear();
    };
    for (std::size_t k = 0; k < chunk.size(); ++k) {
      char c = chunk[k];
      bool inner_point = c == '.' && k > 0 && k + 1 < chunk.size() && detail::is_ascii_digit(chunk[k - 1]) &&
                         detail::is_ascii_digit(chunk[k + 1]);
      if (detail::is_ascii_digit(c) || inner_point) {
        if (!run.empty()) emit(std::exchange(run, {}));
        emit(std::string(1, c));
      } else {
        run.push_back(c);
      }
    }
    if (!run.empty()) emit(std::move(run));
    i = end;
  }
  out.trailing_space = std::move(pending_space);
  return out;
}

std::vector<std::string> digit_tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& token : digit_tokenize_with_spacing(text).tokens) out.push_back(std::move(token.text));
  return out;
}

std::string detokenize(const TokenizedText& tokenized) {
  std::string out;
  for (const auto& token : tokenized.tokens) {
    out += token.leading_space;
    out += token.text;
  }
  out += tokenized.trailing_space;
  return out;
}

// ---------------------------------------------------------------------------

std::size_t count_digit_tokens(std::string_view text) { return digit_tokenize_with_spacing(text).tokens.size(); }

std::size_t count_words(std::string_view text) { return detail::split_whitespace(text).size(); }

AuditReport audit_truncation(const std::vector<Example>& examples, LengthLimits limits, const TokenCounter& counter) {
  if (limits.encoder_max < 1 || limits.decoder_max < 1) throw ConfigError("length limits must be >= 1");
  AuditReport report;
  report.total = examples.size();
  for (const auto& example : examples) {
    if (counter(example.input) > limits.encoder_max) ++report.encoder_cutoff_count;
    if (counter(example.target) > limits.decoder_max) ++report.decoder_cutoff_count;
  }
  if (report.total > 0) {
    report.encoder_cutoff_fraction =
        static_cast<double>(report.encoder_cutoff_count) / static_cast<double>(report.total);
    report.decoder_cutoff_fraction =
        static_cast<double>(report.decoder_cutoff_count) / static_cast<double>(report.total);
  }
  return report;
}

// ---------------------------------------------------------------------------

std::string to_jsonl_line(const Example& example) {
  nlohmann::ordered_json j;
  j["input"] = example.input;
  j["target"] = example.target;
  j["task"] = to_string(example.task);
  j["answer_type"] = to_string(example.answer_type);
  j["source_id"] = example.source_id;
  return j.dump();
}

std::size_t write_examples(const std::vector<Example>& examples, std::ostream& sink) {
  for (const auto& example : examples) sink << to_jsonl_line(example) << '\n';
  if (!sink) throw IoError("failed writing examples");
  return examples.size();
}

namespace {

Example example_from_json(const nlohmann::json& j) {
  static constexpr std::array<std::string_view, 5> kFields{"input", "target", "task", "answer_type", "source_id"};
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  if (j.size() != kFields.size()) throw ValidationError("record must have exactly the fields input, target, task, answer_type, source_id");
  for (auto field : kFields) {
    auto it = j.find(std::string(field));
    if (it == j.end()) throw ValidationError("missing field '" + std::string(field) + "'");
    if (!it->is_string()) throw ValidationError("field '" + std::string(field) + "' must be a string");
  }
  Example example;
  example.input = j["input"].get<std::string>();
  example.target = j["target"].get<std::string>();
  auto task = parse_task_tag(j["task"].get<std::string>());
  if (!task) throw ValidationError("unknown task '" + j["task"].get<std::string>() + "'");
  example.task = *task;
  auto type = parse_answer_type(j["answer_type"].get<std::string>());
  if (!type) throw ValidationError("unknown answer_type '" + j["answer_type"].get<std::string>() + "'");
  example.answer_type = *type;
  example.source_id = j["source_id"].get<std::string>();
  validate(example);
  if (parse_input(example.input).task != example.task) throw ValidationError("task field does not match input prefix");
  return example;
}

}  // namespace

std::vector<Example> read_examples(std::istream& source) {
  std::vector<Example> out;
  std::string line;
  std::size_t line_number = 0;
  bool seen_record = false;
  while (std::getline(source, line)) {
    ++line_number;
    if (detail::trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("line " + std::to_string(line_number) + ": malformed JSON", line_number);
    if (!seen_record && j.is_object() && j.contains("_meta")) {
      seen_record = true;
      continue;
    }
    seen_record = true;
    try {
      out.push_back(example_from_json(j));
    } catch (const ValidationError& e) {
      throw ParseError("line " + std::to_string(line_number) + ": " + e.what(), line_number);
    }
  }
  return out;
}

}  // namespace nrot

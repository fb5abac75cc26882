#include "nrot/drop.hpp"

#include <istream>
#include <iterator>

#include <json.hpp>

#include "nrot/error.hpp"
#include "text_util.hpp"

namespace nrot {

namespace {

using Json = nlohmann::ordered_json;

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
}

std::string read_all(std::istream& source) {
  return std::string(std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>());
}

// Strings stay as they are; numbers are accepted for robustness.
std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  if (j.is_null()) return {};
  throw ValidationError("expected a string value");
}

GoldAnswer parse_answer(const Json& j) {
  if (!j.is_object()) throw ValidationError("answer is not an object");
  GoldAnswer answer;
  if (auto it = j.find("number"); it != j.end()) answer.number = std::string(detail::trim(scalar_text(*it)));
  if (auto it = j.find("spans"); it != j.end()) {
    if (!it->is_array()) throw ValidationError("answer spans is not an array");
    for (const auto& span : *it) {
      std::string text = scalar_text(span);
      if (!detail::trim(text).empty()) answer.spans.push_back(std::move(text));
    }
  }
  if (auto it = j.find("date"); it != j.end() && it->is_object()) {
    auto field = [&](const char* key) {
      auto f = it->find(key);
      return f == it->end() ? std::string() : std::string(detail::trim(scalar_text(*f)));
    };
    answer.date = DateParts{field("day"), field("month"), field("year")};
  }
  return answer;
}

}  // namespace

IngestResult<DropRecord> ingest_drop(std::string_view json_text) {
  Json doc = parse_document(json_text);
  if (!doc.is_object()) throw ValidationError("DROP file must be a JSON object keyed by passage id");

  IngestResult<DropRecord> result;
  for (const auto& [passage_id, entry] : doc.items()) {
    if (!entry.is_object()) throw ValidationError("passage '" + passage_id + "' is not an object");
    auto passage_it = entry.find("passage");
    auto qa_it = entry.find("qa_pairs");
    if (passage_it == entry.end() || !passage_it->is_string())
      throw ValidationError("passage '" + passage_id + "' has no passage text");
    if (qa_it == entry.end() || !qa_it->is_array())
      throw ValidationError("passage '" + passage_id + "' has no qa_pairs array");

    for (std::size_t k = 0; k < qa_it->size(); ++k) {
      const Json& qa = (*qa_it)[k];
      std::string query_id = passage_id + "#" + std::to_string(k);
      try {
        if (!qa.is_object()) throw ValidationError("qa pair is not an object");
        if (auto id = qa.find("query_id"); id != qa.end() && id->is_string()) query_id = id->get<std::string>();
        auto question = qa.find("question");
        if (question == qa.end() || !question->is_string() || detail::trim(question->get<std::string>()).empty())
          throw ValidationError("missing question");

        DropRecord record;
        record.passage_id = passage_id;
        record.query_id = query_id;
        record.passage = passage_it->get<std::string>();
        record.question = question->get<std::string>();

        std::vector<GoldAnswer> candidates;
        if (auto a = qa.find("answer"); a != qa.end()) candidates.push_back(parse_answer(*a));
        if (auto v = qa.find("validated_answers"); v != qa.end() && v->is_array())
          for (const auto& a : *v) candidates.push_back(parse_answer(a));
        for (auto& c : candidates)
          if (!c.empty()) record.answers.push_back(std::move(c));
        if (record.answers.empty()) throw ValidationError("every answer is empty");
        result.records.push_back(std::move(record));
      } catch (const ValidationError& e) {
        result.errors.push_back(IngestIssue{query_id, e.what()});
      }
    }
  }
  return result;
}

IngestResult<DropRecord> ingest_drop(std::istream& source) { return ingest_drop(read_all(source)); }

IngestResult<SquadRecord> ingest_squad(std::string_view json_text) {
  Json doc = parse_document(json_text);
  if (!doc.is_object() || !doc.contains("data") || !doc["data"].is_array())
    throw ValidationError("SQuAD file must be an object with a data array");

  IngestResult<SquadRecord> result;
  for (const auto& article : doc["data"]) {
    if (!article.is_object() || !article.contains("paragraphs") || !article["paragraphs"].is_array())
      throw ValidationError("SQuAD article without paragraphs array");
    for (const auto& paragraph : article["paragraphs"]) {
      if (!paragraph.is_object() || !paragraph.contains("context") || !paragraph["context"].is_string() ||
          !paragraph.contains("qas") || !paragraph["qas"].is_array())
        throw ValidationError("SQuAD paragraph without context or qas");
      for (const auto& qa : paragraph["qas"]) {
        std::string id = qa.is_object() && qa.contains("id") ? scalar_text(qa["id"]) : std::string("?");
        try {
          if (!qa.is_object() || !qa.contains("question") || !qa["question"].is_string() ||
              detail::trim(qa["question"].get<std::string>()).empty())
            throw ValidationError("missing question");
          SquadRecord record;
          record.id = id;
          record.passage = paragraph["context"].get<std::string>();
          record.question = qa["question"].get<std::string>();
          if (qa.contains("answers") && qa["answers"].is_array()) {
            for (const auto& a : qa["answers"]) {
              if (!a.is_object() || !a.contains("text")) continue;
              std::string text = scalar_text(a["text"]);
              if (!detail::trim(text).empty()) record.answers.push_back(std::move(text));
            }
          }
          if (record.answers.empty()) throw ValidationError("every answer is empty");
          result.records.push_back(std::move(record));
        } catch (const ValidationError& e) {
          result.errors.push_back(IngestIssue{id, e.what()});
        }
      }
    }
  }
  return result;
}

IngestResult<SquadRecord> ingest_squad(std::istream& source) { return ingest_squad(read_all(source)); }

AnswerType derive_answer_type(const GoldAnswer& answer) {
  if (!answer.number.empty()) return AnswerType::number;
  if (!answer.date.empty()) return AnswerType::date;
  if (answer.spans.size() == 1) return AnswerType::span;
  if (answer.spans.size() > 1) return AnswerType::spans;
  throw ValidationError("answer has no number, date or spans");
}

std::string render_date(const DateParts& date) {
  std::vector<std::string> parts;
  for (const auto* field : {&date.day, &date.month, &date.year})
    if (!field->empty()) parts.push_back(*field);
  return detail::join(parts, " ");
}

std::string gold_answer_text(const GoldAnswer& answer, std::string_view span_separator) {
  switch (derive_answer_type(answer)) {
    case AnswerType::number:
      return answer.number;
    case AnswerType::date:
      return render_date(answer.date);
    default:
      return detail::join(answer.spans, span_separator);
  }
}

std::vector<std::string> gold_answer_spans(const GoldAnswer& answer) {
  switch (derive_answer_type(answer)) {
    case AnswerType::number:
      return {answer.number};
    case AnswerType::date:
      return {render_date(answer.date)};
    default:
      return answer.spans;
  }
}

namespace {

const GoldAnswer& first_answer(const DropRecord& record) {
  if (record.answers.empty()) throw ValidationError("record '" + record.query_id + "' has no gold answers");
  return record.answers.front();
}

}  // namespace

Example make_answer_example(const DropRecord& record, std::string_view span_separator) {
  const GoldAnswer& answer = first_answer(record);
  Example example;
  example.task = TaskTag::answer_me;
  example.input = format_input(TaskTag::answer_me, record.question, record.passage);
  example.target = gold_answer_text(answer, span_separator);
  example.answer_type = derive_answer_type(answer);
  example.source_id = record.query_id;
  return example;
}

Example make_classification_example(const DropRecord& record) {
  AnswerType type = derive_answer_type(first_answer(record));
  Example example;
  example.task = TaskTag::classify_me;
  example.input = format_input(TaskTag::classify_me, record.question, record.passage);
  example.target = std::string(to_string(type));
  example.answer_type = type;
  example.source_id = record.query_id;
  return example;
}

Example make_squad_example(const SquadRecord& record) {
  if (record.answers.empty()) throw ValidationError("SQuAD record '" + record.id + "' has no answers");
  Example example;
  example.task = TaskTag::squad_context;
  example.input = format_input(TaskTag::squad_context, record.question, record.passage);
  example.target = record.answers.front();
  example.answer_type = AnswerType::span;
  example.source_id = record.id;
  return example;
}

std::map<AnswerType, std::size_t> count_answer_types(const std::vector<DropRecord>& records) {
  std::map<AnswerType, std::size_t> counts;
  for (const auto& record : records) ++counts[derive_answer_type(first_answer(record))];
  return counts;
}

}  // namespace nrot

#include "nrot/eval.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <unordered_map>

#include "nrot/error.hpp"
#include "nrot/matching.hpp"

namespace nrot {

namespace {

// Whitespace as Python's str.split() sees it, restricted to single bytes.
bool py_space(char c) {
  return c == ' ' || (c >= '\t' && c <= '\r') || (c >= '\x1c' && c <= '\x1f');
}

std::string_view py_strip(std::string_view s) {
  while (!s.empty() && py_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && py_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> py_split(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && py_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !py_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Bytes >= 0x80 are treated as word characters (non-ASCII letters).
bool is_word(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) || c == '_';
}

bool is_punct(char c) {
  static const std::string_view punct = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
  return punct.find(c) != std::string_view::npos;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// digit ("_"? digit)*; returns the end position or `pos` if no digits.
std::size_t scan_digits(std::string_view s, std::size_t pos) {
  if (pos >= s.size() || !is_digit(s[pos])) return pos;
  std::size_t i = pos + 1;
  while (i < s.size()) {
    if (is_digit(s[i])) {
      ++i;
    } else if (s[i] == '_' && i + 1 < s.size() && is_digit(s[i + 1])) {
      i += 2;
    } else {
      break;
    }
  }
  return i;
}

bool is_special(std::string_view body) {
  std::string lower = ascii_lower(body);
  return lower == "inf" || lower == "infinity" || lower == "nan";
}

double parse_python_float(std::string_view text) {
  std::string_view s = py_strip(text);
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  double value;
  if (is_special(s)) {
    value = ascii_lower(s)[0] == 'n' ? std::nan("") : HUGE_VAL;
  } else {
    std::string clean;
    for (char c : s)
      if (c != '_') clean += c;
    value = std::strtod(clean.c_str(), nullptr);
  }
  return negative ? -value : value;
}

std::string remove_articles(const std::string& s) {
  static const std::string_view articles[] = {"a", "an", "the"};
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    bool replaced = false;
    if (i == 0 || !is_word(s[i - 1])) {
      for (auto article : articles) {
        std::size_t end = i + article.size();
        if (s.compare(i, article.size(), article) == 0 && (end == s.size() || !is_word(s[end]))) {
          out += ' ';
          i = end;
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += s[i++];
  }
  return out;
}

std::string normalize_token(std::string_view raw) {
  std::string token = ascii_lower(raw);
  if (!is_python_float(token)) {
    std::string kept;
    for (char c : token)
      if (!is_punct(c)) kept += c;
    token = std::move(kept);
  }
  if (is_python_float(token)) token = python_float_repr(parse_python_float(token));
  std::string joined;
  for (const auto& word : py_split(remove_articles(token))) {
    if (!joined.empty()) joined += ' ';
    joined += word;
  }
  return joined;
}

double numpy_round2(double x) { return std::nearbyint(x * 100.0) / 100.0; }

AnswerType gold_type_from_strings(const GoldAnswer& answer) {
  if (!answer.number.empty()) return AnswerType::number;
  if (!answer.spans.empty()) return answer.spans.size() == 1 ? AnswerType::span : AnswerType::spans;
  return AnswerType::date;
}

}  // namespace

bool is_python_float(std::string_view text) {
  std::string_view s = py_strip(text);
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  if (is_special(s)) return true;

  std::size_t i = scan_digits(s, 0);
  bool int_digits = i > 0;
  bool frac_digits = false;
  if (i < s.size() && s[i] == '.') {
    std::size_t end = scan_digits(s, i + 1);
    frac_digits = end > i + 1;
    i = end;
  }
  if (!int_digits && !frac_digits) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    std::size_t end = scan_digits(s, j);
    if (end == j) return false;
    i = end;
  }
  return i == s.size();
}

std::string python_float_repr(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";

  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));
  std::string out;
  if (sci.front() == '-') {
    out += '-';
    sci.remove_prefix(1);
  }
  std::size_t e = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e))
    if (c != '.') digits += c;
  int exponent = 0;
  std::from_chars(sci.data() + e + 1 + (sci[e + 1] == '+'), sci.data() + sci.size(), exponent);
  const int decpt = exponent + 1;
  const int n = static_cast<int>(digits.size());

  if (decpt > -4 && decpt <= 16) {
    if (decpt <= 0) {
      out += "0." + std::string(static_cast<std::size_t>(-decpt), '0') + digits;
    } else if (decpt >= n) {
      out += digits + std::string(static_cast<std::size_t>(decpt - n), '0') + ".0";
    } else {
      out += digits.substr(0, static_cast<std::size_t>(decpt)) + "." + digits.substr(static_cast<std::size_t>(decpt));
    }
    return out;
  }
  out += digits[0];
  if (n > 1) out += "." + digits.substr(1);
  char exp_buf[16];
  std::snprintf(exp_buf, sizeof exp_buf, "e%c%02d", exponent < 0 ? '-' : '+', std::abs(exponent));
  return out + exp_buf;
}

std::string normalize_answer(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] != ' ' && text[i] != '-') continue;
    std::string part = normalize_token(text.substr(start, i - start));
    if (!part.empty()) {
      if (!out.empty()) out += ' ';
      out += part;
    }
    start = i + 1;
  }
  return out;
}

AnswerBag to_bag(std::string_view span) {
  AnswerBag bag;
  bag.normalized = normalize_answer(span);
  for (auto& word : py_split(bag.normalized)) bag.tokens.insert(std::move(word));
  return bag;
}

double bag_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  std::size_t common = 0;
  for (const auto& t : predicted) common += gold.count(t);
  double precision = predicted.empty() ? 1.0 : static_cast<double>(common) / static_cast<double>(predicted.size());
  double recall = gold.empty() ? 1.0 : static_cast<double>(common) / static_cast<double>(gold.size());
  if (precision == 0.0 && recall == 0.0) return 0.0;
  return 2 * precision * recall / (precision + recall);
}

bool numbers_match(const std::set<std::string>& gold, const std::set<std::string>& predicted) {
  bool gold_has_number = false;
  for (const auto& word : gold) {
    if (!is_python_float(word)) continue;
    gold_has_number = true;
    if (predicted.count(word)) return true;
  }
  return !gold_has_number;
}

std::vector<std::string> split_prediction(std::string_view text, std::string_view delimiter) {
  std::vector<std::string> out;
  if (delimiter.empty()) return {std::string(text)};
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) break;
    out.emplace_back(text.substr(start, pos - start));
    start = pos + delimiter.size();
  }
  out.emplace_back(text.substr(start));
  return out;
}

PairScore score_spans(const std::vector<std::string>& predicted, const std::vector<std::string>& gold,
                      const EvalOptions& options) {
  std::vector<AnswerBag> pred_bags, gold_bags;
  for (const auto& s : predicted) pred_bags.push_back(to_bag(s));
  for (const auto& s : gold) gold_bags.push_back(to_bag(s));

  PairScore result;
  std::set<std::string> pred_set, gold_set;
  for (const auto& b : pred_bags) pred_set.insert(b.normalized);
  for (const auto& b : gold_bags) gold_set.insert(b.normalized);
  result.em = (pred_set == gold_set && pred_bags.size() == gold_bags.size()) ? 1.0 : 0.0;

  const std::size_t slots = std::max(pred_bags.size(), gold_bags.size());
  if (slots == 0) return result;
  std::vector<std::vector<double>> weights(gold_bags.size(), std::vector<double>(pred_bags.size(), 0.0));
  for (std::size_t g = 0; g < gold_bags.size(); ++g)
    for (std::size_t p = 0; p < pred_bags.size(); ++p)
      if (!options.numeric_gate || numbers_match(gold_bags[g].tokens, pred_bags[p].tokens))
        weights[g][p] = bag_f1(pred_bags[p].tokens, gold_bags[g].tokens);

  Assignment assignment = max_weight_assignment(weights);
  double sum = 0.0;
  for (std::size_t g = 0; g < gold_bags.size(); ++g)
    if (assignment.row_to_col[g] >= 0) sum += weights[g][static_cast<std::size_t>(assignment.row_to_col[g])];
  result.f1 = sum / static_cast<double>(slots);
  if (options.round_f1) result.f1 = numpy_round2(result.f1);
  return result;
}

GoldStrings scoring_strings(const GoldAnswer& answer) {
  GoldStrings out;
  out.type = gold_type_from_strings(answer);
  switch (out.type) {
    case AnswerType::number:
      out.strings = {answer.number};
      break;
    case AnswerType::date:
      out.strings = {answer.date.day + " " + answer.date.month + " " + answer.date.year};
      break;
    default:
      out.strings = answer.spans;
  }
  return out;
}

PairScore score_pair(std::string_view predicted, const GoldAnswer& gold, const EvalOptions& options) {
  return score_spans(split_prediction(predicted, options.span_delimiter), scoring_strings(gold).strings, options);
}

QuestionScore score(const DropRecord& record, std::string_view predicted, const EvalOptions& options) {
  QuestionScore q;
  q.query_id = record.query_id;
  q.answered = true;
  const auto spans = split_prediction(predicted, options.span_delimiter);
  for (const auto& answer : record.answers) {
    GoldStrings gold = scoring_strings(answer);
    if (gold.strings.empty() || py_strip(gold.strings[0]).empty()) continue;
    PairScore s = score_spans(spans, gold.strings, options);
    q.em = std::max(q.em, s.em);
    q.f1 = std::max(q.f1, s.f1);
    if (q.em == s.em && q.f1 == s.f1) q.type = gold.type;
  }
  return q;
}

std::vector<Prediction> read_predictions(std::istream& in, std::string_view span_delimiter) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  bool seen_record = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (py_strip(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON in predictions: ") + e.what(), line_no);
    }
    if (!seen_record && j.is_object() && j.contains("_meta")) {
      seen_record = true;
      continue;
    }
    seen_record = true;
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("prediction"))
      throw ParseError("prediction line needs string 'id' and 'prediction'", line_no);
    Prediction p;
    p.id = j["id"].get<std::string>();
    const auto& value = j["prediction"];
    if (value.is_string()) {
      p.text = value.get<std::string>();
    } else if (value.is_array()) {
      std::vector<std::string> parts;
      for (const auto& v : value) {
        if (!v.is_string()) throw ParseError("prediction spans must be strings", line_no);
        parts.push_back(v.get<std::string>());
      }
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) p.text += span_delimiter;
        p.text += parts[i];
      }
    } else {
      throw ParseError("prediction must be a string or an array of strings", line_no);
    }
    out.push_back(std::move(p));
  }
  if (in.bad()) throw IoError("failed reading predictions");
  return out;
}

ScoreReport report(const std::vector<DropRecord>& records, const std::vector<Prediction>& predictions,
                   const EvalOptions& options) {
  std::unordered_map<std::string, const DropRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.query_id, &r);

  std::unordered_map<std::string, const Prediction*> by_pred;
  std::vector<std::string> unknown, duplicated;
  for (const auto& p : predictions) {
    if (!by_id.count(p.id)) unknown.push_back(p.id);
    else if (!by_pred.emplace(p.id, &p).second) duplicated.push_back(p.id);
  }
  if (!unknown.empty() || !duplicated.empty()) {
    std::string msg;
    auto list = [&msg](const char* label, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      if (!msg.empty()) msg += "; ";
      msg += label;
      for (std::size_t i = 0; i < ids.size(); ++i) msg += (i ? ", " : " ") + ids[i];
    };
    list("unknown prediction ids:", unknown);
    list("duplicated prediction ids:", duplicated);
    throw ValidationError(msg);
  }

  ScoreReport rep;
  std::map<AnswerType, std::pair<double, double>> sums;
  double em_sum = 0.0, f1_sum = 0.0;
  for (const auto& record : records) {
    QuestionScore q;
    auto it = by_pred.find(record.query_id);
    if (it != by_pred.end()) {
      q = score(record, it->second->text, options);
      ++rep.answered;
    } else {
      q.query_id = record.query_id;
      if (!record.answers.empty()) q.type = scoring_strings(record.answers.front()).type;
    }
    em_sum += q.em;
    f1_sum += q.f1;
    auto& agg = rep.per_type[q.type];
    ++agg.count;
    sums[q.type].first += q.em;
    sums[q.type].second += q.f1;
    rep.questions.push_back(std::move(q));
  }
  rep.overall.count = records.size();
  if (!records.empty()) {
    rep.overall.em = em_sum / static_cast<double>(records.size());
    rep.overall.f1 = f1_sum / static_cast<double>(records.size());
  }
  for (auto& [type, agg] : rep.per_type) {
    agg.em = sums[type].first / static_cast<double>(agg.count);
    agg.f1 = sums[type].second / static_cast<double>(agg.count);
  }
  return rep;
}

nlohmann::ordered_json to_json(const ScoreReport& rep, bool include_questions) {
  auto agg_json = [](const Aggregate& a) {
    return nlohmann::ordered_json{{"count", a.count}, {"em", a.em}, {"f1", a.f1}};
  };
  nlohmann::ordered_json j;
  j["overall"] = agg_json(rep.overall);
  j["answered"] = rep.answered;
  j["per_type"] = nlohmann::ordered_json::object();
  for (const auto& [type, agg] : rep.per_type) j["per_type"][std::string(to_string(type))] = agg_json(agg);
  if (include_questions) {
    j["questions"] = nlohmann::ordered_json::array();
    for (const auto& q : rep.questions)
      j["questions"].push_back({{"id", q.query_id},
                                {"em", q.em},
                                {"f1", q.f1},
                                {"answer_type", std::string(to_string(q.type))},
                                {"answered", q.answered}});
  }
  return j;
}

}  // namespace nrot

#include "nrot/numgen.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

#include "nrot/error.hpp"
#include "nrot/expr.hpp"
#include "nrot/rng.hpp"
#include "sharding.hpp"
#include "text_util.hpp"

namespace nrot {

namespace {

using Kind = TemplateToken::Kind;

constexpr std::array<std::pair<TemplateFamily, std::string_view>, 6> kFamilyNames{{
    {TemplateFamily::combination, "combination"},
    {TemplateFamily::min_max_avg, "min_max_avg"},
    {TemplateFamily::addition_sub, "addition_sub"},
    {TemplateFamily::argmax_like, "argmax_like"},
    {TemplateFamily::percent, "percent"},
    {TemplateFamily::difference, "difference"},
}};

std::vector<TemplateToken> tokenize_pattern(std::string_view pattern) {
  std::vector<TemplateToken> tokens;
  std::size_t i = 0;
  auto read_index = [&](char symbol) {
    std::size_t start = ++i;
    while (i < pattern.size() && detail::is_ascii_digit(pattern[i])) ++i;
    if (i == start) throw ConfigError(std::string("template slot '") + symbol + "' needs an index");
    return std::stoi(std::string(pattern.substr(start, i - start)));
  };
  while (i < pattern.size()) {
    char c = pattern[i];
    if (detail::is_ascii_space(c)) {
      ++i;
    } else if (c == 's') {
      tokens.push_back({Kind::sign_slot, read_index('s'), {}});
    } else if (c == 'f') {
      tokens.push_back({Kind::number_slot, read_index('f'), {}});
    } else if (c == 'o') {
      tokens.push_back({Kind::op_slot, 0, {}});
      ++i;
    } else if (detail::is_ascii_digit(c)) {
      std::size_t start = i;
      while (i < pattern.size() && (detail::is_ascii_digit(pattern[i]) || pattern[i] == '.')) ++i;
      auto value = ExactDecimal::try_parse(pattern.substr(start, i - start));
      if (!value) throw ConfigError("bad literal in template '" + std::string(pattern) + "'");
      tokens.push_back({Kind::literal, 0, *value});
    } else {
      Kind kind;
      switch (c) {
        case '+': kind = Kind::plus; break;
        case '-': kind = Kind::minus; break;
        case '(': kind = Kind::open_paren; break;
        case ',': kind = Kind::comma; break;
        case ')': kind = Kind::close_paren; break;
        default: throw ConfigError(std::string("unexpected '") + c + "' in template '" + std::string(pattern) + "'");
      }
      tokens.push_back({kind, 0, {}});
      ++i;
    }
  }
  return tokens;
}

bool is_operand(const TemplateToken& t) { return t.kind == Kind::number_slot || t.kind == Kind::literal; }
bool is_sign(const TemplateToken& t) { return t.kind == Kind::sign_slot || t.kind == Kind::plus || t.kind == Kind::minus; }

void check_function_shape(const std::vector<TemplateToken>& tokens, const std::string& pattern) {
  auto bad = [&] { throw ConfigError("function template must look like o(f1, f2, ...): '" + pattern + "'"); };
  if (tokens.size() < 4 || tokens[0].kind != Kind::op_slot || tokens[1].kind != Kind::open_paren ||
      tokens.back().kind != Kind::close_paren)
    bad();
  for (std::size_t k = 2; k + 1 < tokens.size(); ++k) {
    bool want_slot = (k % 2) == 0;
    if (want_slot ? tokens[k].kind != Kind::number_slot : tokens[k].kind != Kind::comma) bad();
  }
  if (tokens[tokens.size() - 2].kind != Kind::number_slot) bad();
}

void check_chain_shape(const std::vector<TemplateToken>& tokens, const std::string& pattern) {
  auto bad = [&] { throw ConfigError("malformed chain template '" + pattern + "'"); };
  std::size_t k = 0;
  if (k < tokens.size() && is_sign(tokens[k])) ++k;
  if (k >= tokens.size() || !is_operand(tokens[k])) bad();
  ++k;
  while (k < tokens.size()) {
    if (!is_sign(tokens[k]) || k + 1 >= tokens.size() || !is_operand(tokens[k + 1])) bad();
    k += 2;
  }
}

// ceil/floor of value * 10^digits as an integer.
std::int64_t grid_bound(const ExactDecimal& value, unsigned digits, bool ceiling) {
  ExactDecimal::Coefficient c = value.coefficient();
  if (value.scale() <= digits) {
    c *= pow10_coefficient(digits - value.scale());
  } else {
    ExactDecimal::Coefficient div = pow10_coefficient(value.scale() - digits);
    ExactDecimal::Coefficient q = c / div;
    ExactDecimal::Coefficient r = c % div;
    if (r != 0 && ceiling && c > 0) ++q;
    if (r != 0 && !ceiling && c < 0) --q;
    c = q;
  }
  if (c > INT64_MAX || c < INT64_MIN) throw ConfigError("number range too large");
  return static_cast<std::int64_t>(c);
}

struct GridChoice {
  unsigned digits;
  std::int64_t lo;
  std::int64_t hi;
};

std::vector<GridChoice> feasible_grids(const NumRange& range) {
  std::vector<GridChoice> out;
  for (unsigned k = range.min_frac_digits; k <= range.max_frac_digits; ++k) {
    std::int64_t lo = grid_bound(range.min, k, true);
    std::int64_t hi = grid_bound(range.max, k, false);
    if (lo <= hi) out.push_back({k, lo, hi});
  }
  return out;
}

ExactDecimal draw_number(const NumRange& range, Rng& rng) {
  auto grids = feasible_grids(range);
  if (grids.empty()) throw ConfigError("empty number range");
  const GridChoice& g = rng.pick(grids);
  return ExactDecimal::from_parts(rng.between(g.lo, g.hi), g.digits);
}

}  // namespace

std::string_view to_string(TemplateFamily family) {
  for (const auto& [f, name] : kFamilyNames)
    if (f == family) return name;
  return "unknown";
}

std::optional<TemplateFamily> parse_template_family(std::string_view text) {
  for (const auto& [f, name] : kFamilyNames)
    if (name == text) return f;
  return std::nullopt;
}

ExprTemplate ExprTemplate::parse(TemplateFamily family, std::string_view pattern, std::vector<std::string> operations,
                                 bool descending) {
  ExprTemplate t;
  t.family_ = family;
  t.pattern_ = std::string(pattern);
  t.tokens_ = tokenize_pattern(pattern);
  t.descending_ = descending;

  std::vector<std::string> seen;
  std::size_t ops = 0;
  for (const auto& tok : t.tokens_) {
    std::string symbol;
    if (tok.kind == Kind::sign_slot) symbol = "s" + std::to_string(tok.index);
    if (tok.kind == Kind::number_slot) symbol = "f" + std::to_string(tok.index);
    if (tok.kind == Kind::op_slot) {
      symbol = "o";
      ++ops;
    }
    if (symbol.empty()) continue;
    if (std::find(seen.begin(), seen.end(), symbol) != seen.end())
      throw ConfigError("duplicate slot '" + symbol + "' in template '" + t.pattern_ + "'");
    seen.push_back(symbol);
    if (tok.kind == Kind::number_slot) ++t.number_slots_;
  }
  if (t.number_slots_ == 0) throw ConfigError("template '" + t.pattern_ + "' has no number slots");

  t.is_function_ = ops > 0;
  if (t.is_function_) {
    check_function_shape(t.tokens_, t.pattern_);
    if (operations.empty()) operations = {"min", "max", "avg"};
    for (const auto& op : operations)
      if (op != "min" && op != "max" && op != "avg") throw ConfigError("unknown operation '" + op + "'");
    t.operations_ = std::move(operations);
  } else {
    check_chain_shape(t.tokens_, t.pattern_);
    if (!operations.empty()) throw ConfigError("chain template '" + t.pattern_ + "' takes no operations");
  }

  if (family == TemplateFamily::combination) {
    for (std::size_t k = 0; k < t.tokens_.size(); ++k) {
      Kind want = (k % 2 == 0) ? Kind::sign_slot : Kind::number_slot;
      if (t.tokens_[k].kind != want)
        throw ConfigError("combination template must alternate sign and number slots: '" + t.pattern_ + "'");
    }
  }
  if (family == TemplateFamily::min_max_avg && ops != 1)
    throw ConfigError("min_max_avg template needs exactly one o slot");
  return t;
}

const NumRange& RangeConfig::for_slot(int index) const {
  auto it = per_slot.find(index);
  return it == per_slot.end() ? default_range : it->second;
}

void validate(const NumRange& range) {
  if (range.min.is_negative()) throw ConfigError("number range minimum must be >= 0");
  if (range.max < range.min) throw ConfigError("empty number range: min > max");
  if (range.min_frac_digits > range.max_frac_digits) throw ConfigError("min_frac_digits exceeds max_frac_digits");
  if (range.max_frac_digits > 12) throw ConfigError("max_frac_digits must be <= 12");
  if (feasible_grids(range).empty()) throw ConfigError("empty number range: no value on the decimal grid");
}

NumExample instantiate(const ExprTemplate& tmpl, std::uint64_t seed, const RangeConfig& ranges,
                       unsigned avg_frac_digits) {
  Rng rng(seed);
  std::vector<bool> negative_sign(tmpl.tokens().size(), false);
  std::vector<ExactDecimal> numbers;
  std::string op;
  for (std::size_t k = 0; k < tmpl.tokens().size(); ++k) {
    const auto& tok = tmpl.tokens()[k];
    switch (tok.kind) {
      case Kind::sign_slot: negative_sign[k] = !rng.coin(); break;
      case Kind::number_slot: numbers.push_back(draw_number(ranges.for_slot(tok.index), rng)); break;
      case Kind::op_slot: op = rng.pick(tmpl.operations()); break;
      default: break;
    }
  }
  if (tmpl.descending()) std::sort(numbers.begin(), numbers.end(), std::greater<>());

  NumExample out;
  out.family = tmpl.family();
  out.rng_seed = seed;

  if (tmpl.is_function()) {
    std::vector<std::string> rendered;
    for (const auto& n : numbers) rendered.push_back(n.to_string());
    out.expression = op + "(" + detail::join(rendered, ", ") + ")";
    if (op == "min") out.answer = *std::min_element(numbers.begin(), numbers.end());
    else if (op == "max") out.answer = *std::max_element(numbers.begin(), numbers.end());
    else out.answer = mean_rounded(numbers, avg_frac_digits);
    return out;
  }

  std::size_t next_number = 0;
  bool negative = false;
  bool first = true;
  for (std::size_t k = 0; k < tmpl.tokens().size(); ++k) {
    const auto& tok = tmpl.tokens()[k];
    if (is_sign(tok)) {
      negative = tok.kind == Kind::minus || (tok.kind == Kind::sign_slot && negative_sign[k]);
      continue;
    }
    const ExactDecimal& value = tok.kind == Kind::literal ? tok.value : numbers[next_number++];
    // fold a negative operand into the operator: "a - 3", not "a + -3"
    bool minus = negative != value.is_negative();
    if (first) out.expression += minus ? "-" : "";
    else out.expression += minus ? " - " : " + ";
    out.expression += value.abs().to_string();
    out.answer = negative ? out.answer - value : out.answer + value;
    negative = false;
    first = false;
  }
  return out;
}

NumGenConfig NumGenConfig::defaults() {
  NumGenConfig config;
  auto add = [&](TemplateFamily family, std::string_view pattern, std::vector<std::string> ops, bool descending,
                 bool reconstructed) {
    FamilySpec spec{ExprTemplate::parse(family, pattern, std::move(ops), descending), 1, {}, reconstructed};
    config.families.push_back(std::move(spec));
  };
  add(TemplateFamily::combination, "s1 f1 s2 f2 s3 f3", {}, false, false);
  add(TemplateFamily::min_max_avg, "o(f1, f2, f3)", {"min", "max", "avg"}, false, false);
  add(TemplateFamily::addition_sub, "f1 s1 f2", {}, false, true);
  add(TemplateFamily::argmax_like, "o(f1, f2, f3, f4, f5)", {"min", "max"}, false, true);
  add(TemplateFamily::percent, "100 - f1", {}, false, true);
  config.families.back().ranges.default_range.max = ExactDecimal::from_integer(100);
  add(TemplateFamily::difference, "f1 - f2", {}, true, true);
  return config;
}

void validate(const NumGenConfig& config) {
  if (config.families.empty()) throw ConfigError("no template families enabled");
  unsigned long long total = 0;
  for (const auto& family : config.families) {
    validate(family.ranges.default_range);
    for (const auto& [slot, range] : family.ranges.per_slot) validate(range);
    total += family.weight;
  }
  if (total == 0) throw ConfigError("template family weights sum to zero");
  if (config.shard_size == 0) throw ConfigError("shard_size must be >= 1");
  if (config.avg_frac_digits > 12) throw ConfigError("avg_frac_digits must be <= 12");
}

namespace {

NumExample generate_one(const NumGenConfig& config, std::uint64_t example_seed, unsigned total_weight) {
  Rng picker(derive_seed(example_seed, 0));
  std::uint64_t ticket = picker.below(total_weight);
  const FamilySpec* chosen = &config.families.back();
  for (const auto& family : config.families) {
    if (ticket < family.weight) {
      chosen = &family;
      break;
    }
    ticket -= family.weight;
  }

  NumExample example = instantiate(chosen->tmpl, example_seed, chosen->ranges, config.avg_frac_digits);
  if (eval_expr(example.expression, config.avg_frac_digits) != example.answer)
    throw std::logic_error("NUM self-check failed for '" + example.expression + "'");
  return example;
}

}  // namespace

void generate_num(std::size_t count, const NumGenConfig& config, std::uint64_t seed, const NumSink& sink) {
  if (count == 0) throw ConfigError("count must be >= 1");
  validate(config);
  unsigned total_weight = 0;
  for (const auto& family : config.families) total_weight += family.weight;

  detail::run_sharded<NumExample>(
      count, config.shard_size, config.threads, seed,
      [&](std::size_t, std::uint64_t example_seed) { return generate_one(config, example_seed, total_weight); }, sink);
}

std::vector<NumExample> generate_num(std::size_t count, const NumGenConfig& config, std::uint64_t seed) {
  std::vector<NumExample> out;
  out.reserve(count);
  generate_num(count, config, seed, [&](std::size_t, const NumExample& e) { out.push_back(e); });
  return out;
}

nlohmann::ordered_json to_json(const NumExample& example) {
  nlohmann::ordered_json j;
  j["expression"] = example.expression;
  j["answer"] = example.answer.to_string();
  j["family"] = to_string(example.family);
  j["seed"] = example.rng_seed;
  return j;
}

Example to_example(const NumExample& example, std::size_t index) {
  Example out;
  out.task = TaskTag::calculate;
  out.input = format_input(TaskTag::calculate, example.expression, "");
  out.target = example.answer.to_string();
  out.answer_type = AnswerType::number;
  out.source_id = "num-" + std::to_string(index);
  return out;
}

namespace {

nlohmann::ordered_json range_to_json(const NumRange& r) {
  nlohmann::ordered_json j;
  j["min"] = r.min.to_string();
  j["max"] = r.max.to_string();
  j["min_frac_digits"] = r.min_frac_digits;
  j["max_frac_digits"] = r.max_frac_digits;
  return j;
}

NumRange range_from_json(const nlohmann::json& j, NumRange base) {
  if (!j.is_object()) throw ConfigError("range must be an object");
  auto decimal = [](const nlohmann::json& v) {
    auto d = ExactDecimal::try_parse(v.is_string() ? v.get<std::string>() : v.dump());
    if (!d) throw ConfigError("range bound is not a decimal: " + v.dump());
    return *d;
  };
  if (j.contains("min")) base.min = decimal(j["min"]);
  if (j.contains("max")) base.max = decimal(j["max"]);
  if (j.contains("min_frac_digits")) base.min_frac_digits = j["min_frac_digits"].get<unsigned>();
  if (j.contains("max_frac_digits")) base.max_frac_digits = j["max_frac_digits"].get<unsigned>();
  return base;
}

}  // namespace

nlohmann::ordered_json to_json(const NumGenConfig& config) {
  nlohmann::ordered_json j;
  j["avg_frac_digits"] = config.avg_frac_digits;
  j["shard_size"] = config.shard_size;
  j["families"] = nlohmann::ordered_json::array();
  for (const auto& f : config.families) {
    nlohmann::ordered_json fj;
    fj["family"] = to_string(f.tmpl.family());
    fj["pattern"] = f.tmpl.pattern();
    fj["weight"] = f.weight;
    fj["operations"] = f.tmpl.operations();
    fj["descending"] = f.tmpl.descending();
    fj["reconstructed"] = f.reconstructed;
    fj["range"] = range_to_json(f.ranges.default_range);
    nlohmann::ordered_json slots = nlohmann::ordered_json::object();
    for (const auto& [slot, range] : f.ranges.per_slot) slots[std::to_string(slot)] = range_to_json(range);
    fj["slot_ranges"] = slots;
    j["families"].push_back(fj);
  }
  return j;
}

NumGenConfig num_config_from_json(const nlohmann::json& j) {
  try {
    NumGenConfig config = NumGenConfig::defaults();
    if (!j.is_object()) throw ConfigError("NUM config must be a JSON object");
    if (j.contains("avg_frac_digits")) config.avg_frac_digits = j["avg_frac_digits"].get<unsigned>();
    if (j.contains("shard_size")) config.shard_size = j["shard_size"].get<std::size_t>();
    if (j.contains("families")) {
      std::vector<FamilySpec> families;
      for (const auto& fj : j["families"]) {
        auto family = parse_template_family(fj.at("family").get<std::string>());
        if (!family) throw ConfigError("unknown template family " + fj.at("family").dump());
        auto ops = fj.value("operations", std::vector<std::string>{});
        FamilySpec spec{ExprTemplate::parse(*family, fj.at("pattern").get<std::string>(), ops, fj.value("descending", false)),
                        fj.value("weight", 1u), {}, fj.value("reconstructed", true)};
        if (fj.contains("range")) spec.ranges.default_range = range_from_json(fj["range"], spec.ranges.default_range);
        if (fj.contains("slot_ranges"))
          for (const auto& [slot, rj] : fj["slot_ranges"].items())
            spec.ranges.per_slot[std::stoi(slot)] = range_from_json(rj, spec.ranges.default_range);
        families.push_back(std::move(spec));
      }
      config.families = std::move(families);
    }
    validate(config);
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad NUM config: ") + e.what());
  }
}

}  // namespace nrot

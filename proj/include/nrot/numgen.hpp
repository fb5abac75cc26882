#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nrot/corpus.hpp"
#include "nrot/decimal.hpp"

namespace nrot {

enum class TemplateFamily { combination, min_max_avg, addition_sub, argmax_like, percent, difference };

std::string_view to_string(TemplateFamily family);
std::optional<TemplateFamily> parse_template_family(std::string_view text);

struct TemplateToken {
  enum class Kind { sign_slot, number_slot, op_slot, literal, plus, minus, open_paren, comma, close_paren };
  Kind kind;
  int index = 0;  // slot number for s/f slots
  ExactDecimal value;  // literal value
};

/// Symbolic recipe such as "s1 f1 s2 f2 s3 f3" or "o(f1, f2, f3)".
///
/// Chain patterns are `[sN] operand ((sN | + | -) operand)*` where an operand
/// is a number slot fN or a literal; function patterns are
/// `o(fA, fB, ...)`. Number slots are filled in order of appearance.
class ExprTemplate {
public:
  static ExprTemplate parse(TemplateFamily family, std::string_view pattern,
                            std::vector<std::string> operations = {}, bool descending = false);

  TemplateFamily family() const { return family_; }
  const std::string& pattern() const { return pattern_; }
  const std::vector<TemplateToken>& tokens() const { return tokens_; }
  bool is_function() const { return is_function_; }
  std::size_t number_slots() const { return number_slots_; }
  /// Choices for the `o` slot (subset of min, max, avg).
  const std::vector<std::string>& operations() const { return operations_; }
  /// Number slots are sorted descending after drawing (keeps f1 - f2 >= 0).
  bool descending() const { return descending_; }

private:
  TemplateFamily family_ = TemplateFamily::combination;
  std::string pattern_;
  std::vector<TemplateToken> tokens_;
  std::vector<std::string> operations_;
  std::size_t number_slots_ = 0;
  bool is_function_ = false;
  bool descending_ = false;
};

/// Values are drawn on the grid 10^-k for a digit count k chosen uniformly
/// in [min_frac_digits, max_frac_digits] among counts with a non-empty grid.
struct NumRange {
  ExactDecimal min = ExactDecimal::from_integer(0);
  ExactDecimal max = ExactDecimal::from_integer(20000);
  unsigned min_frac_digits = 0;
  unsigned max_frac_digits = 2;
};

struct RangeConfig {
  NumRange default_range;
  std::map<int, NumRange> per_slot;  // keyed by number-slot index (f1 -> 1)

  const NumRange& for_slot(int index) const;
};

/// Throws ConfigError when the range holds no grid value.
void validate(const NumRange& range);

struct NumExample {
  std::string expression;
  ExactDecimal answer;
  TemplateFamily family = TemplateFamily::combination;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const NumExample&, const NumExample&) = default;
};

/// Fills every slot from a generator seeded with `seed`.
NumExample instantiate(const ExprTemplate& tmpl, std::uint64_t seed, const RangeConfig& ranges,
                       unsigned avg_frac_digits = 2);

struct FamilySpec {
  ExprTemplate tmpl;
  unsigned weight = 1;
  RangeConfig ranges;
  bool reconstructed = false;  // true unless the pattern is one of the two documented examples
};

struct NumGenConfig {
  std::vector<FamilySpec> families;
  unsigned avg_frac_digits = 2;
  std::size_t shard_size = 4096;
  unsigned threads = 1;

  /// The six built-in families with equal weights.
  static NumGenConfig defaults();
};

void validate(const NumGenConfig& config);

using NumSink = std::function<void(std::size_t index, const NumExample&)>;

/// Emits `count` examples in index order. Example i lives in shard
/// i / shard_size, seeded by derive_seed(derive_seed(seed, shard), offset),
/// so output does not depend on the thread count. Each example is
/// re-evaluated with eval_expr before emission.
void generate_num(std::size_t count, const NumGenConfig& config, std::uint64_t seed, const NumSink& sink);
std::vector<NumExample> generate_num(std::size_t count, const NumGenConfig& config, std::uint64_t seed);

/// {expression, answer, family, seed}
nlohmann::ordered_json to_json(const NumExample& example);
/// Corpus record with task calculate.
Example to_example(const NumExample& example, std::size_t index);

/// Reads the family/range schema written by to_json(NumGenConfig).
NumGenConfig num_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const NumGenConfig& config);

}  // namespace nrot

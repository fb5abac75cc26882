#include "nrot/decimal.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "nrot/error.hpp"

namespace nrot {

using Coefficient = ExactDecimal::Coefficient;

namespace {

constexpr std::array<Coefficient, 39> make_pow10_table() {
  std::array<Coefficient, 39> table{};
  Coefficient v = 1;
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = v;
    if (i + 1 < table.size()) v *= 10;
  }
  return table;
}

constexpr auto kPow10 = make_pow10_table();

Coefficient checked_mul(Coefficient a, Coefficient b) {
  Coefficient out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("ExactDecimal: coefficient overflow");
  return out;
}

Coefficient checked_add(Coefficient a, Coefficient b) {
  Coefficient out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("ExactDecimal: coefficient overflow");
  return out;
}

Coefficient checked_sub(Coefficient a, Coefficient b) {
  Coefficient out;
  if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("ExactDecimal: coefficient overflow");
  return out;
}

// Rescale both operands to the larger scale.
std::pair<Coefficient, Coefficient> aligned(const ExactDecimal& a, const ExactDecimal& b, unsigned& scale) {
  scale = std::max(a.scale(), b.scale());
  return {checked_mul(a.coefficient(), pow10_coefficient(scale - a.scale())),
          checked_mul(b.coefficient(), pow10_coefficient(scale - b.scale()))};
}

// numerator / denominator (denominator > 0), rounded half to even.
Coefficient divide_half_even(Coefficient numerator, Coefficient denominator) {
  Coefficient q = numerator / denominator;
  Coefficient r = numerator % denominator;
  if (r == 0) return q;
  Coefficient twice = checked_mul(r < 0 ? -r : r, 2);
  bool away = twice > denominator || (twice == denominator && (q % 2 != 0));
  if (away) q += (numerator < 0) ? -1 : 1;
  return q;
}

}  // namespace

Coefficient pow10_coefficient(unsigned exponent) {
  if (exponent >= kPow10.size()) throw std::overflow_error("ExactDecimal: power of ten out of range");
  return kPow10[exponent];
}

std::string coefficient_to_string(Coefficient value) {
  if (value == 0) return "0";
  bool negative = value < 0;
  std::string digits;
  while (value != 0) {
    int d = static_cast<int>(value % 10);
    digits.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
    value /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

void ExactDecimal::normalize() {
  if (coefficient_ == 0) {
    scale_ = 0;
    return;
  }
  while (scale_ > 0 && coefficient_ % 10 == 0) {
    coefficient_ /= 10;
    --scale_;
  }
}

ExactDecimal ExactDecimal::from_integer(std::int64_t value) { return ExactDecimal(value, 0); }

ExactDecimal ExactDecimal::from_parts(Coefficient coefficient, unsigned scale) {
  if (scale > kMaxScale) throw std::overflow_error("ExactDecimal: scale exceeds maximum");
  ExactDecimal d(coefficient, scale);
  d.normalize();
  return d;
}

std::optional<ExactDecimal> ExactDecimal::try_parse(std::string_view text) {
  try {
    return parse(text);
  } catch (const ParseError&) {
    return std::nullopt;
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

ExactDecimal ExactDecimal::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  if (i >= text.size() || !is_digit(text[i])) throw ParseError("expected digit", i + 1);

  Coefficient coef = 0;
  unsigned scale = 0;
  while (i < text.size() && is_digit(text[i])) {
    coef = checked_add(checked_mul(coef, 10), text[i] - '0');
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    if (i >= text.size() || !is_digit(text[i])) throw ParseError("expected digit after '.'", i + 1);
    while (i < text.size() && is_digit(text[i])) {
      if (++scale > kMaxScale) throw ParseError("too many fractional digits", i + 1);
      coef = checked_add(checked_mul(coef, 10), text[i] - '0');
      ++i;
    }
  }
  if (i != text.size()) throw ParseError(std::string("unexpected character '") + text[i] + "'", i + 1);
  return from_parts(negative ? -coef : coef, scale);
}

std::string ExactDecimal::to_string() const {
  Coefficient magnitude = coefficient_ < 0 ? -coefficient_ : coefficient_;
  std::string digits = coefficient_to_string(magnitude);
  if (scale_ > 0) {
    if (digits.size() <= scale_) digits.insert(0, scale_ - digits.size() + 1, '0');
    digits.insert(digits.size() - scale_, 1, '.');
  }
  if (coefficient_ < 0) digits.insert(0, 1, '-');
  return digits;
}

ExactDecimal ExactDecimal::operator-() const { return ExactDecimal(checked_sub(0, coefficient_), scale_); }

ExactDecimal operator+(const ExactDecimal& a, const ExactDecimal& b) {
  unsigned scale = 0;
  auto [x, y] = aligned(a, b, scale);
  return ExactDecimal::from_parts(checked_add(x, y), scale);
}

ExactDecimal operator-(const ExactDecimal& a, const ExactDecimal& b) {
  unsigned scale = 0;
  auto [x, y] = aligned(a, b, scale);
  return ExactDecimal::from_parts(checked_sub(x, y), scale);
}

std::strong_ordering operator<=>(const ExactDecimal& a, const ExactDecimal& b) {
  unsigned scale = 0;
  auto [x, y] = aligned(a, b, scale);
  return x <=> y;
}

ExactDecimal ExactDecimal::divide_rounded(std::int64_t divisor, unsigned frac_digits) const {
  if (divisor == 0) throw std::domain_error("ExactDecimal: division by zero");
  if (frac_digits > kMaxScale) throw std::overflow_error("ExactDecimal: scale exceeds maximum");
  Coefficient numerator = coefficient_;
  Coefficient denominator = divisor;
  if (denominator < 0) {
    numerator = checked_sub(0, numerator);
    denominator = -denominator;
  }
  // value = coefficient / (10^scale * divisor); target = value * 10^frac_digits.
  if (frac_digits >= scale_) {
    numerator = checked_mul(numerator, pow10_coefficient(frac_digits - scale_));
  } else {
    denominator = checked_mul(denominator, pow10_coefficient(scale_ - frac_digits));
  }
  return from_parts(divide_half_even(numerator, denominator), frac_digits);
}

ExactDecimal ExactDecimal::round_half_even(unsigned frac_digits) const {
  if (frac_digits >= scale_) return *this;
  return divide_rounded(1, frac_digits);
}

ExactDecimal mean_rounded(std::span<const ExactDecimal> values, unsigned frac_digits) {
  if (values.empty()) throw std::invalid_argument("mean of empty list");
  ExactDecimal sum;
  for (const auto& v : values) sum += v;
  return sum.divide_rounded(static_cast<std::int64_t>(values.size()), frac_digits);
}

}  // namespace nrot

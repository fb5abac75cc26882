#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace nrot {

__extension__ typedef __int128 int128_t;

/// Exact base-10 number: a signed integer coefficient times 10^-scale.
///
/// Values are kept normalized (no trailing fractional zeros), so two equal
/// values always have identical representation and `==` is value equality.
/// Arithmetic is exact and throws std::overflow_error instead of wrapping.
class ExactDecimal {
public:
  using Coefficient = int128_t;
  static constexpr unsigned kMaxScale = 30;

  ExactDecimal() = default;

  static ExactDecimal from_integer(std::int64_t value);
  /// coefficient * 10^-scale, normalized.
  static ExactDecimal from_parts(Coefficient coefficient, unsigned scale);

  /// Accepts `[+-]?digits(.digits)?`. Throws ParseError (1-based column).
  static ExactDecimal parse(std::string_view text);
  static std::optional<ExactDecimal> try_parse(std::string_view text);

  /// Plain decimal text, '-' for negatives, no exponent, no trailing zeros.
  std::string to_string() const;

  Coefficient coefficient() const noexcept { return coefficient_; }
  unsigned scale() const noexcept { return scale_; }
  bool is_zero() const noexcept { return coefficient_ == 0; }
  bool is_negative() const noexcept { return coefficient_ < 0; }

  ExactDecimal operator-() const;
  ExactDecimal abs() const { return is_negative() ? -*this : *this; }

  friend ExactDecimal operator+(const ExactDecimal& a, const ExactDecimal& b);
  friend ExactDecimal operator-(const ExactDecimal& a, const ExactDecimal& b);
  ExactDecimal& operator+=(const ExactDecimal& other) { return *this = *this + other; }
  ExactDecimal& operator-=(const ExactDecimal& other) { return *this = *this - other; }

  friend bool operator==(const ExactDecimal&, const ExactDecimal&) = default;
  friend std::strong_ordering operator<=>(const ExactDecimal& a, const ExactDecimal& b);

  /// this / divisor, rounded half-to-even at `frac_digits` fractional digits.
  ExactDecimal divide_rounded(std::int64_t divisor, unsigned frac_digits) const;
  ExactDecimal round_half_even(unsigned frac_digits) const;

private:
  ExactDecimal(Coefficient c, unsigned s) : coefficient_(c), scale_(s) {}
  void normalize();

  Coefficient coefficient_ = 0;
  unsigned scale_ = 0;
};

/// Exact mean rounded half-to-even at `frac_digits`. Empty input throws.
ExactDecimal mean_rounded(std::span<const ExactDecimal> values, unsigned frac_digits);

/// 10^exponent as a coefficient; exponent <= 38.
ExactDecimal::Coefficient pow10_coefficient(unsigned exponent);

std::string coefficient_to_string(ExactDecimal::Coefficient value);

}  // namespace nrot

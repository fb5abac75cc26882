#include "nrot/expr.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "nrot/error.hpp"
#include "text_util.hpp"

namespace nrot {

namespace {

class ExprParser {
public:
  ExprParser(std::string_view text, unsigned avg_frac_digits) : text_(text), avg_frac_digits_(avg_frac_digits) {}

  ExactDecimal parse() {
    skip_space();
    ExactDecimal value = is_letter(peek()) ? function_call() : chain();
    skip_space();
    if (!at_end()) fail_unexpected();
    return value;
  }

private:
  static bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  std::size_t column() const { return pos_ + 1; }

  void skip_space() {
    while (!at_end() && detail::is_ascii_space(text_[pos_])) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + " at column " + std::to_string(column()), column());
  }

  [[noreturn]] void fail_unexpected() const {
    char c = peek();
    if (c == '*' || c == '/' || c == '^' || c == '%') fail(std::string("unsupported operator '") + c + "'");
    if (at_end()) fail("unexpected end of expression");
    fail(std::string("unexpected character '") + c + "'");
  }

  ExactDecimal literal(bool allow_sign) {
    std::size_t start = pos_;
    if (allow_sign && (peek() == '-' || peek() == '+')) ++pos_;
    if (!detail::is_ascii_digit(peek())) fail_unexpected();
    while (detail::is_ascii_digit(peek())) ++pos_;
    if (peek() == '.') {
      ++pos_;
      if (!detail::is_ascii_digit(peek())) fail("expected digit after '.'");
      while (detail::is_ascii_digit(peek())) ++pos_;
    }
    try {
      return ExactDecimal::parse(text_.substr(start, pos_ - start));
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()) + " in literal at column " + std::to_string(start + 1), start + 1);
    } catch (const std::overflow_error&) {
      throw ParseError("literal out of range at column " + std::to_string(start + 1), start + 1);
    }
  }

  ExactDecimal chain() {
    ExactDecimal total;
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      ++pos_;
      skip_space();
    }
    total = literal(false);
    if (negative) total = -total;
    for (;;) {
      skip_space();
      char op = peek();
      if (op != '+' && op != '-') break;
      ++pos_;
      skip_space();
      ExactDecimal rhs = literal(false);
      total = op == '+' ? total + rhs : total - rhs;
    }
    return total;
  }

  ExactDecimal function_call() {
    std::size_t start = pos_;
    while (is_letter(peek())) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name != "min" && name != "max" && name != "avg") {
      pos_ = start;
      fail("unsupported operator '" + name + "'");
    }
    skip_space();
    if (peek() != '(') fail("expected '('");
    ++pos_;

    std::vector<ExactDecimal> args;
    for (;;) {
      skip_space();
      args.push_back(literal(true));
      skip_space();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        break;
      }
      fail_unexpected();
    }
    if (name == "min") return *std::min_element(args.begin(), args.end());
    if (name == "max") return *std::max_element(args.begin(), args.end());
    return mean_rounded(args, avg_frac_digits_);
  }

  std::string_view text_;
  unsigned avg_frac_digits_;
  std::size_t pos_ = 0;
};

}  // namespace

ExactDecimal eval_expr(std::string_view expression, unsigned avg_frac_digits) {
  return ExprParser(expression, avg_frac_digits).parse();
}

}  // namespace nrot

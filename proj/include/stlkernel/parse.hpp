#pragma once

// Recursive-descent parser for the concrete formula grammar:
//
//   formula := "true" | atom
//            | "(" "not" formula ")"
//            | "(" formula ("and"|"or") formula ")"
//            | "(" formula "U[" int "," int "]" formula ")"
//            | "(" ("F"|"G") "[" int "," int "]" formula ")"
//            | "(" formula ")"
//   atom    := "(" "x" int (">="|"<=") real ")"
//
// Whitespace-insensitive; reals in decimal or scientific notation.

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "stlkernel/errors.hpp"
#include "stlkernel/formula.hpp"

namespace stlkernel {

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input", describe_here());
    return f;
  }

 private:
  Formula formula() {
    skip_ws();
    if (eat_word("true")) return Formula::top();
    expect('(');
    skip_ws();
    if (eat_word("not")) {
      Formula child = formula();
      expect(')');
      return Formula::negation(std::move(child));
    }
    if (peek() == 'F' || peek() == 'G') {
      const char op = advance();
      auto [lo, hi] = interval();
      Formula child = formula();
      expect(')');
      return op == 'F' ? Formula::eventually(lo, hi, std::move(child))
                       : Formula::globally(lo, hi, std::move(child));
    }
    if (peek() == 'x') return atom_body();
    // "(" formula ... — grouped, binary, or until.
    Formula lhs = formula();
    skip_ws();
    if (eat(')')) return lhs;
    if (eat_word("and")) {
      Formula rhs = formula();
      expect(')');
      return Formula::conjunction(std::move(lhs), std::move(rhs));
    }
    if (eat_word("or")) {
      Formula rhs = formula();
      expect(')');
      return Formula::disjunction(std::move(lhs), std::move(rhs));
    }
    if (eat('U')) {
      auto [lo, hi] = interval();
      Formula rhs = formula();
      expect(')');
      return Formula::until(lo, hi, std::move(lhs), std::move(rhs));
    }
    fail("')', 'and', 'or' or 'U[a,b]'", describe_here());
  }

  Formula atom_body() {
    expect('x');
    const int var = nonneg_int("variable index");
    skip_ws();
    AtomOp op;
    if (eat_seq(">=")) {
      op = AtomOp::Geq;
    } else if (eat_seq("<=")) {
      op = AtomOp::Leq;
    } else {
      fail("'>=' or '<='", describe_here());
    }
    const double theta = real("threshold");
    expect(')');
    return Formula::atom(var, op, theta);
  }

  std::pair<int, int> interval() {
    skip_ws();
    expect('[');
    const std::size_t at = pos_;
    const int lo = bound();
    expect(',');
    const int hi = bound();
    expect(']');
    if (lo >= hi)
      throw ParseError(at, "interval with a < b",
                       "malformed interval [" + std::to_string(lo) + "," +
                           std::to_string(hi) + "]");
    return {lo, hi};
  }

  int bound() {
    skip_ws();
    if (peek() == '-') throw ParseError(pos_, "nonnegative time bound", describe_here());
    return nonneg_int("time bound");
  }

  int nonneg_int(const char* what) {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(what, describe_here());
    int value = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc{}) fail(what, describe_here());
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return value;
  }

  double real(const char* what) {
    skip_ws();
    double value = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc{} || res.ptr == text_.data() + pos_) fail(what, describe_here());
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return value;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  char advance() { return text_[pos_++]; }

  bool eat(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  bool eat_seq(std::string_view s) {
    skip_ws();
    if (text_.substr(pos_, s.size()) != s) return false;
    pos_ += s.size();
    return true;
  }

  // Keyword followed by a non-identifier character.
  bool eat_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    const std::size_t after = pos_ + w.size();
    if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after])))
      return false;
    pos_ = after;
    return true;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("'") + c + "'", describe_here());
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& expected, const std::string& got) {
    throw ParseError(pos_, expected, got);
  }

  std::string describe_here() const {
    if (pos_ >= text_.size()) return "end of input";
    std::size_t end = pos_;
    while (end < text_.size() && end < pos_ + 12 &&
           !std::isspace(static_cast<unsigned char>(text_[end])))
      ++end;
    return "'" + std::string(text_.substr(pos_, end - pos_)) + "'";
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace stlkernel

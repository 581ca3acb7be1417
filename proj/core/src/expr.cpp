#include "pjd/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "pjd/error.hpp"

namespace pjd {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const StateSpace& space)
      : s_(text), space_(space), ambient_(StateSpace::euclidean(space.coords())) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Parse, what + " at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+'))
        p += term();
      else if (eat('-'))
        p -= term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      if (eat('*')) {
        p *= unary();
      } else if (eat('/')) {
        const Polynomial q = unary();
        if (q.degree() != 0 || q.is_zero()) fail("division by a non-constant or zero");
        p *= 1.0 / q.terms().begin()->second;
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a nonnegative integer");
      int e = 0;
      std::from_chars(s_.data() + start, s_.data() + pos_, e);
      if (e > 64) fail("exponent too large");
      return base.pow(e);
    }
    return base;
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("missing ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
      if (ec != std::errc() || ptr != s_.data() + pos_) fail("bad number");
      return Polynomial::constant(ambient_, v);
    }
    if (c == 'x') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      int idx = 1;
      if (start == pos_) {
        if (!space_.is_interval()) fail("use x1..x" + std::to_string(space_.coords()) + " on " + space_.name());
      } else {
        std::from_chars(s_.data() + start, s_.data() + pos_, idx);
      }
      if (idx < 1 || idx > space_.coords()) fail("no coordinate x" + std::to_string(idx) + " on " + space_.name());
      return Polynomial::variable(ambient_, idx - 1);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  StateSpace space_;
  StateSpace ambient_;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const StateSpace& space) {
  if (space.kind == StateSpace::Kind::Euclidean) {
    throw Error(ErrorCode::Parse, "expressions are parsed over the interval or the simplex");
  }
  return reduce_to_free(space, Parser(text, space).parse());
}

double parse_number(std::string_view text) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  text = trim(text);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  auto one = [&](std::string_view v) {
    v = trim(v);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
      throw Error(ErrorCode::Parse, "not a number: \"" + std::string(text) + "\"");
    return out;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return one(text);
  const double den = one(text.substr(slash + 1));
  if (den == 0.0) throw Error(ErrorCode::Parse, "zero denominator in \"" + std::string(text) + "\"");
  return one(text.substr(0, slash)) / den;
}

}  // namespace pjd

#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include "poly.hpp"

namespace monadlab {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t pos, const std::string& msg)
      : std::runtime_error("at position " + std::to_string(pos) + ": " + msg), pos_(pos), msg_(msg) {}
  std::size_t position() const { return pos_; }
  const std::string& message() const { return msg_; }

private:
  std::size_t pos_;
  std::string msg_;
};

namespace detail {

// Recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary | power)*      (juxtaposition multiplies)
//   unary  := ('-'|'+') unary | power
//   power  := atom ('^' exponent)?
//   atom   := integer | variable | '(' expr ')'
template <class F>
class PolyParser {
public:
  PolyParser(std::string_view text, RingPtr<F> ring) : s_(text), ring_(std::move(ring)) {}

  Poly<F> parse() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "empty expression");
    Poly<F> p = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return p;
  }

private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool startsAtom(char c) const {
    return std::isalpha(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '(';
  }

  Poly<F> expr() {
    Poly<F> r = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        r += term();
      } else if (c == '-') {
        ++pos_;
        r -= term();
      } else {
        return r;
      }
    }
  }

  Poly<F> term() {
    Poly<F> r = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        r *= unary();
      } else if (c == '/') {
        std::size_t at = ++pos_;
        Poly<F> d = unary();
        if (!d.isConstant()) throw ParseError(at, "division by a non-constant");
        if (d.isZero()) throw ParseError(at, "division by zero");
        try {
          r = r.scale(ring_->field.inv(d.lead().coef));
        } catch (const FieldError& e) {
          throw ParseError(at, e.what());
        }
      } else if (startsAtom(c)) {
        r *= power();
      } else {
        return r;
      }
    }
  }

  Poly<F> unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Poly<F> power() {
    Poly<F> base = atom();
    if (peek() != '^') return base;
    ++pos_;
    skip();
    std::size_t at = pos_;
    bool paren = false;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      paren = true;
      ++pos_;
      skip();
    }
    if (pos_ < s_.size() && s_[pos_] == '-') throw ParseError(pos_, "negative exponent");
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError(pos_, "expected an integer exponent");
    long long e = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      e = e * 10 + (s_[pos_] - '0');
      if (e > kMaxDegree) throw ParseError(at, "exponent too large");
      ++pos_;
    }
    if (paren) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError(pos_, "expected ')'");
      ++pos_;
    }
    try {
      return base.pow(static_cast<unsigned>(e));
    } catch (const DegreeOverflow& ex) {
      throw ParseError(at, ex.what());
    }
  }

  Poly<F> atom() {
    char c = peek();
    if (c == '\0') throw ParseError(pos_, "unexpected end of input");
    if (c == '(') {
      ++pos_;
      Poly<F> r = expr();
      if (peek() != ')') throw ParseError(pos_, "expected ')'");
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class v(std::string(s_.substr(start, pos_ - start)), 10);
      return Poly<F>::constant(ring_, ring_->field.fromMpz(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      for (int i = 0; i < kNumVars; ++i)
        if (kVarNames[static_cast<std::size_t>(i)] == c) {
          ++pos_;
          return Poly<F>::variable(ring_, i);
        }
      throw ParseError(pos_, std::string("unknown variable '") + c + "'");
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  RingPtr<F> ring_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses a polynomial expression over x, y, z, w.
template <class F>
Poly<F> parsePoly(std::string_view text, const RingPtr<F>& ring) {
  return detail::PolyParser<F>(text, ring).parse();
}

} // namespace monadlab

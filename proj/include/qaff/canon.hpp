#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>

#include "qaff/frac.hpp"

namespace qaff {

// Canonical text forms. Scalar and RatU render as "(num)/(den)" with integer polynomials
// in s (= q^{1/2}) and u, terms in lexicographic order with s before u, the fraction reduced
// and the leading coefficient of the denominator a positive integer.
std::string canonical(const Scalar& x);
std::string canonical(const RatU& x, const std::string& var = "u");
// RatUV nests: polynomial in v over canonical RatU coefficients.
std::string canonical(const RatUV& x, const std::string& inner = "u", const std::string& outer = "v");

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  size_t position() const { return pos_; }

 private:
  size_t pos_;
};

// Recursive-descent parser for + - * / ^ expressions over named generators.
template <class F>
class ExprParser {
 public:
  ExprParser(std::string text, std::map<std::string, F> vars)
      : t_(std::move(text)), vars_(std::move(vars)) {}

  F parse() {
    F v = expr();
    skip();
    if (p_ != t_.size()) throw ParseError("unexpected character '" + std::string(1, t_[p_]) + "'", p_);
    return v;
  }

 private:
  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < t_.size() && t_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  F expr() {
    F v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  F term() {
    F v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        size_t at = p_;
        F d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        v /= d;
      } else {
        return v;
      }
    }
  }
  F unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  F power() {
    F b = atom();
    if (eat('^')) {
      skip();
      bool brace = eat('{');
      bool neg = eat('-');
      skip();
      size_t start = p_;
      while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) ++p_;
      if (start == p_) throw ParseError("expected integer exponent", p_);
      long e = std::stol(t_.substr(start, p_ - start));
      if (brace && !eat('}')) throw ParseError("expected '}'", p_);
      if (neg) e = -e;
      if (e < 0 && b.is_zero()) throw ParseError("zero to a negative power", start);
      return b.pow(e);
    }
    return b;
  }
  F atom() {
    skip();
    if (p_ >= t_.size()) throw ParseError("unexpected end of input", p_);
    if (eat('(')) {
      F v = expr();
      if (!eat(')')) throw ParseError("expected ')'", p_);
      return v;
    }
    char c = t_[p_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = p_;
      while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) ++p_;
      return embed<F>(Scalar(mpz_class(t_.substr(start, p_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = p_;
      while (p_ < t_.size() && std::isalnum(static_cast<unsigned char>(t_[p_]))) ++p_;
      std::string name = t_.substr(start, p_ - start);
      auto it = vars_.find(name);
      if (it == vars_.end()) throw ParseError("unknown symbol '" + name + "'", start);
      return it->second;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", p_);
  }

  std::string t_;
  std::map<std::string, F> vars_;
  size_t p_ = 0;
};

Scalar parse_scalar(const std::string& text);  // symbols s, q
RatU parse_ratu(const std::string& text);      // symbols s, q, u
RatUV parse_ratuv(const std::string& text);    // symbols s, q, u, v

}  // namespace qaff

#include "qaff/modspec.hpp"

#include <cctype>
#include <map>
#include <set>

namespace qaff {

SpectralValue parse_spectral(const std::string& text) {
  const RatU v = parse_ratu(text);
  if (v.is_zero()) throw ParseError("spectral parameter must be nonzero", 0);
  if (v.is_constant()) return {v.constant() / v.den().coeff(0), false};
  if (v.den().degree() == 0 && v.num().degree() == 1 && v.num().coeff(0).is_zero())
    return {v.num().coeff(1) / v.den().coeff(0), true};
  throw ParseError("spectral parameter must be a scalar or a scalar multiple of u", 0);
}

namespace {

class SpecParser {
 public:
  SpecParser(const std::string& t, const SpecDefaults& d) : t_(t), d_(d) {}

  ModuleSpec run() {
    ModuleSpec m = spec();
    skip();
    if (p_ != t_.size()) throw ParseError("trailing characters", p_);
    m.text = t_;
    return m;
  }

 private:
  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  void expect(char c) {
    skip();
    if (p_ >= t_.size() || t_[p_] != c) throw ParseError(std::string("expected '") + c + "'", p_);
    ++p_;
  }
  std::string ident() {
    skip();
    size_t s = p_;
    while (p_ < t_.size() && std::isalpha(static_cast<unsigned char>(t_[p_]))) ++p_;
    if (s == p_) throw ParseError("expected a name", p_);
    return t_.substr(s, p_ - s);
  }
  // Raw argument text up to the next ',' or ')' at depth zero.
  std::pair<std::string, size_t> raw() {
    skip();
    size_t s = p_;
    int depth = 0;
    while (p_ < t_.size()) {
      char c = t_[p_];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) break;
      ++p_;
    }
    if (s == p_) throw ParseError("empty argument", p_);
    return {t_.substr(s, p_ - s), s};
  }
  SpectralValue spectral(const std::string& text, size_t at) {
    try {
      return parse_spectral(text);
    } catch (const ParseError& e) {
      throw ParseError("bad spectral parameter '" + text + "'", at + e.position());
    }
  }
  int integer(const std::string& text, size_t at) {
    size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    if (i == text.size()) throw ParseError("expected integer", at);
    for (size_t j = i; j < text.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(text[j]))) throw ParseError("expected integer", at + j);
    return std::stoi(text);
  }
  std::map<std::string, std::pair<std::string, size_t>> keyword_args(const std::set<std::string>& allowed) {
    std::map<std::string, std::pair<std::string, size_t>> out;
    skip();
    if (p_ < t_.size() && t_[p_] == ')') return out;
    for (;;) {
      size_t at = p_;
      std::string key = ident();
      if (!allowed.count(key)) throw ParseError("unknown argument '" + key + "'", at);
      if (out.count(key)) throw ParseError("repeated argument '" + key + "'", at);
      expect('=');
      out[key] = raw();
      skip();
      if (p_ < t_.size() && t_[p_] == ',') {
        ++p_;
        continue;
      }
      return out;
    }
  }

  ModuleSpec spec() {
    size_t at = p_;
    std::string name = ident();
    expect('(');
    ModuleSpec out;
    if (name == "W") {
      auto args = keyword_args({"k", "a"});
      if (!args.count("k")) throw ParseError("W needs k", at);
      const int k = integer(args["k"].first, args["k"].second);
      if (k < 1) throw ParseError("k must be >= 1", args["k"].second);
      SpectralValue a{Scalar(1), false};
      if (args.count("a")) a = spectral(args["a"].first, args["a"].second);
      out.base = make_eval<Scalar>(k, a.c);
      out.formal = a.formal;
    } else if (name == "Lplus" || name == "Lminus") {
      auto args = keyword_args({"a", "depth", "buffer"});
      SpectralValue a{Scalar(1), false};
      if (args.count("a")) a = spectral(args["a"].first, args["a"].second);
      const int depth = args.count("depth") ? integer(args["depth"].first, args["depth"].second) : d_.depth;
      const int buffer = args.count("buffer") ? integer(args["buffer"].first, args["buffer"].second) : d_.buffer;
      if (depth < 0) throw ParseError("depth must be >= 0", at);
      if (buffer < 1) throw ParseError("buffer must be >= 1", at);
      out.base = make_prefund<Scalar>(name == "Lplus" ? Sign::plus : Sign::minus, a.c, depth, buffer);
      out.formal = a.formal;
    } else if (name == "One") {
      auto args = keyword_args({"n"});
      const int n = args.count("n") ? integer(args["n"].first, args["n"].second) : 0;
      out.base = make_onedim<Scalar>(n);
    } else if (name == "Tensor") {
      ModuleSpec a = spec();
      expect(',');
      ModuleSpec b = spec();
      if (a.formal || b.formal) throw ParseError("u may only appear outside Tensor (use Twist)", at);
      out.base = tensor_hopf(a.base, b.base);
    } else if (name == "Twist") {
      size_t inner_at = p_;
      ModuleSpec a = spec();
      if (a.formal) throw ParseError("module is already formal", inner_at);
      expect(',');
      auto [text, vat] = raw();
      SpectralValue s = spectral(text, vat);
      out.base = twist(a.base, s.c);
      out.formal = s.formal;
    } else {
      throw ParseError("unknown module '" + name + "'", at);
    }
    expect(')');
    return out;
  }

  const std::string& t_;
  SpecDefaults d_;
  size_t p_ = 0;
};

}  // namespace

ModuleSpec parse_module_spec(const std::string& text, const SpecDefaults& defaults) {
  return SpecParser(text, defaults).run();
}

}  // namespace qaff

#include "qaff/canon.hpp"

#include <map>
#include <utility>
#include <vector>

namespace qaff {

namespace {

using Bi = std::map<std::pair<int, int>, mpz_class, std::greater<>>;  // (deg s, deg u) -> coeff

std::string render(const Bi& p, const std::string& var) {
  if (p.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : p) {
    mpz_class m = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += (c < 0) ? "-" : "+";
    }
    std::string mono;
    if (e.first > 0) mono += "s" + (e.first > 1 ? "^" + std::to_string(e.first) : std::string());
    if (e.second > 0) {
      if (!mono.empty()) mono += "*";
      mono += var + (e.second > 1 ? "^" + std::to_string(e.second) : std::string());
    }
    if (mono.empty())
      out += m.get_str();
    else if (m == 1)
      out += mono;
    else
      out += m.get_str() + "*" + mono;
  }
  return out;
}

ZPoly lcm(const ZPoly& a, const ZPoly& b) {
  ZPoly g = gcd(a, b);
  return *(a * b).try_divide(g);
}

}  // namespace

std::string canonical(const Scalar& x) { return x.str(); }

std::string canonical(const RatU& x, const std::string& var) {
  if (x.is_zero()) return "(0)/(1)";
  ZPoly l(1);
  for (const auto& c : x.num().coeffs())
    if (!c.is_zero()) l = lcm(l, c.den());
  for (const auto& c : x.den().coeffs())
    if (!c.is_zero()) l = lcm(l, c.den());
  auto clear = [&](const Poly<Scalar>& p) {
    std::vector<ZPoly> out;
    for (const auto& c : p.coeffs())
      out.push_back(c.is_zero() ? ZPoly() : c.num() * *l.try_divide(c.den()));
    return out;
  };
  std::vector<ZPoly> n = clear(x.num()), d = clear(x.den());
  ZPoly g;
  for (const auto& c : n) g = gcd(g, c);
  for (const auto& c : d) g = gcd(g, c);
  auto to_bi = [&](const std::vector<ZPoly>& v) {
    Bi b;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j].is_zero()) continue;
      ZPoly c = *v[j].try_divide(g);
      for (int i = 0; i <= c.degree(); ++i)
        if (c.coeffs()[i] != 0) b[{i, static_cast<int>(j)}] = c.coeffs()[i];
    }
    return b;
  };
  Bi bn = to_bi(n), bd = to_bi(d);
  if (bd.begin()->second < 0) {
    for (auto& [e, c] : bn) c = -c;
    for (auto& [e, c] : bd) c = -c;
  }
  return "(" + render(bn, var) + ")/(" + render(bd, var) + ")";
}

std::string canonical(const RatUV& x, const std::string& inner, const std::string& outer) {
  auto poly = [&](const Poly<RatU>& p) {
    if (p.is_zero()) return std::string("0");
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
      if (p.coeffs()[i].is_zero()) continue;
      if (!out.empty()) out += "+";
      out += canonical(p.coeffs()[i], inner);
      if (i > 0) out += "*" + outer + (i > 1 ? "^" + std::to_string(i) : std::string());
    }
    return out;
  };
  return "(" + poly(x.num()) + ")/(" + poly(x.den()) + ")";
}

Scalar parse_scalar(const std::string& text) {
  return ExprParser<Scalar>(text, {{"s", Scalar::s()}, {"q", Scalar::q()}}).parse();
}

RatU parse_ratu(const std::string& text) {
  return ExprParser<RatU>(text, {{"s", RatU(Scalar::s())}, {"q", RatU(Scalar::q())}, {"u", RatU::var()}})
      .parse();
}

RatUV parse_ratuv(const std::string& text) {
  return ExprParser<RatUV>(text, {{"s", embed<RatUV>(Scalar::s())},
                                  {"q", embed<RatUV>(Scalar::q())},
                                  {"u", RatUV(RatU::var())},
                                  {"v", RatUV::var()}})
      .parse();
}

}  // namespace qaff

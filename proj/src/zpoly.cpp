#include "qaff/zpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace qaff {

ZPoly::ZPoly(long c) {
  if (c != 0) c_.emplace_back(c);
}

ZPoly::ZPoly(const mpz_class& c) {
  if (c != 0) c_.push_back(c);
}

ZPoly::ZPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

ZPoly ZPoly::monomial(const mpz_class& c, int deg) {
  ZPoly p;
  if (c == 0) return p;
  p.c_.assign(deg + 1, 0);
  p.c_[deg] = c;
  return p;
}

void ZPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

bool ZPoly::is_one() const { return c_.size() == 1 && c_[0] == 1; }

int ZPoly::low_order() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return static_cast<int>(i);
  return 0;
}

mpz_class ZPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

ZPoly ZPoly::operator-() const {
  ZPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

ZPoly& ZPoly::operator+=(const ZPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

ZPoly& ZPoly::operator-=(const ZPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
  ZPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j)
      mpz_addmul(r.c_[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
  }
  r.trim();
  return r;
}

ZPoly& ZPoly::operator*=(const ZPoly& o) { return *this = *this * o; }

ZPoly& ZPoly::operator*=(const mpz_class& k) {
  if (k == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= k;
  return *this;
}

ZPoly ZPoly::shifted(int k) const {
  if (is_zero() || k == 0) return *this;
  ZPoly r;
  if (k > 0) {
    r.c_.assign(k, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
  }
  if (low_order() < -k) throw std::domain_error("ZPoly::shifted: not divisible by s^k");
  r.c_.assign(c_.begin() - k, c_.end());
  return r;
}

ZPoly ZPoly::divexact(const mpz_class& k) const {
  ZPoly r = *this;
  for (auto& x : r.c_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t());
  return r;
}

std::optional<ZPoly> ZPoly::try_divide(const ZPoly& d) const {
  if (d.is_zero()) throw std::domain_error("ZPoly::try_divide by zero");
  if (is_zero()) return ZPoly();
  if (d.degree() > degree()) return std::nullopt;
  std::vector<mpz_class> rem = c_;
  const int dd = d.degree();
  std::vector<mpz_class> q(degree() - dd + 1, 0);
  mpz_class t;
  for (int i = degree(); i >= dd; --i) {
    if (rem[i] == 0) continue;
    if (!mpz_divisible_p(rem[i].get_mpz_t(), d.lead().get_mpz_t())) return std::nullopt;
    mpz_divexact(t.get_mpz_t(), rem[i].get_mpz_t(), d.lead().get_mpz_t());
    q[i - dd] = t;
    for (int j = 0; j <= dd; ++j)
      mpz_submul(rem[i - dd + j].get_mpz_t(), t.get_mpz_t(), d.c_[j].get_mpz_t());
  }
  for (int i = 0; i < dd; ++i)
    if (rem[i] != 0) return std::nullopt;
  return ZPoly(std::move(q));
}

mpz_class ZPoly::eval(const mpz_class& x) const {
  mpz_class r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    r *= x;
    r += *it;
  }
  return r;
}

mpz_class ZPoly::content() const {
  mpz_class g = 0;
  for (const auto& x : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

mpz_class ZPoly::max_norm() const {
  mpz_class m = 0;
  for (const auto& x : c_)
    if (abs(x) > m) m = abs(x);
  return m;
}

ZPoly ZPoly::primitive() const {
  if (is_zero()) return *this;
  mpz_class g = content();
  if (lead() < 0) g = -g;
  return divexact(g);
}

std::string ZPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& a = c_[i];
    if (a == 0) continue;
    mpz_class m = abs(a);
    if (out.empty()) {
      if (a < 0) out += "-";
    } else {
      out += (a < 0) ? "-" : "+";
    }
    if (i == 0) {
      out += m.get_str();
    } else {
      if (m != 1) out += m.get_str() + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

namespace {

ZPoly pseudo_rem(const ZPoly& a, const ZPoly& b) {
  std::vector<mpz_class> r = a.coeffs();
  const int db = b.degree();
  const mpz_class& lb = b.lead();
  int dr = a.degree();
  while (dr >= db && dr >= 0) {
    mpz_class lr = r[dr];
    for (auto& x : r) x *= lb;
    for (int j = 0; j <= db; ++j) r[dr - db + j] -= lr * b.coeffs()[j];
    while (!r.empty() && r.back() == 0) r.pop_back();
    dr = static_cast<int>(r.size()) - 1;
  }
  return ZPoly(std::move(r));
}

ZPoly euclid_primitive(ZPoly a, ZPoly b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    ZPoly r = pseudo_rem(a, b);
    a = std::move(b);
    b = r.primitive();
  }
  return a.primitive();
}

ZPoly from_digits(mpz_class g, const mpz_class& xi) {
  std::vector<mpz_class> c;
  mpz_class half = xi / 2;
  mpz_class r;
  while (g != 0) {
    mpz_fdiv_r(r.get_mpz_t(), g.get_mpz_t(), xi.get_mpz_t());
    if (r > half) r -= xi;
    c.push_back(r);
    g -= r;
    mpz_divexact(g.get_mpz_t(), g.get_mpz_t(), xi.get_mpz_t());
  }
  return ZPoly(std::move(c));
}

// Both arguments primitive with positive leading coefficient and nonzero constant term.
ZPoly primitive_gcd(const ZPoly& a, const ZPoly& b) {
  if (a.degree() == 0 || b.degree() == 0) return ZPoly(1);
  if (a == b) return a;
  if (a.degree() >= b.degree()) {
    if (a.try_divide(b)) return b;
  } else if (b.try_divide(a)) {
    return a;
  }
  mpz_class xi = 2 * std::min(a.max_norm(), b.max_norm()) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    mpz_class g;
    mpz_class va = a.eval(xi), vb = b.eval(xi);
    mpz_gcd(g.get_mpz_t(), va.get_mpz_t(), vb.get_mpz_t());
    ZPoly cand = from_digits(g, xi).primitive();
    if (!cand.is_zero() && a.try_divide(cand) && b.try_divide(cand)) return cand;
    xi = xi * 73794 / 27011;
  }
  return euclid_primitive(a, b);
}

}  // namespace

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero()) return b.is_zero() ? ZPoly() : (b.lead() < 0 ? -b : b);
  if (b.is_zero()) return a.lead() < 0 ? -a : a;
  const int la = a.low_order(), lb = b.low_order();
  ZPoly a1 = a.shifted(-la), b1 = b.shifted(-lb);
  mpz_class ca = a1.content(), cb = b1.content(), c;
  mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  ZPoly g = primitive_gcd(a1.primitive(), b1.primitive());
  g *= c;
  return g.shifted(std::min(la, lb));
}

}  // namespace qaff

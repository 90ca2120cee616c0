#include "qaff/scalar.hpp"

#include <stdexcept>

namespace qaff {

Scalar::Scalar(const mpq_class& c) : num_(c.get_num()), den_(c.get_den()) {}

Scalar::Scalar(ZPoly num, ZPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("Scalar: zero denominator");
  normalize();
}

Scalar Scalar::spow(int n) {
  if (n >= 0) return Scalar(ZPoly::monomial(1, n), ZPoly(1), raw_tag{});
  return Scalar(ZPoly(1), ZPoly::monomial(1, -n), raw_tag{});
}

void Scalar::normalize() {
  if (num_.is_zero()) {
    den_ = ZPoly(1);
    return;
  }
  if (den_.is_constant()) {
    mpz_class d = den_.lead(), g = num_.content();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    if (d < 0) g = -g;
    if (g != 1) {
      num_ = num_.divexact(g);
      den_ = ZPoly(mpz_class(d / g));
    }
    return;
  }
  ZPoly g = gcd(num_, den_);
  if (!g.is_one()) {
    num_ = *num_.try_divide(g);
    den_ = *den_.try_divide(g);
  }
  if (den_.lead() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  if (o.den_.is_one()) {
    num_ += o.num_ * den_;
    return *this;  // still reduced: gcd(a + c b, b) = gcd(a, b)
  }
  if (den_.is_one()) {
    num_ = num_ * o.den_ + o.num_;
    den_ = o.den_;
    return *this;
  }
  ZPoly g = gcd(den_, o.den_);
  ZPoly bg = *den_.try_divide(g);
  ZPoly dg = *o.den_.try_divide(g);
  ZPoly n = num_ * dg + o.num_ * bg;
  if (n.is_zero()) return *this = Scalar();
  ZPoly t = gcd(n, g);
  if (!t.is_one()) {
    n = *n.try_divide(t);
    dg = *o.den_.try_divide(t);
  } else {
    dg = o.den_;
  }
  num_ = std::move(n);
  den_ = bg * dg;
  if (den_.lead() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero() || o.is_zero()) return *this = Scalar();
  ZPoly g1 = gcd(num_, o.den_);
  ZPoly g2 = gcd(o.num_, den_);
  ZPoly a = g1.is_one() ? num_ : *num_.try_divide(g1);
  ZPoly d = g1.is_one() ? o.den_ : *o.den_.try_divide(g1);
  ZPoly c = g2.is_one() ? o.num_ : *o.num_.try_divide(g2);
  ZPoly b = g2.is_one() ? den_ : *den_.try_divide(g2);
  num_ = a * c;
  den_ = b * d;
  if (den_.lead() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  return *this;
}

Scalar Scalar::inv() const {
  if (is_zero()) throw std::domain_error("Scalar: division by zero");
  if (num_.lead() < 0) return Scalar(-den_, -num_, raw_tag{});
  return Scalar(den_, num_, raw_tag{});
}

Scalar Scalar::pow(long n) const {
  if (n < 0) return inv().pow(-n);
  Scalar r(1), b = *this;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

Scalar Scalar::bar() const {
  // p(1/s) = s^{-deg p} rev(p)
  auto rev = [](const ZPoly& p) {
    std::vector<mpz_class> c(p.coeffs().rbegin(), p.coeffs().rend());
    return ZPoly(std::move(c));
  };
  int shift = den_.degree() - num_.degree();
  ZPoly n = rev(num_), d = rev(den_);
  if (shift >= 0)
    n = n.shifted(shift);
  else
    d = d.shifted(-shift);
  return Scalar(n, d);
}

std::string Scalar::str() const { return "(" + num_.str("s") + ")/(" + den_.str("s") + ")"; }

}  // namespace qaff

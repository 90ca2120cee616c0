#pragma once

#include <string>

#include "qaff/zpoly.hpp"

namespace qaff {

// Element of Q(s) with s = q^{1/2}, kept as a reduced fraction of integer polynomials.
class Scalar {
 public:
  Scalar() : num_(), den_(1) {}
  Scalar(long c) : num_(c), den_(1) {}
  Scalar(const mpz_class& c) : num_(c), den_(1) {}
  Scalar(const mpq_class& c);
  Scalar(ZPoly num, ZPoly den);

  static Scalar s() { return Scalar(ZPoly::monomial(1, 1), ZPoly(1)); }
  static Scalar q() { return spow(2); }
  static Scalar spow(int n);  // s^n for any integer n
  static Scalar qpow(int n) { return spow(2 * n); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  const ZPoly& num() const { return num_; }
  const ZPoly& den() const { return den_; }

  Scalar operator-() const { return Scalar(-num_, den_, raw_tag{}); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o) { return *this += -o; }
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inv(); }
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar inv() const;
  Scalar pow(long n) const;
  // Substitute s -> s^{-1}.
  Scalar bar() const;

  std::string str() const;  // "(num)/(den)" in s

 private:
  struct raw_tag {};
  Scalar(ZPoly n, ZPoly d, raw_tag) : num_(std::move(n)), den_(std::move(d)) {}
  void normalize();
  ZPoly num_;
  ZPoly den_;
};

}  // namespace qaff

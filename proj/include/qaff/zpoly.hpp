#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace qaff {

// Dense univariate polynomial over Z, coefficient i multiplies s^i.
class ZPoly {
 public:
  ZPoly() = default;
  ZPoly(long c);
  ZPoly(const mpz_class& c);
  explicit ZPoly(std::vector<mpz_class> coeffs);

  static ZPoly monomial(const mpz_class& c, int deg);

  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  bool is_constant() const { return c_.size() <= 1; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  int low_order() const;  // smallest exponent with nonzero coefficient
  const mpz_class& lead() const { return c_.back(); }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(int i) const;

  ZPoly operator-() const;
  ZPoly& operator+=(const ZPoly& o);
  ZPoly& operator-=(const ZPoly& o);
  ZPoly& operator*=(const ZPoly& o);
  ZPoly& operator*=(const mpz_class& k);
  friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
  friend ZPoly operator-(ZPoly a, const ZPoly& b) { return a -= b; }
  friend ZPoly operator*(const ZPoly& a, const ZPoly& b);
  friend ZPoly operator*(ZPoly a, const mpz_class& k) { return a *= k; }
  bool operator==(const ZPoly& o) const { return c_ == o.c_; }
  bool operator!=(const ZPoly& o) const { return !(c_ == o.c_); }

  ZPoly shifted(int k) const;  // multiply by s^k, k may be negative if divisible
  ZPoly divexact(const mpz_class& k) const;
  std::optional<ZPoly> try_divide(const ZPoly& d) const;  // exact quotient or nothing
  mpz_class eval(const mpz_class& x) const;
  mpz_class content() const;  // nonnegative
  mpz_class max_norm() const;
  ZPoly primitive() const;     // content removed, positive lead

  std::string str(const std::string& var = "s") const;

 private:
  void trim();
  std::vector<mpz_class> c_;
};

// gcd in Z[s]: content gcd times primitive gcd, positive leading coefficient.
ZPoly gcd(const ZPoly& a, const ZPoly& b);

}  // namespace qaff

#pragma once

#include <stdexcept>
#include <string>
#include <type_traits>

#include "qaff/scalar.hpp"
#include "qaff/upoly.hpp"

namespace qaff {

// Field of rational functions K(x): reduced fraction with monic denominator.
template <class K>
class Frac {
 public:
  using coeff_type = K;

  Frac() : num_(), den_(K(1)) {}
  Frac(long c) : num_(K(c)), den_(K(1)) {}
  Frac(const K& c) : num_(c), den_(K(1)) {}
  Frac(Poly<K> n, Poly<K> d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("Frac: zero denominator");
    normalize();
  }

  static Frac var() { return Frac(Poly<K>::x(), Poly<K>(K(1)), raw_tag{}); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  K constant() const { return num_.coeff(0); }
  const Poly<K>& num() const { return num_; }
  const Poly<K>& den() const { return den_; }

  Frac operator-() const { return Frac(-num_, den_, raw_tag{}); }
  Frac& operator+=(const Frac& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
      num_ += o.num_;
      normalize();
      return *this;
    }
    if (o.den_.degree() == 0) {
      num_ += o.num_ * den_;
      return *this;
    }
    if (den_.degree() == 0) {
      num_ = num_ * o.den_ + o.num_;
      den_ = o.den_;
      return *this;
    }
    Poly<K> g = gcd(den_, o.den_);
    Poly<K> bg = den_.exact_div(g), dg = o.den_.exact_div(g);
    Poly<K> n = num_ * dg + o.num_ * bg;
    if (n.is_zero()) return *this = Frac();
    Poly<K> t = gcd(n, g);
    if (!t.is_one()) {
      n = n.exact_div(t);
      dg = o.den_.exact_div(t);
    } else {
      dg = o.den_;
    }
    num_ = std::move(n);
    den_ = bg * dg;
    make_monic();
    return *this;
  }
  Frac& operator-=(const Frac& o) { return *this += -o; }
  Frac& operator*=(const Frac& o) {
    if (is_zero() || o.is_zero()) return *this = Frac();
    if (den_.degree() == 0 && o.den_.degree() == 0) {
      num_ = num_ * o.num_;
      return *this;
    }
    Poly<K> g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
    Poly<K> a = g1.degree() == 0 ? num_ : num_.exact_div(g1);
    Poly<K> d = g1.degree() == 0 ? o.den_ : o.den_.exact_div(g1);
    Poly<K> c = g2.degree() == 0 ? o.num_ : o.num_.exact_div(g2);
    Poly<K> b = g2.degree() == 0 ? den_ : den_.exact_div(g2);
    num_ = a * c;
    den_ = b * d;
    make_monic();
    return *this;
  }
  Frac& operator/=(const Frac& o) { return *this *= o.inv(); }
  friend Frac operator+(Frac a, const Frac& b) { return a += b; }
  friend Frac operator-(Frac a, const Frac& b) { return a -= b; }
  friend Frac operator*(Frac a, const Frac& b) { return a *= b; }
  friend Frac operator/(Frac a, const Frac& b) { return a /= b; }
  bool operator==(const Frac& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Frac& o) const { return !(*this == o); }

  Frac inv() const {
    if (is_zero()) throw std::domain_error("Frac: division by zero");
    Frac r(den_, num_, raw_tag{});
    r.make_monic();
    return r;
  }
  Frac pow(long n) const {
    if (n < 0) return inv().pow(-n);
    Frac r(1), b = *this;
    while (n) {
      if (n & 1) r *= b;
      b *= b;
      n >>= 1;
    }
    return r;
  }

  // Value at x = a; throws if a is a pole.
  K eval(const K& a) const {
    K d = den_.eval(a);
    if (d.is_zero()) throw std::domain_error("Frac::eval: pole at requested point");
    return num_.eval(a) / d;
  }

  std::string str() const { return str("x"); }
  std::string str(const std::string& var) const {
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
  }

 private:
  struct raw_tag {};
  Frac(Poly<K> n, Poly<K> d, raw_tag) : num_(std::move(n)), den_(std::move(d)) {}
  void make_monic() {
    if (!den_.lead().is_one()) {
      K li = den_.lead().inv();
      num_ = num_.scaled(li);
      den_ = den_.scaled(li);
    }
  }
  void normalize() {
    if (num_.is_zero()) {
      den_ = Poly<K>(K(1));
      return;
    }
    if (den_.degree() > 0) {
      Poly<K> g = gcd(num_, den_);
      if (!g.is_one()) {
        num_ = num_.exact_div(g);
        den_ = den_.exact_div(g);
      }
    }
    make_monic();
  }
  Poly<K> num_;
  Poly<K> den_;
};

using RatU = Frac<Scalar>;
using RatUV = Frac<RatU>;

template <class T>
struct is_frac : std::false_type {};
template <class K>
struct is_frac<Frac<K>> : std::true_type {};

// Canonical embedding of a subfield element into a tower field G.
template <class G, class K>
G embed(const K& k) {
  if constexpr (std::is_same_v<G, K>) {
    return k;
  } else {
    static_assert(is_frac<G>::value, "embed: target must be a fraction field");
    return G(embed<typename G::coeff_type>(k));
  }
}

// Substitute x -> value into f, landing in G.
template <class G, class K>
G substitute(const Frac<K>& f, const G& value) {
  auto ev = [&](const Poly<K>& p) {
    G r;
    for (int i = p.degree(); i >= 0; --i) r = r * value + embed<G>(p.coeff(i));
    return r;
  };
  G d = ev(f.den());
  if (d.is_zero()) throw std::domain_error("substitute: pole at requested value");
  return ev(f.num()) / d;
}

}  // namespace qaff

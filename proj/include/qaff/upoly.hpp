#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaff {

// Dense univariate polynomial over a field K.
template <class K>
class Poly {
 public:
  Poly() = default;
  Poly(const K& c) {
    if (!c.is_zero()) c_.push_back(c);
  }
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly x() { return monomial(K(1), 1); }
  static Poly monomial(const K& c, int deg) {
    Poly p;
    if (c.is_zero()) return p;
    p.c_.assign(deg + 1, K());
    p.c_[deg] = c;
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const K& lead() const { return c_.back(); }
  const std::vector<K>& coeffs() const { return c_; }
  K coeff(int i) const { return (i < 0 || i > degree()) ? K() : c_[i]; }

  Poly operator-() const {
    Poly r = *this;
    for (auto& a : r.c_) a = -a;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, K());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        if (!b.c_[j].is_zero()) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const K& k) const {
    if (k.is_zero()) return Poly();
    Poly r = *this;
    for (auto& a : r.c_) a *= k;
    return r;
  }
  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(c_ == o.c_); }

  // Euclidean division: *this = q * d + r.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    if (degree() < d.degree()) return {Poly(), *this};
    std::vector<K> r = c_;
    std::vector<K> q(degree() - d.degree() + 1);
    const K li = d.lead().inv();
    const int dd = d.degree();
    for (int i = degree(); i >= dd; --i) {
      if (r[i].is_zero()) continue;
      K t = r[i] * li;
      for (int j = 0; j <= dd; ++j)
        if (!d.c_[j].is_zero()) r[i - dd + j] -= t * d.c_[j];
      q[i - dd] = std::move(t);
    }
    r.resize(dd);
    return {Poly(std::move(q)), Poly(std::move(r))};
  }
  Poly exact_div(const Poly& d) const {
    if (d.degree() == 0) return scaled(d.lead().inv());
    auto [q, r] = divmod(d);
    if (!r.is_zero()) throw std::logic_error("Poly::exact_div: nonzero remainder");
    return q;
  }
  Poly monic() const { return is_zero() ? *this : scaled(lead().inv()); }

  template <class V>
  V eval(const V& x) const {
    V r{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + V(*it);
    return r;
  }
  K eval(const K& x) const {
    K r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  std::string str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i].is_zero()) continue;
      if (!out.empty()) out += "+";
      out += c_[i].str();
      if (i > 0) out += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<K> c_;
};

template <class K>
Poly<K> gcd(Poly<K> a, Poly<K> b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

}  // namespace qaff

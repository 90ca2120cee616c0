#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaff/frac.hpp"
#include "qaff/linalg.hpp"

namespace qaff {

// Truncated power series sum_{i=0}^{T} c_i z^i, known modulo z^{T+1}.
template <class K>
class Series {
 public:
  Series() : Series(0) {}
  explicit Series(int order) : c_(order + 1) {
    if (order < 0) throw std::invalid_argument("Series: negative truncation order");
  }
  Series(std::vector<K> coeffs, int order) : c_(std::move(coeffs)) {
    if (order < 0) throw std::invalid_argument("Series: negative truncation order");
    c_.resize(order + 1);
  }
  static Series constant(const K& c, int order) {
    Series s(order);
    s.c_[0] = c;
    return s;
  }
  // Expansion of a rational function whose denominator does not vanish at 0.
  static Series from_frac(const Frac<K>& f, int order) {
    Series n(order), d(order);
    for (int i = 0; i <= std::min(order, f.num().degree()); ++i) n.c_[i] = f.num().coeff(i);
    for (int i = 0; i <= std::min(order, f.den().degree()); ++i) d.c_[i] = f.den().coeff(i);
    return n * d.inv();
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const K& operator[](int i) const { return c_.at(i); }
  K& operator[](int i) { return c_.at(i); }
  const std::vector<K>& coeffs() const { return c_; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const K& x) { return x.is_zero(); });
  }
  bool operator==(const Series& o) const { return c_ == o.c_; }
  bool operator!=(const Series& o) const { return !(c_ == o.c_); }

  Series truncated(int order) const {
    if (order > this->order()) throw std::invalid_argument("Series: cannot raise truncation order");
    return Series(std::vector<K>(c_.begin(), c_.begin() + order + 1), order);
  }
  Series operator-() const {
    Series r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Series operator+(const Series& a, const Series& b) {
    Series r(std::min(a.order(), b.order()));
    for (int i = 0; i <= r.order(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }
  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }
  friend Series operator*(const Series& a, const Series& b) {
    Series r(std::min(a.order(), b.order()));
    for (int i = 0; i <= r.order(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (int j = 0; i + j <= r.order(); ++j)
        if (!b.c_[j].is_zero()) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  Series scaled(const K& k) const {
    Series r = *this;
    for (auto& x : r.c_) x *= k;
    return r;
  }
  // z -> k z
  Series dilated(const K& k) const {
    Series r = *this;
    K p(1);
    for (auto& x : r.c_) {
      x *= p;
      p *= k;
    }
    return r;
  }

  Series inv() const {
    if (c_[0].is_zero()) throw std::domain_error("Series::inv: constant term is zero");
    Series r(order());
    K i0 = c_[0].inv();
    r.c_[0] = i0;
    for (int n = 1; n <= order(); ++n) {
      K acc;
      for (int k = 1; k <= n; ++k)
        if (!c_[k].is_zero()) acc += c_[k] * r.c_[n - k];
      r.c_[n] = -acc * i0;
    }
    return r;
  }

  // Formal logarithm; requires constant term 1.
  Series log() const {
    if (!c_[0].is_one()) throw std::domain_error("series_log: constant term must be 1");
    Series r(order());
    // n r_n = n c_n - sum_{k=1}^{n-1} k r_k c_{n-k}
    for (int n = 1; n <= order(); ++n) {
      K acc = K(n) * c_[n];
      for (int k = 1; k < n; ++k)
        if (!r.c_[k].is_zero() && !c_[n - k].is_zero()) acc -= K(k) * r.c_[k] * c_[n - k];
      r.c_[n] = acc / K(n);
    }
    return r;
  }

  // Formal exponential; requires constant term 0.
  Series exp() const {
    if (!c_[0].is_zero()) throw std::domain_error("series_exp: constant term must be 0");
    Series r(order());
    r.c_[0] = K(1);
    for (int n = 1; n <= order(); ++n) {
      K acc;
      for (int k = 1; k <= n; ++k)
        if (!c_[k].is_zero()) acc += K(k) * c_[k] * r.c_[n - k];
      r.c_[n] = acc / K(n);
    }
    return r;
  }

 private:
  std::vector<K> c_;
};

template <class K>
Series<K> series_log(const Series<K>& s) {
  return s.log();
}
template <class K>
Series<K> series_exp(const Series<K>& s) {
  return s.exp();
}

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class K>
struct Reconstruction {
  Frac<K> value;
  bool certified = false;
  int checked = 0;  // number of coefficients compared on re-expansion
};

// Pade-type recovery of P/Q with deg P <= n, deg Q <= d, Q(0) = 1, from a truncated series.
// Smaller denominator degrees are tried first so the reduced answer is the minimal one.
template <class K>
Reconstruction<K> rational_reconstruct(const Series<K>& s, int max_num, int max_den) {
  if (max_num < 0 || max_den < 0) throw std::invalid_argument("rational_reconstruct: negative bound");
  if (s.order() < max_num + max_den + 1)
    throw ReconstructionError("rational_reconstruct: ambiguous, truncation order " +
                              std::to_string(s.order()) + " < " +
                              std::to_string(max_num + max_den + 1));
  for (int d = 0; d <= max_den; ++d) {
    std::vector<K> q(d + 1);
    q[0] = K(1);
    if (d > 0) {
      Matrix<K> a(d, d);
      std::vector<K> b(d);
      for (int r = 0; r < d; ++r) {
        const int k = max_num + 1 + r;
        for (int j = 1; j <= d; ++j) a(r, j - 1) = (k - j >= 0) ? s[k - j] : K();
        b[r] = -s[k];
      }
      auto sol = solve(a, b);
      if (!sol) continue;
      for (int j = 1; j <= d; ++j) q[j] = (*sol)[j - 1];
    }
    Poly<K> qp(q);
    Series<K> qs(q, s.order());
    Series<K> prod = s * qs;
    std::vector<K> p(max_num + 1);
    for (int i = 0; i <= max_num; ++i) p[i] = prod[i];
    bool ok = true;
    for (int i = max_num + 1; i <= s.order(); ++i)
      if (!prod[i].is_zero()) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Frac<K> f(Poly<K>(p), qp);
    Series<K> back = Series<K>::from_frac(f, s.order());
    Reconstruction<K> out{f, back == s, s.order() + 1};
    if (!out.certified) continue;
    return out;
  }
  throw ReconstructionError("rational_reconstruct: no rational function within degree bounds (" +
                            std::to_string(max_num) + "," + std::to_string(max_den) + ")");
}

// Smallest total degree fit that still leaves at least `margin` coefficients for certification.
template <class K>
Reconstruction<K> rational_reconstruct_auto(const Series<K>& s, int max_total, int margin = 1) {
  for (int t = 0; t <= max_total && t + margin <= s.order(); ++t)
    for (int d = 0; d <= t; ++d) {
      try {
        return rational_reconstruct(s, t - d, d);
      } catch (const ReconstructionError&) {
      }
    }
  throw ReconstructionError("rational_reconstruct: no fit up to total degree " +
                            std::to_string(max_total));
}

}  // namespace qaff

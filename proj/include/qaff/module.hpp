#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qaff/frac.hpp"
#include "qaff/linop.hpp"
#include "qaff/qcomb.hpp"

namespace qaff {

inline constexpr int kUnbounded = 1 << 28;

enum class Family { eval, lplus, lminus, onedim, tensor };
enum class Sign { plus, minus };

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
struct OpCache {
  std::mutex mu;
  std::map<std::string, LinearOp<F>> ops;
};

// Finite (possibly truncated) weight module of the Borel algebra with Chevalley actions.
// Basis vectors carry a weight n (meaning n*omega_1), a depth below the top weight, and an
// order key: within a weight space, Drinfeld-Cartan operators only move a basis vector
// towards strictly smaller keys (lexicographic).
template <class F>
struct Module {
  std::string name;
  Family family = Family::onedim;
  std::vector<std::string> labels;
  std::vector<int> weight;
  std::vector<int> depth;
  std::vector<std::vector<int>> key;
  LinearOp<F> e0, e1, f0, f1;
  bool full = false;  // f0, f1 available
  int trusted = kUnbounded;
  int buffer = kUnbounded;
  F spectral = F(1);
  int level = 0;  // k for W_k, n for [n omega]
  std::shared_ptr<const Module> left, right;
  std::vector<std::pair<int, int>> pairs;  // tensor provenance
  mutable std::shared_ptr<OpCache<F>> cache = std::make_shared<OpCache<F>>();

  int dim() const { return static_cast<int>(weight.size()); }
  bool truncated() const { return trusted < kUnbounded; }
  int cap() const { return truncated() ? trusted + buffer : kUnbounded; }
  bool is_trusted(int i) const { return depth[i] <= trusted; }
  int top_weight() const {
    int t = weight.empty() ? 0 : weight[0];
    for (int w : weight) t = std::max(t, w);
    return t;
  }
  // k^p as a diagonal operator.
  LinearOp<F> k_op(int p) const {
    std::vector<F> d;
    for (int w : weight) d.push_back(embed<F>(Scalar::qpow(p * w)));
    return LinearOp<F>::diagonal(d);
  }
  int index_of(const std::string& label) const {
    for (int i = 0; i < dim(); ++i)
      if (labels[i] == label) return i;
    throw std::out_of_range("Module: no basis vector " + label);
  }
  // Indices of basis vectors of a given weight, in basis order.
  std::vector<int> weight_space(int n) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
      if (weight[i] == n) out.push_back(i);
    return out;
  }
  std::vector<int> weights() const {
    std::vector<int> ws;
    for (int w : weight)
      if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
    std::sort(ws.rbegin(), ws.rend());
    return ws;
  }
};

template <class F>
using ModulePtr = std::shared_ptr<const Module<F>>;

namespace detail {
template <class F>
F qF(int n) {
  return embed<F>(Scalar::qpow(n));
}
template <class F>
void init_ops(Module<F>& m) {
  const int n = m.dim();
  m.e0 = m.e1 = m.f0 = m.f1 = LinearOp<F>(n, n);
}
}  // namespace detail

// Evaluation module W_k at spectral parameter a: basis v_0..v_k, weight of v_i is k - 2i.
template <class F>
ModulePtr<F> make_eval(int k, const F& a) {
  if (k < 0) throw std::invalid_argument("make_eval: k must be nonnegative");
  if (a.is_zero()) throw std::invalid_argument("make_eval: spectral parameter must be nonzero");
  auto m = std::make_shared<Module<F>>();
  m->name = "W" + std::to_string(k);
  m->family = Family::eval;
  m->level = k;
  m->spectral = a;
  m->full = true;
  for (int i = 0; i <= k; ++i) {
    m->labels.push_back("v" + std::to_string(i));
    m->weight.push_back(k - 2 * i);
    m->depth.push_back(i);
    m->key.push_back({});
  }
  detail::init_ops(*m);
  const F ainv = a.inv();
  for (int i = 0; i <= k; ++i) {
    if (i >= 1) {
      m->e1.add(i - 1, i, F(1));
      m->f0.add(i - 1, i, ainv * detail::qF<F>(k - 2));
    }
    if (i < k) {
      F c = embed<F>(qint(i + 1) * qint(k - i));
      m->e0.add(i + 1, i, a * detail::qF<F>(2 - k) * c);
      m->f1.add(i + 1, i, c);
    }
  }
  return m;
}

// Coefficients c_i with e_0 w_i = a c_i w_{i+1} on the negative prefundamental module:
// q^{-2} c_i - c_{i-1} = (q^{2-2i} + q^{-2i} - q^2)/(q - q^{-1}), c_{-1} = 0.
inline std::vector<Scalar> lminus_coefficients(int n) {
  const Scalar q = Scalar::q(), qq = q - q.inv();
  std::vector<Scalar> c;
  Scalar prev;
  for (int i = 0; i < n; ++i) {
    Scalar rhs = (Scalar::qpow(2 - 2 * i) + Scalar::qpow(-2 * i) - Scalar::qpow(2)) / qq;
    Scalar ci = (rhs + prev) * Scalar::qpow(2);
    c.push_back(ci);
    prev = ci;
  }
  return c;
}

// Truncated prefundamental module L^+ or L^-: basis x_0..x_{D+B}, weight of x_i is -2i.
// Depths up to D are trusted; the B rows below act as buffer for higher Drinfeld operators.
template <class F>
ModulePtr<F> make_prefund(Sign sign, const F& a, int depth, int buffer) {
  if (depth < 0) throw std::invalid_argument("make_prefund: depth must be >= 0");
  if (buffer < 1) throw std::invalid_argument("make_prefund: buffer must be >= 1");
  if (a.is_zero()) throw std::invalid_argument("make_prefund: spectral parameter must be nonzero");
  auto m = std::make_shared<Module<F>>();
  const bool plus = sign == Sign::plus;
  m->name = plus ? "Lplus" : "Lminus";
  m->family = plus ? Family::lplus : Family::lminus;
  m->spectral = a;
  m->trusted = depth;
  m->buffer = buffer;
  const int n = depth + buffer + 1;
  const std::string letter = plus ? "z" : "w";
  for (int i = 0; i < n; ++i) {
    m->labels.push_back(letter + std::to_string(i));
    m->weight.push_back(-2 * i);
    m->depth.push_back(i);
    m->key.push_back({});
  }
  detail::init_ops(*m);
  const Scalar q = Scalar::q(), qq = q - q.inv();
  std::vector<Scalar> cm = plus ? std::vector<Scalar>() : lminus_coefficients(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i >= 1) m->e1.add(i - 1, i, F(1));
    if (i + 1 < n) {
      Scalar c = plus ? -Scalar::qpow(i + 2) * qint(i + 1) / qq : cm[i];
      m->e0.add(i + 1, i, a * embed<F>(c));
    }
  }
  return m;
}

// One-dimensional module [n omega_1].
template <class F>
ModulePtr<F> make_onedim(int n) {
  auto m = std::make_shared<Module<F>>();
  m->name = "One";
  m->family = Family::onedim;
  m->level = n;
  m->full = n == 0;  // only [0] extends to the full algebra
  m->labels.push_back("one");
  m->weight.push_back(n);
  m->depth.push_back(0);
  m->key.push_back({});
  detail::init_ops(*m);
  return m;
}

template <class F>
ModulePtr<F> tensor_hopf(const ModulePtr<F>& v, const ModulePtr<F>& w);

// Pullback by the grading automorphism: e_0 -> s e_0, f_0 -> s^{-1} f_0.
template <class F>
ModulePtr<F> twist(const ModulePtr<F>& v, const F& s) {
  if (s.is_zero()) throw std::invalid_argument("twist: parameter must be nonzero");
  if (v->family == Family::tensor) return tensor_hopf(twist(v->left, s), twist(v->right, s));
  auto m = std::make_shared<Module<F>>(*v);
  m->cache = std::make_shared<OpCache<F>>();
  m->e0 = v->e0.scaled(s);
  m->f0 = v->f0.scaled(s.inv());
  m->spectral = v->spectral * s;
  return m;
}

// Hopf tensor product with Delta(e_i) = e_i (x) 1 + k_i (x) e_i, Delta(f_i) = f_i (x) k_i^{-1} + 1 (x) f_i,
// where k_1 = k and k_0 = k^{-1}. Truncated factors truncate the product by total depth.
template <class F>
ModulePtr<F> tensor_hopf(const ModulePtr<F>& v, const ModulePtr<F>& w) {
  auto m = std::make_shared<Module<F>>();
  m->name = "(" + v->name + "*" + w->name + ")";
  m->family = Family::tensor;
  m->left = v;
  m->right = w;
  m->full = v->full && w->full;
  m->trusted = std::min(v->trusted, w->trusted);
  m->buffer = std::min(v->buffer, w->buffer);
  const int cap = m->truncated() ? m->trusted + m->buffer : kUnbounded;
  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < v->dim(); ++i)
    for (int j = 0; j < w->dim(); ++j) {
      if (v->depth[i] + w->depth[j] > cap) continue;
      index[{i, j}] = m->dim();
      m->pairs.push_back({i, j});
      m->labels.push_back(v->labels[i] + "*" + w->labels[j]);
      m->weight.push_back(v->weight[i] + w->weight[j]);
      m->depth.push_back(v->depth[i] + w->depth[j]);
      std::vector<int> key{v->weight[i]};
      key.insert(key.end(), v->key[i].begin(), v->key[i].end());
      key.insert(key.end(), w->key[j].begin(), w->key[j].end());
      m->key.push_back(std::move(key));
    }
  detail::init_ops(*m);
  auto put = [&](LinearOp<F>& op, int i, int j, int col, const F& c) {
    auto it = index.find({i, j});
    if (it != index.end()) op.add(it->second, col, c);
  };
  for (int col = 0; col < m->dim(); ++col) {
    auto [i, j] = m->pairs[col];
    const int wi = v->weight[i], wj = w->weight[j];
    for (const auto& [r, c] : v->e1.col(i)) put(m->e1, r, j, col, c);
    for (const auto& [r, c] : w->e1.col(j)) put(m->e1, i, r, col, detail::qF<F>(wi) * c);
    for (const auto& [r, c] : v->e0.col(i)) put(m->e0, r, j, col, c);
    for (const auto& [r, c] : w->e0.col(j)) put(m->e0, i, r, col, detail::qF<F>(-wi) * c);
    if (m->full) {
      for (const auto& [r, c] : v->f1.col(i)) put(m->f1, r, j, col, detail::qF<F>(-wj) * c);
      for (const auto& [r, c] : w->f1.col(j)) put(m->f1, i, r, col, c);
      for (const auto& [r, c] : v->f0.col(i)) put(m->f0, r, j, col, detail::qF<F>(wj) * c);
      for (const auto& [r, c] : w->f0.col(j)) put(m->f0, i, r, col, c);
    }
  }
  return m;
}

// Same module with coefficients embedded into a larger field G.
template <class G, class F>
ModulePtr<G> lift(const ModulePtr<F>& v) {
  if constexpr (std::is_same_v<G, F>) {
    return v;
  } else {
    if (v->family == Family::tensor) return tensor_hopf(lift<G>(v->left), lift<G>(v->right));
    auto m = std::make_shared<Module<G>>();
    m->name = v->name;
    m->family = v->family;
    m->labels = v->labels;
    m->weight = v->weight;
    m->depth = v->depth;
    m->key = v->key;
    m->full = v->full;
    m->trusted = v->trusted;
    m->buffer = v->buffer;
    m->spectral = embed<G>(v->spectral);
    m->level = v->level;
    auto conv = [&](const LinearOp<F>& op) {
      LinearOp<G> r(op.rows(), op.cols());
      for (int c = 0; c < op.cols(); ++c)
        for (const auto& [i, x] : op.col(c)) r.add(i, c, embed<G>(x));
      return r;
    };
    m->e0 = conv(v->e0);
    m->e1 = conv(v->e1);
    m->f0 = conv(v->f0);
    m->f1 = conv(v->f1);
    return m;
  }
}

// Flip map V (x) W -> W (x) V between two tensor modules built from the same factors.
template <class F>
LinearOp<F> flip(const Module<F>& vw, const Module<F>& wv) {
  if (vw.family != Family::tensor || wv.family != Family::tensor)
    throw std::invalid_argument("flip: tensor modules expected");
  std::map<std::pair<int, int>, int> target;
  for (int i = 0; i < wv.dim(); ++i) target[wv.pairs[i]] = i;
  LinearOp<F> t(wv.dim(), vw.dim());
  for (int c = 0; c < vw.dim(); ++c) {
    auto [i, j] = vw.pairs[c];
    auto it = target.find({j, i});
    if (it != target.end()) t.add(it->second, c, F(1));
  }
  return t;
}

}  // namespace qaff

#pragma once

#include <functional>
#include <string>

#include "qaff/conventions.hpp"
#include "qaff/module.hpp"

namespace qaff {

namespace detail {

template <class F>
LinearOp<F> memo(const Module<F>& m, const std::string& key, const std::function<LinearOp<F>()>& build) {
  {
    std::lock_guard<std::mutex> lock(m.cache->mu);
    auto it = m.cache->ops.find(key);
    if (it != m.cache->ops.end()) return it->second;
  }
  LinearOp<F> op = build();  // built outside the lock: recursion re-enters memo
  std::lock_guard<std::mutex> lock(m.cache->mu);
  return m.cache->ops.emplace(key, std::move(op)).first->second;
}

template <class F>
void need_order(const Module<F>& m, int order) {
  if (m.truncated() && order > m.buffer)
    throw TruncationError("Drinfeld operator of order " + std::to_string(order) + " exceeds buffer " +
                          std::to_string(m.buffer) + " of " + m.name);
}

template <class F>
void need_full(const Module<F>& m) {
  if (!m.full) throw UnsupportedError("negative Drinfeld generators need f0, f1 on " + m.name);
}

template <class F>
F qq() {
  return embed<F>(Scalar::q() - Scalar::q().inv());
}

template <class F>
F inv_q2() {
  return embed<F>(qint(2).inv());
}

// Given P_1..P_n (commuting), returns L_1..L_n with exp(sum L_m z^m) = 1 + sum P_m z^m.
template <class F>
std::vector<LinearOp<F>> op_log(const std::vector<LinearOp<F>>& p) {
  std::vector<LinearOp<F>> l(p.size());
  for (size_t m = 1; m < p.size(); ++m) {
    LinearOp<F> acc = p[m].scaled(F(static_cast<long>(m)));
    for (size_t j = 1; j < m; ++j) acc = acc - (l[j] * p[m - j]).scaled(F(static_cast<long>(j)));
    l[m] = acc.scaled(F(static_cast<long>(m)).inv());
  }
  return l;
}

}  // namespace detail

// h_{1,1} = q^{-2} e_1 e_0 - e_0 e_1.
template <class F>
LinearOp<F> h_one(const Module<F>& m) {
  detail::need_order(m, 1);
  return detail::memo<F>(m, "h1", [&] { return (m.e1 * m.e0).scaled(detail::qF<F>(-2)) - m.e0 * m.e1; });
}

template <class F>
LinearOp<F> x_minus(const Module<F>& m, int r);
template <class F>
LinearOp<F> x_plus(const Module<F>& m, int r);
template <class F>
LinearOp<F> h_op(const Module<F>& m, int r);

// x^-_r for r >= 1 from e_0, for r <= 0 from f_1.
template <class F>
LinearOp<F> x_minus(const Module<F>& m, int r) {
  return detail::memo<F>(m, "xm" + std::to_string(r), [&]() -> LinearOp<F> {
    if (r >= 1) {
      detail::need_order(m, r);
      if (r == 1) return m.k_op(1) * m.e0;
      return commutator(h_one(m), x_minus(m, r - 1)).scaled(F(conventions::xminus_step) * detail::inv_q2<F>());
    }
    detail::need_full(m);
    if (r == 0) return m.f1;
    return commutator(h_op(m, -1), x_minus(m, r + 1))
        .scaled(F(conventions::xminus_neg_step) * detail::inv_q2<F>());
  });
}

// x^+_r for r >= 0 from e_1, e_0; for r <= -1 from f_0.
template <class F>
LinearOp<F> x_plus(const Module<F>& m, int r) {
  return detail::memo<F>(m, "xp" + std::to_string(r), [&]() -> LinearOp<F> {
    if (r >= 0) {
      if (r == 0) return m.e1;
      detail::need_order(m, r);
      return commutator(h_one(m), x_plus(m, r - 1)).scaled(F(conventions::xplus_step) * detail::inv_q2<F>());
    }
    detail::need_full(m);
    if (r == -1) return m.f0 * m.k_op(-1);
    return commutator(h_op(m, -1), x_plus(m, r + 1)).scaled(F(conventions::xplus_neg_step) * detail::inv_q2<F>());
  });
}

// phi^+_m (m >= 0) and phi^-_{m} (m <= 0), with phi^+_0 = k, phi^-_0 = k^{-1}.
template <class F>
LinearOp<F> phi(const Module<F>& m, int r) {
  if (r == 0) throw std::invalid_argument("phi: use phi_plus_zero or phi_minus_zero for degree 0");
  return detail::memo<F>(m, "phi" + std::to_string(r), [&]() -> LinearOp<F> {
    if (r > 0) return commutator(x_plus(m, 0), x_minus(m, r)).scaled(detail::qq<F>());
    return commutator(x_plus(m, r), x_minus(m, 0)).scaled(-detail::qq<F>());
  });
}

namespace detail {

template <class F>
LinearOp<F> lminus_neg_h(const Module<F>& m, int r) {
  // (q^{-1} - q) h_{-r} w_j = a^{-r} (q^{2(j-1)r} + q^{2jr} - q^{-2r}) / r
  const int n = -r;
  std::vector<F> d;
  F scale = (m.spectral.pow(n) * F(n) * -qq<F>()).inv();
  for (int j = 0; j < m.dim(); ++j) d.push_back(scale * (qF<F>(2 * (j - 1) * n) + qF<F>(2 * j * n) - qF<F>(-2 * n)));
  return LinearOp<F>::diagonal(d);
}

}  // namespace detail

// h_{1,r}, r != 0. Positive r from the phi^+ series; negative r from phi^- on full modules,
// from the closed eigenvalue formula on L^-, and zero on one-dimensional modules.
template <class F>
LinearOp<F> h_op(const Module<F>& m, int r) {
  if (r == 0) throw std::invalid_argument("h_op: degree must be nonzero");
  if (r == 1) return h_one(m);
  // the closed form for negative degrees on L^- needs no buffer rows
  if (!(r < 0 && !m.full && m.family == Family::lminus)) detail::need_order(m, std::abs(r));
  return detail::memo<F>(m, "h" + std::to_string(r), [&]() -> LinearOp<F> {
    const int n = std::abs(r);
    if (r < 0 && !m.full) {
      if (m.family == Family::onedim) return LinearOp<F>(1, 1);
      if (m.family == Family::lminus) return detail::lminus_neg_h(m, r);
      throw UnsupportedError("negative Drinfeld-Cartan operators unavailable on " + m.name);
    }
    if (r == -1) return (m.f0 * m.f1).scaled(detail::qF<F>(2)) - m.f1 * m.f0;
    std::vector<LinearOp<F>> p(n + 1);
    const LinearOp<F> kk = m.k_op(r > 0 ? -1 : 1);
    for (int j = 1; j <= n; ++j) p[j] = kk * phi(m, r > 0 ? j : -j);
    LinearOp<F> l = detail::op_log(p)[n];
    return l.scaled((r > 0 ? detail::qq<F>() : -detail::qq<F>()).inv());
  });
}

// Additive action of h_{1,r} on the pure-tensor basis of a tensor module.
template <class F>
LinearOp<F> h_drinfeld(const Module<F>& t, int r) {
  if (t.family != Family::tensor) throw std::invalid_argument("h_drinfeld: tensor module expected");
  detail::need_order(t, std::abs(r));
  return detail::memo<F>(t, "hd" + std::to_string(r), [&]() -> LinearOp<F> {
    const LinearOp<F> a = h_op(*t.left, r), b = h_op(*t.right, r);
    std::map<std::pair<int, int>, int> index;
    for (int c = 0; c < t.dim(); ++c) index[t.pairs[c]] = c;
    LinearOp<F> out(t.dim(), t.dim());
    for (int c = 0; c < t.dim(); ++c) {
      auto [i, j] = t.pairs[c];
      for (const auto& [row, v] : a.col(i)) {
        auto it = index.find({row, j});
        if (it != index.end()) out.add(it->second, c, v);
      }
      for (const auto& [row, v] : b.col(j)) {
        auto it = index.find({i, row});
        if (it != index.end()) out.add(it->second, c, v);
      }
    }
    return out;
  });
}

// Carrier of the Drinfeld tensor product: only k and h_{1,r} act.
template <class F>
class DrinfeldTensor {
 public:
  DrinfeldTensor(ModulePtr<F> v, ModulePtr<F> w) : t_(tensor_hopf(v, w)) {}
  const Module<F>& carrier() const { return *t_; }
  LinearOp<F> h(int r) const { return h_drinfeld(*t_, r); }
  LinearOp<F> k() const { return t_->k_op(1); }
  [[noreturn]] LinearOp<F> chevalley(const std::string& gen) const {
    throw UnsupportedError("Drinfeld tensor product carries no action of " + gen);
  }

 private:
  ModulePtr<F> t_;
};

// Restriction of an operator to rows and columns of trusted depth.
template <class F>
LinearOp<F> trusted_part(const Module<F>& m, const LinearOp<F>& op) {
  LinearOp<F> out(op.rows(), op.cols());
  for (int c = 0; c < op.cols(); ++c) {
    if (!m.is_trusted(c)) continue;
    for (const auto& [r, v] : op.col(c))
      if (m.is_trusted(r)) out.add(r, c, v);
  }
  return out;
}

// Defining relations available on the module: k e_j k^{-1} = q^{+-2} e_j and, when full,
// [e_1, f_1] = (k - k^{-1})/(q - q^{-1}). Returns the first failing relation or "".
template <class F>
std::string check_relations(const Module<F>& m) {
  const LinearOp<F> k = m.k_op(1), ki = m.k_op(-1);
  if (k * m.e1 * ki != m.e1.scaled(detail::qF<F>(2))) return "k e1 k^-1";
  if (k * m.e0 * ki != m.e0.scaled(detail::qF<F>(-2))) return "k e0 k^-1";
  if (!m.full) return "";
  if (k * m.f1 * ki != m.f1.scaled(detail::qF<F>(-2))) return "k f1 k^-1";
  if (k * m.f0 * ki != m.f0.scaled(detail::qF<F>(2))) return "k f0 k^-1";
  if (commutator(m.e1, m.f1) != (k - ki).scaled(detail::qq<F>().inv())) return "[e1,f1]";
  if (commutator(m.e0, m.f0) != (ki - k).scaled(detail::qq<F>().inv())) return "[e0,f0]";
  if (!commutator(m.e1, m.f0).is_zero()) return "[e1,f0]";
  if (!commutator(m.e0, m.f1).is_zero()) return "[e0,f1]";
  return "";
}

}  // namespace qaff

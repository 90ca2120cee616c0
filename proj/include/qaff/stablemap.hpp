#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qaff/lweight.hpp"

namespace qaff {

// S_{V,W} on the pure-tensor basis of a (Hopf) tensor module.
template <class F>
struct StableMap {
  ModulePtr<F> tensor;
  LinearOp<F> mat;
  std::vector<bool> computed;                       // trusted columns
  std::vector<std::optional<LWeight<F>>> target;    // l-weight of each column
  int max_m = 1;
  int fast_columns = 0;                             // columns solved by back-substitution
};

namespace detail {

// Basis vectors of the weight space of b with key <= key(b), by decreasing key.
template <class F>
std::vector<int> lower_span(const Module<F>& t, int b) {
  std::vector<int> u;
  for (int i : t.weight_space(t.weight[b]))
    if (t.is_trusted(i) && t.key[i] <= t.key[b]) u.push_back(i);
  std::sort(u.begin(), u.end(), [&](int x, int y) { return t.key[x] > t.key[y]; });
  for (size_t i = 1; i < u.size(); ++i)
    if (t.key[u[i]] == t.key[u[i - 1]]) throw std::logic_error("stable_map: order keys are not unique in a weight space");
  return u;
}

}  // namespace detail

// Stable map on an arbitrary tensor module: each trusted pure tensor b is projected onto the
// l-weight space of its diagonal l-weight inside span{b' : same weight, key(b') <= key(b)}.
template <class F>
StableMap<F> stable_map_on(const ModulePtr<F>& t, int max_m = 0) {
  if (t->family != Family::tensor) throw std::invalid_argument("stable_map: tensor module expected");
  if (max_m <= 0) max_m = default_max_m(*t);
  if (t->truncated() && max_m > t->buffer) throw TruncationError("stable_map: max_m exceeds buffer");
  StableMap<F> s;
  s.tensor = t;
  s.max_m = max_m;
  const int n = t->dim();
  s.mat = LinearOp<F>(n, n);
  s.computed.assign(n, false);
  s.target = basis_lweights(*t);
  std::vector<LinearOp<F>> h;
  for (int r = 1; r <= max_m; ++r) h.push_back(h_op(*t, r));
  for (const auto& op : h)
    if (auto bad = triangularity_violation(*t, op))
      throw std::logic_error("stable_map: h is not triangular at " + t->labels[bad->first] + " <- " +
                             t->labels[bad->second]);
  for (int b = 0; b < n; ++b) {
    if (!t->is_trusted(b)) {
      s.mat.add(b, b, F(1));
      continue;
    }
    const LWeight<F>& lw = *s.target[b];
    const auto u = detail::lower_span(*t, b);
    std::vector<F> gamma;
    for (const auto& op : h) gamma.push_back(op.at(b, b));
    int mult = 0;
    for (int i : u) mult += *s.target[i] == lw;
    std::vector<F> x(n);
    if (mult == 1) {
      x[b] = F(1);
      for (size_t p = 1; p < u.size(); ++p) {
        const int r = u[p];
        int m = -1;
        for (int k = 0; k < max_m && m < 0; ++k)
          if (gamma[k] != h[k].at(r, r)) m = k;
        if (m < 0)
          throw UnresolvedBlockError("stable_map: " + t->labels[r] + " and " + t->labels[b] +
                                     " share h_1..h_" + std::to_string(max_m) + " eigenvalues");
        F acc;
        for (size_t j = 0; j < p; ++j) {
          const int c = u[j];
          if (x[c].is_zero()) continue;
          F e = h[m].at(r, c);
          if (!e.is_zero()) acc += e * x[c];
        }
        if (!acc.is_zero()) x[r] = acc / (gamma[m] - h[m].at(r, r));
      }
      ++s.fast_columns;
    } else {
      std::vector<LWeight<F>> classes;
      std::vector<int> cls;
      for (int i : u) {
        auto it = std::find(classes.begin(), classes.end(), *s.target[i]);
        cls.push_back(static_cast<int>(it - classes.begin()));
        if (it == classes.end()) classes.push_back(*s.target[i]);
      }
      std::vector<std::vector<F>> tuples;
      for (size_t c = 0; c < classes.size(); ++c) {
        size_t pos = std::find(cls.begin(), cls.end(), static_cast<int>(c)) - cls.begin();
        std::vector<F> tup;
        for (const auto& op : h) tup.push_back(op.at(u[pos], u[pos]));
        tuples.push_back(std::move(tup));
      }
      std::vector<Matrix<F>> hb;
      for (const auto& op : h) hb.push_back(op.dense(u, u));
      Matrix<F> P = eigen_projection(hb, cls, tuples, cls[0]);
      for (size_t i = 0; i < u.size(); ++i) x[u[i]] = P(static_cast<int>(i), 0);
    }
    // certification: the column lies in the generalized eigenspace
    for (int k = 0; k < max_m; ++k) {
      std::vector<F> v = x;
      for (int r = 0; r < mult; ++r) {
        auto hv = h[k].apply(v);
        for (int i = 0; i < n; ++i) hv[i] -= gamma[k] * v[i];
        v = std::move(hv);
      }
      for (const auto& e : v)
        if (!e.is_zero()) throw std::logic_error("stable_map: column " + t->labels[b] + " failed certification");
    }
    for (int i = 0; i < n; ++i) s.mat.add(i, b, x[i]);
    s.computed[b] = true;
  }
  return s;
}

template <class F>
StableMap<F> stable_map(const ModulePtr<F>& v, const ModulePtr<F>& w, int max_m = 0) {
  return stable_map_on(tensor_hopf(v, w), max_m);
}

// S_{V,W}(u) for modules given over Scalar: V is twisted by the formal u.
inline StableMap<RatU> stable_map_formal(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int max_m = 0) {
  return stable_map(twist(lift<RatU>(v), RatU::var()), lift<RatU>(w), max_m);
}

// Block-unitriangularity: unit diagonal, off-diagonal entries only at smaller keys of the same weight.
template <class F>
std::string unitriangular_violation(const Module<F>& t, const LinearOp<F>& s) {
  for (int c = 0; c < s.cols(); ++c) {
    if (!t.is_trusted(c)) continue;
    if (!s.at(c, c).is_one()) return "diagonal at " + t.labels[c];
    for (const auto& [r, v] : s.col(c))
      if (r != c && (t.weight[r] != t.weight[c] || !(t.key[r] < t.key[c])))
        return "entry " + t.labels[r] + " <- " + t.labels[c];
  }
  return "";
}

// Determinant of S on each trusted weight space.
template <class F>
std::vector<F> block_determinants(const Module<F>& t, const LinearOp<F>& s) {
  std::vector<F> out;
  for (int w : t.weights()) {
    std::vector<int> idx;
    for (int i : t.weight_space(w))
      if (t.is_trusted(i)) idx.push_back(i);
    if (!idx.empty()) out.push_back(det(s.dense(idx, idx)));
  }
  return out;
}

// Exact inverse, weight space by weight space.
template <class F>
StableMap<F> stable_inverse(const StableMap<F>& s) {
  StableMap<F> r = s;
  const Module<F>& t = *s.tensor;
  r.mat = LinearOp<F>(t.dim(), t.dim());
  for (int w : t.weights()) {
    const auto idx = t.weight_space(w);
    Matrix<F> inv = inverse(s.mat.dense(idx, idx));
    for (size_t j = 0; j < idx.size(); ++j)
      for (size_t i = 0; i < idx.size(); ++i)
        r.mat.add(idx[i], idx[j], inv(static_cast<int>(i), static_cast<int>(j)));
  }
  return r;
}

// Diagonal change of basis x_i' = d_i x_i for the families with standard primed bases (at a = 1).
template <class F>
std::vector<F> primed_factors(const Module<F>& m, Family family) {
  if (m.family != family) throw std::invalid_argument("primed_factors: family mismatch for " + m.name);
  const Scalar q = Scalar::q();
  std::vector<F> d;
  Scalar acc(1);
  for (int i = 0; i < m.dim(); ++i) {
    if (i > 0) {
      const int t = i - 1;
      switch (family) {
        case Family::eval:
          acc *= (q.inv() - q) * Scalar::qpow(-2 * t) * qint(t + 1) * qint(m.level - t);
          break;
        case Family::lminus:
          acc *= -Scalar::qpow(-3 * t) * qint(t + 1);
          break;
        case Family::lplus:
          acc *= qint(t + 1);
          break;
        default:
          throw std::invalid_argument("primed_factors: no primed basis for this family");
      }
    }
    d.push_back(embed<F>(acc));
  }
  return d;
}

// Matrix of an operator on V (x) W in the basis (x_i' (x) y_j) with x_i' = d_i x_i.
template <class F>
LinearOp<F> rebase_left(const Module<F>& t, const LinearOp<F>& op, const std::vector<F>& d) {
  LinearOp<F> out(op.rows(), op.cols());
  for (int c = 0; c < op.cols(); ++c) {
    const F dc = d[t.pairs[c].first];
    for (const auto& [r, v] : op.col(c)) out.add(r, c, v * dc / d[t.pairs[r].first]);
  }
  return out;
}

// Order of f at u = pt (positive for zeros, negative for poles).
template <class K>
int order_at(const Frac<K>& f, const K& pt) {
  if (f.is_zero()) throw std::domain_error("order_at: zero has no order");
  auto mult = [&](Poly<K> p) {
    const Poly<K> lin(std::vector<K>{-pt, K(1)});
    int k = 0;
    while (true) {
      auto [quo, rem] = p.divmod(lin);
      if (!rem.is_zero()) return k;
      p = quo;
      ++k;
    }
  };
  return mult(f.num()) - mult(f.den());
}

// Value of (u - pt)^n f at u = pt; requires order_at(f) >= -n.
template <class K>
K scaled_value_at(const Frac<K>& f, const K& pt, int n) {
  if (f.is_zero()) return K();
  const int o = order_at(f, pt);
  if (o + n > 0) return K();
  if (o + n < 0) throw std::domain_error("scaled_value_at: pole survives scaling");
  Frac<K> lin = Frac<K>::var() - Frac<K>(pt);
  return (f * lin.pow(n)).eval(pt);
}

struct NormResult {
  std::vector<int> N;       // per column
  Matrix<Scalar> limit;
  bool invertible = false;
};

// lim_{u->1} (u-1)^{N_c} S(u) column by column, N_c the pole order of column c at u = 1.
inline NormResult stable_norm(const LinearOp<RatU>& s) {
  NormResult r;
  const int n = s.cols();
  r.limit = Matrix<Scalar>(s.rows(), n);
  const Scalar one(1);
  for (int c = 0; c < n; ++c) {
    int N = 0;
    for (const auto& e : s.col(c)) N = std::max(N, -order_at(e.second, one));
    r.N.push_back(N);
    for (const auto& [i, v] : s.col(c)) r.limit(i, c) = scaled_value_at(v, one, N);
  }
  r.invertible = n == s.rows() && !det(r.limit).is_zero();
  return r;
}

struct CheckReport {
  bool ok = true;
  std::string witness;
};

// Compares S(V(a) (x) W(b)) with S_{V,W}(u) at u = a/b. A pole of S(u) at a/b is reported.
inline CheckReport verify_ratio_dependence(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, const Scalar& a,
                                           const Scalar& b) {
  if (a.is_zero() || b.is_zero()) throw std::invalid_argument("verify_ratio_dependence: parameters must be nonzero");
  CheckReport rep;
  auto su = stable_map_formal(v, w);
  const Scalar ratio = a / b;
  const Module<RatU>& t = *su.tensor;
  for (int c = 0; c < t.dim(); ++c)
    for (const auto& [r, e] : su.mat.col(c))
      if (e.den().eval(ratio).is_zero()) {
        rep.ok = false;
        rep.witness = "pole at u = " + canonical(ratio) + " in entry " + t.labels[r] + " <- " + t.labels[c];
        return rep;
      }
  auto sab = stable_map(twist(v, a), twist(w, b));
  for (int c = 0; c < t.dim(); ++c) {
    if (!su.computed[c]) continue;
    for (int r = 0; r < t.dim(); ++r) {
      if (!t.is_trusted(r)) continue;
      Scalar x = substitute(su.mat.at(r, c), ratio);
      if (x != sab.mat.at(r, c)) {
        rep.ok = false;
        rep.witness = "entry " + t.labels[r] + " <- " + t.labels[c];
        return rep;
      }
    }
  }
  return rep;
}

// h^{Hopf}_m S = S h^{Drinfeld}_m on trusted rows and columns, m = 1..max_m.
template <class F>
CheckReport verify_drinfeld_intertwiner(const StableMap<F>& s, int max_m) {
  CheckReport rep;
  const Module<F>& t = *s.tensor;
  for (int m = 1; m <= max_m; ++m) {
    LinearOp<F> d = trusted_part(t, h_op(t, m) * s.mat - s.mat * h_drinfeld(t, m));
    if (!d.is_zero()) {
      rep.ok = false;
      for (int c = 0; c < d.cols() && rep.witness.empty(); ++c)
        if (!d.col(c).empty()) rep.witness = "m=" + std::to_string(m) + " at " + t.labels[d.col(c)[0].first] + " <- " + t.labels[c];
      return rep;
    }
  }
  return rep;
}

struct ComposeReport {
  bool any_match = false;
  std::vector<std::pair<std::string, bool>> orders;  // composition order -> equality on trusted block
  std::string witness;
};

// Three-factor stable map on (V1(u1) (x) V2(u2)) (x) V3 against compositions of the pairwise maps
// S^{(1,2)}(u1/u2), S^{(1,3)}(u1), S^{(2,3)}(u2). Records evidence only.
inline ComposeReport stable_compose_experiment(const ModulePtr<Scalar>& v1, const ModulePtr<Scalar>& v2,
                                               const ModulePtr<Scalar>& v3) {
  using G = RatUV;
  const G u1(RatU::var()), u2 = G::var();
  auto a = twist(lift<G>(v1), u1), b = twist(lift<G>(v2), u2), c = lift<G>(v3);
  auto ab = tensor_hopf(a, b);
  auto t = tensor_hopf(ab, c);
  auto direct = stable_map_on(t);
  const auto s12 = stable_map(a, b), s13 = stable_map(a, c), s23 = stable_map(b, c);
  std::map<std::array<int, 3>, int> index;
  std::vector<std::array<int, 3>> triple(t->dim());
  for (int x = 0; x < t->dim(); ++x) {
    auto [ij, k] = t->pairs[x];
    auto [i, j] = ab->pairs[ij];
    triple[x] = {i, j, k};
    index[triple[x]] = x;
  }
  auto embed_pair = [&](const StableMap<G>& s, int p, int r) {
    LinearOp<G> op(t->dim(), t->dim());
    std::map<std::pair<int, int>, int> pidx;
    for (int x = 0; x < s.tensor->dim(); ++x) pidx[s.tensor->pairs[x]] = x;
    for (int x = 0; x < t->dim(); ++x) {
      const auto tr = triple[x];
      auto it = pidx.find({tr[p], tr[r]});
      if (it == pidx.end()) continue;
      for (const auto& [row, val] : s.mat.col(it->second)) {
        auto [i2, j2] = s.tensor->pairs[row];
        auto nt = tr;
        nt[p] = i2;
        nt[r] = j2;
        auto jt = index.find(nt);
        if (jt != index.end()) op.add(jt->second, x, val);
      }
    }
    return op;
  };
  const LinearOp<G> m12 = embed_pair(s12, 0, 1), m13 = embed_pair(s13, 0, 2), m23 = embed_pair(s23, 1, 2);
  const std::vector<std::pair<std::string, LinearOp<G>>> ops = {{"12", m12}, {"13", m13}, {"23", m23}};
  ComposeReport rep;
  std::vector<int> perm = {0, 1, 2};
  const LinearOp<G> target = trusted_part(*t, direct.mat);
  do {
    LinearOp<G> prod = ops[perm[0]].second * ops[perm[1]].second * ops[perm[2]].second;
    bool eq = trusted_part(*t, prod) == target;
    rep.orders.push_back({"S" + ops[perm[0]].first + " S" + ops[perm[1]].first + " S" + ops[perm[2]].first, eq});
    rep.any_match = rep.any_match || eq;
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!rep.any_match) rep.witness = "no composition order reproduces the three-factor map";
  return rep;
}

}  // namespace qaff

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qaff/canon.hpp"
#include "qaff/drinfeld.hpp"
#include "qaff/series.hpp"

namespace qaff {

class UnresolvedBlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// l-weight: a rational function psi(z) over F (psi(0) = q^weight).
template <class F>
struct LWeight {
  Frac<F> psi;
  int weight = 0;

  bool operator==(const LWeight& o) const { return weight == o.weight && psi == o.psi; }
  bool operator!=(const LWeight& o) const { return !(*this == o); }
  LWeight operator*(const LWeight& o) const { return {psi * o.psi, weight + o.weight}; }
  LWeight inv() const { return {psi.inv(), -weight}; }
  // psi divided by its constant term.
  Frac<F> normalized() const { return psi * Frac<F>(psi.eval(F()).inv()); }
  // Eigenvalue of h_{1,m}: [z^m] log(psi/psi(0)) / (q - q^{-1}).
  F h_eigen(int m) const {
    auto l = Series<F>::from_frac(normalized(), m).log();
    return l[m] * embed<F>((Scalar::q() - Scalar::q().inv()).inv());
  }
  std::vector<F> h_tuple(int max_m) const {
    auto l = Series<F>::from_frac(normalized(), max_m).log();
    const F c = embed<F>((Scalar::q() - Scalar::q().inv()).inv());
    std::vector<F> out;
    for (int m = 1; m <= max_m; ++m) out.push_back(l[m] * c);
    return out;
  }
};

// Integer n with c = q^n, if any.
template <class F>
std::optional<int> q_exponent(const F& c) {
  if constexpr (std::is_same_v<F, Scalar>) {
    const ZPoly &n = c.num(), &d = c.den();
    if (n.is_zero() || n.degree() != n.low_order() || d.degree() != d.low_order()) return std::nullopt;
    if (n.lead() != d.lead()) return std::nullopt;
    const int e = n.degree() - d.degree();
    if (e % 2 != 0) return std::nullopt;
    return e / 2;
  } else {
    if (!c.is_constant()) return std::nullopt;
    return q_exponent(c.constant());
  }
}

template <class F>
LWeight<F> make_lweight(const Frac<F>& psi) {
  F c0 = psi.eval(F());
  auto n = q_exponent(c0);
  if (!n) throw std::invalid_argument("make_lweight: psi(0) is not an integral power of q");
  return {psi, *n};
}

inline Frac<Scalar> zvar() { return Frac<Scalar>::var(); }

// Psi^{+-}_a(z) = (1 - z a)^{+-1}
inline LWeight<Scalar> psi_monomial(Sign sign, const Scalar& a) {
  if (a.is_zero()) throw std::invalid_argument("psi_monomial: a must be nonzero");
  RatU f = RatU(1) - zvar() * RatU(a);
  return {sign == Sign::plus ? f : f.inv(), 0};
}

// Y_a(z) = q (1 - z a q^{-1}) / (1 - z a q)
inline LWeight<Scalar> y_monomial(const Scalar& a) {
  if (a.is_zero()) throw std::invalid_argument("y_monomial: a must be nonzero");
  const Scalar q = Scalar::q();
  return {RatU(q) * (RatU(1) - zvar() * RatU(a * q.inv())) / (RatU(1) - zvar() * RatU(a * q)), 1};
}

inline LWeight<Scalar> a_monomial(const Scalar& a) {
  const Scalar q = Scalar::q();
  return y_monomial(a * q.inv()) * y_monomial(a * q);
}

// Constant l-weight [n omega_1].
template <class F = Scalar>
LWeight<F> constant_lweight(int n) {
  return {Frac<F>(embed<F>(Scalar::qpow(n))), n};
}

// Psi(z) -> Psi(z u).
inline LWeight<RatU> u_deform(const LWeight<Scalar>& l) {
  auto lift = [](const Poly<Scalar>& p) {
    std::vector<RatU> c;
    for (int i = 0; i <= p.degree(); ++i) c.push_back(RatU(p.coeff(i)) * RatU::var().pow(i));
    return Poly<RatU>(c);
  };
  return {Frac<RatU>(lift(l.psi.num()), lift(l.psi.den())), l.weight};
}

template <class F>
std::string lweight_str(const LWeight<F>& l) {
  if constexpr (std::is_same_v<F, Scalar>)
    return canonical(l.psi, "z");
  else if constexpr (std::is_same_v<F, RatU>)
    return canonical(l.psi, "u", "z");
  else
    return l.psi.str("z");
}

// l-weight from h-eigenvalues gamma_1..gamma_M and the weight, by rational reconstruction.
template <class F>
LWeight<F> lweight_from_h(int weight, const std::vector<F>& gamma) {
  const int M = static_cast<int>(gamma.size());
  Series<F> s(M);
  const F c = embed<F>(Scalar::q() - Scalar::q().inv());
  for (int m = 1; m <= M; ++m) s[m] = gamma[m - 1] * c;
  auto r = rational_reconstruct_auto(s.exp(), M - 1, 1);
  return {r.value * Frac<F>(embed<F>(Scalar::qpow(weight))), weight};
}

// Cross order on pairs of weights: equal total weight required; (w1, w2) is greater than
// (w1', w2') when w1 is strictly below w1' in the dominance order.
enum class CrossOrder { equal, p1_greater, p2_greater, incomparable };

inline CrossOrder cross_compare(std::pair<int, int> p1, std::pair<int, int> p2) {
  if (p1.first + p1.second != p2.first + p2.second) return CrossOrder::incomparable;
  if (p1 == p2) return CrossOrder::equal;
  if ((p2.first - p1.first) % 2 != 0) return CrossOrder::incomparable;
  return p1.first < p2.first ? CrossOrder::p1_greater : CrossOrder::p2_greater;
}

namespace detail {

template <class F>
int recon_order(const Module<F>& m) {
  return m.truncated() ? std::min(m.buffer, 10) : 10;
}

template <class F>
void basis_lweights_into(const Module<F>& m, std::vector<std::optional<LWeight<F>>>& out) {
  out.assign(m.dim(), std::nullopt);
  if (m.family == Family::tensor) {
    std::vector<std::optional<LWeight<F>>> a, b;
    basis_lweights_into(*m.left, a);
    basis_lweights_into(*m.right, b);
    for (int c = 0; c < m.dim(); ++c) {
      auto [i, j] = m.pairs[c];
      if (m.is_trusted(c) && a[i] && b[j]) out[c] = *a[i] * *b[j];
    }
    return;
  }
  for (int i = 0; i < m.dim(); ++i)
    if (m.weight_space(m.weight[i]).size() != 1) throw UnsupportedError("basis_lweights: base module weight spaces must be one-dimensional");
  const int M = recon_order(m);
  std::vector<LinearOp<F>> h;
  for (int r = 1; r <= M; ++r) h.push_back(h_op(m, r));
  for (int i = 0; i < m.dim(); ++i) {
    if (!m.is_trusted(i)) continue;
    std::vector<F> g;
    for (const auto& op : h) g.push_back(op.at(i, i));
    try {
      out[i] = lweight_from_h(m.weight[i], g);
    } catch (const ReconstructionError& e) {
      throw UnresolvedBlockError("l-weight of " + m.labels[i] + " in " + m.name +
                                 " not determined by h_1..h_" + std::to_string(M) + ": " + e.what());
    }
  }
}

}  // namespace detail

// l-weights of basis vectors as diagonal entries of the triangular Drinfeld-Cartan action:
// reconstructed on base modules, products on tensors. Untrusted rows are empty.
template <class F>
std::vector<std::optional<LWeight<F>>> basis_lweights(const Module<F>& m) {
  std::vector<std::optional<LWeight<F>>> out;
  detail::basis_lweights_into(m, out);
  return out;
}

// Checks that op moves every basis vector only to basis vectors of the same weight and
// strictly smaller key (or itself). Returns the first violating (row, col) if any.
template <class F>
std::optional<std::pair<int, int>> triangularity_violation(const Module<F>& m, const LinearOp<F>& op) {
  for (int c = 0; c < op.cols(); ++c) {
    if (!m.is_trusted(c)) continue;
    for (const auto& e : op.col(c)) {
      const int r = e.first;
      if (r == c) continue;
      if (m.weight[r] != m.weight[c] || !(m.key[r] < m.key[c])) return std::make_pair(r, c);
    }
  }
  return std::nullopt;
}

// Smallest M such that h_1..h_M separate the distinct diagonal l-weights inside every trusted
// weight space. Capped by the buffer on truncated modules.
template <class F>
int default_max_m(const Module<F>& m) {
  const int cap = m.truncated() ? m.buffer : 10;
  const auto lws = basis_lweights(m);
  int M = 1;
  for (int w : m.weights()) {
    std::vector<LWeight<F>> seen;
    for (int i : m.weight_space(w))
      if (lws[i] && std::find(seen.begin(), seen.end(), *lws[i]) == seen.end()) seen.push_back(*lws[i]);
    if (seen.size() < 2) continue;
    // short tuples first: distinct l-weights almost always differ at h_1
    for (int len = std::min(2, cap);; len = cap) {
      std::vector<std::vector<F>> tup;
      for (const auto& l : seen) tup.push_back(l.h_tuple(len));
      int need = 1;
      for (size_t a = 0; a < seen.size(); ++a)
        for (size_t b = a + 1; b < seen.size(); ++b) {
          int r = 0;
          while (r < len && tup[a][r] == tup[b][r]) ++r;
          need = std::max(need, std::min(r + 1, cap));
        }
      if (need < len || len == cap) {
        M = std::max(M, need);
        break;
      }
    }
  }
  return M;
}

// Projection onto the joint generalized eigenspace of class `target` for commuting matrices
// H_1..H_M on a block, as a polynomial in the H's. cls[i] is the l-weight class of the i-th
// diagonal entry; tuples[c] the eigenvalue tuple of class c.
template <class F>
Matrix<F> eigen_projection(const std::vector<Matrix<F>>& H, const std::vector<int>& cls,
                           const std::vector<std::vector<F>>& tuples, int target) {
  const int n = static_cast<int>(cls.size());
  std::map<int, int> mult;
  for (int c : cls) ++mult[c];
  Matrix<F> T = Matrix<F>::identity(n);
  const auto& g = tuples[target];
  for (const auto& [c, r] : mult) {
    if (c == target) continue;
    int m = -1;
    for (size_t k = 0; k < g.size(); ++k)
      if (g[k] != tuples[c][k]) {
        m = static_cast<int>(k);
        break;
      }
    if (m < 0) throw UnresolvedBlockError("distinct l-weights share h_1..h_" + std::to_string(g.size()) + " eigenvalues");
    Matrix<F> f = H[m] - Matrix<F>::identity(n).scaled(tuples[c][m]);
    f = f.scaled((g[m] - tuples[c][m]).inv());
    for (int i = 0; i < r; ++i) T = T * f;
  }
  const int r = mult[target];
  Matrix<F> id = Matrix<F>::identity(n), acc = id, pw = id, nil = id - T;
  for (int j = 1; j < r; ++j) {
    pw = pw * nil;
    acc += pw;
  }
  return T * acc;
}

template <class F>
struct LBlock {
  LWeight<F> lw;
  int weight = 0;
  std::vector<int> support;               // basis vectors with this diagonal l-weight
  std::vector<std::vector<F>> basis;      // generalized eigenvectors (full-length)
  int nil_order = 1;                      // (h_m - gamma_m)^r kills the block
};

// Simultaneous generalized eigenspace decomposition of h_1..h_M on each trusted weight space.
template <class F>
std::vector<LBlock<F>> lweight_decompose(const Module<F>& m, int max_m = 0) {
  if (max_m <= 0) max_m = default_max_m(m);
  if (m.truncated() && max_m > m.buffer)
    throw TruncationError("lweight_decompose: max_m exceeds buffer of " + m.name);
  const auto lws = basis_lweights(m);
  std::vector<LinearOp<F>> h;
  for (int r = 1; r <= max_m; ++r) h.push_back(h_op(m, r));
  for (const auto& op : h)
    if (auto bad = triangularity_violation(m, op))
      throw std::logic_error("lweight_decompose: h is not triangular at " + m.labels[bad->first] + " <- " +
                             m.labels[bad->second]);
  std::vector<LBlock<F>> out;
  for (int w : m.weights()) {
    std::vector<int> idx;
    for (int i : m.weight_space(w))
      if (m.is_trusted(i)) idx.push_back(i);
    if (idx.empty()) continue;
    std::vector<LWeight<F>> classes;
    std::vector<int> cls;
    for (int i : idx) {
      const auto& l = *lws[i];
      auto it = std::find(classes.begin(), classes.end(), l);
      cls.push_back(static_cast<int>(it - classes.begin()));
      if (it == classes.end()) classes.push_back(l);
    }
    std::vector<std::vector<F>> tuples;
    for (size_t c = 0; c < classes.size(); ++c) {
      std::vector<F> t;
      for (int r = 0; r < max_m; ++r) {
        size_t pos = std::find(cls.begin(), cls.end(), static_cast<int>(c)) - cls.begin();
        t.push_back(h[r].at(idx[pos], idx[pos]));
      }
      if (t != classes[c].h_tuple(max_m))
        throw std::logic_error("lweight_decompose: diagonal of h disagrees with the product l-weight");
      tuples.push_back(std::move(t));
    }
    std::vector<Matrix<F>> Hb;
    for (const auto& op : h) Hb.push_back(op.dense(idx, idx));
    for (size_t c = 0; c < classes.size(); ++c) {
      LBlock<F> b;
      b.lw = classes[c];
      b.weight = w;
      for (size_t i = 0; i < idx.size(); ++i)
        if (cls[i] == static_cast<int>(c)) b.support.push_back(idx[i]);
      Matrix<F> P = classes.size() == 1 ? Matrix<F>::identity(static_cast<int>(idx.size()))
                                        : eigen_projection(Hb, cls, tuples, static_cast<int>(c));
      for (auto& v : column_space(P)) {
        std::vector<F> full(m.dim());
        for (size_t i = 0; i < idx.size(); ++i) full[idx[i]] = v[i];
        b.basis.push_back(std::move(full));
      }
      if (b.basis.size() != b.support.size())
        throw std::logic_error("lweight_decompose: block dimension differs from diagonal multiplicity");
      // nilpotency order
      const int n = static_cast<int>(idx.size());
      for (int r = 1; r <= n; ++r) {
        bool dead = true;
        for (int k = 0; k < max_m && dead; ++k) {
          Matrix<F> N = Hb[k] - Matrix<F>::identity(n).scaled(tuples[c][k]);
          Matrix<F> acc = P;
          for (int t = 0; t < r; ++t) acc = N * acc;
          dead = acc.is_zero();
        }
        if (dead) {
          b.nil_order = r;
          break;
        }
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

template <class F>
struct QTerm {
  LWeight<F> lw;
  int mult = 0;
};

// q-character: l-weights with multiplicities over trusted depths, in decreasing weight then
// canonical-string order.
template <class F>
std::vector<QTerm<F>> qcharacter(const Module<F>& m) {
  const auto lws = basis_lweights(m);
  std::vector<QTerm<F>> out;
  for (const auto& l : lws) {
    if (!l) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const QTerm<F>& t) { return t.lw == *l; });
    if (it == out.end())
      out.push_back({*l, 1});
    else
      ++it->mult;
  }
  std::stable_sort(out.begin(), out.end(), [](const QTerm<F>& a, const QTerm<F>& b) {
    if (a.lw.weight != b.lw.weight) return a.lw.weight > b.lw.weight;
    return lweight_str(a.lw) < lweight_str(b.lw);
  });
  return out;
}

// Multiset equality of two q-characters.
template <class F>
bool same_qcharacter(std::vector<QTerm<F>> a, std::vector<QTerm<F>> b) {
  if (a.size() != b.size()) return false;
  for (const auto& t : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const QTerm<F>& s) { return s.lw == t.lw && s.mult == t.mult; });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

// Product of q-characters as multisets.
template <class F>
std::vector<QTerm<F>> qchar_product(const std::vector<QTerm<F>>& a, const std::vector<QTerm<F>>& b) {
  std::vector<QTerm<F>> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      LWeight<F> p = x.lw * y.lw;
      auto it = std::find_if(out.begin(), out.end(), [&](const QTerm<F>& t) { return t.lw == p; });
      if (it == out.end())
        out.push_back({p, x.mult * y.mult});
      else
        it->mult += x.mult * y.mult;
    }
  return out;
}

// Weight of an l-weight in a highest l-weight module from its normalized part: the quotient
// by the normalized highest part must be a product of N normalized A^{-1} factors
// (1 - zbq^2)/(1 - zbq^{-2}), each tending to q^4 at infinity.
inline int constant_part_from_normalized(const RatU& psi_tilde, const LWeight<Scalar>& highest) {
  if (!psi_tilde.eval(Scalar(0)).is_one())
    throw std::invalid_argument("constant_part_from_normalized: input is not normalized");
  RatU r = psi_tilde / highest.normalized();
  if (r.num().degree() != r.den().degree())
    throw std::invalid_argument("constant_part_from_normalized: not a product of A^{-1} factors");
  auto e = q_exponent(r.num().lead() / r.den().lead());
  if (!e || *e < 0 || *e % 4 != 0)
    throw std::invalid_argument("constant_part_from_normalized: not a product of A^{-1} factors");
  if (r.num().degree() == 0 && *e != 0)
    throw std::invalid_argument("constant_part_from_normalized: not a product of A^{-1} factors");
  return highest.weight - 2 * (*e / 4);
}

}  // namespace qaff

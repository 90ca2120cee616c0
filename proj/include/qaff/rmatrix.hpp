#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qaff/qexp.hpp"
#include "qaff/stablemap.hpp"

namespace qaff {

enum class RKind { plus, minus, zero, infinity, full };

// A factor of the R-matrix acting on V(u) (x) W, indexed like tensor_hopf(V, W).
struct RFactor {
  RKind kind = RKind::full;
  ModulePtr<RatU> tensor;
  LinearOp<RatU> op;
  std::optional<Series<Scalar>> scalar_part;
  int order = 0;
  int horizon = -1;          // last m with a nonzero term; -1 when the product did not terminate
  bool reconstructed = false;
};

namespace detail {

inline Scalar qmq() { return Scalar::q() - Scalar::q().inv(); }

// A (x) B on the pure-tensor basis of t; entries leaving the carrier are dropped.
template <class F>
LinearOp<F> kron(const Module<F>& t, const LinearOp<F>& a, const LinearOp<F>& b) {
  std::map<std::pair<int, int>, int> index;
  for (int c = 0; c < t.dim(); ++c) index[t.pairs[c]] = c;
  LinearOp<F> out(t.dim(), t.dim());
  for (int c = 0; c < t.dim(); ++c) {
    auto [i, j] = t.pairs[c];
    for (const auto& [r1, x] : a.col(i))
      for (const auto& [r2, y] : b.col(j)) {
        auto it = index.find({r1, r2});
        if (it != index.end()) out.add(it->second, c, x * y);
      }
  }
  return out;
}

template <class F>
int pair_index(const Module<F>& t, int i, int j) {
  for (int c = 0; c < t.dim(); ++c)
    if (t.pairs[c] == std::make_pair(i, j)) return c;
  throw std::out_of_range("pair_index: pair not in carrier");
}

// Power series in z with operator coefficients, truncated at a fixed order.
using OpSeries = std::vector<LinearOp<Scalar>>;

inline OpSeries op_series_mul(const OpSeries& a, const OpSeries& b) {
  const int n = static_cast<int>(a.size());
  OpSeries r(n, LinearOp<Scalar>(a[0].rows(), a[0].cols()));
  for (int i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j < n; ++j)
      if (!b[j].is_zero()) r[i + j] = r[i + j] + a[i] * b[j];
  }
  return r;
}

// exp_{q^p}(z^m X) as a truncated series.
inline OpSeries qexp_series(int p, int m, const LinearOp<Scalar>& x, int order) {
  const int n = x.rows();
  OpSeries r(order + 1, LinearOp<Scalar>(n, n));
  r[0] = LinearOp<Scalar>::identity(n);
  LinearOp<Scalar> pw = LinearOp<Scalar>::identity(n);
  const Scalar base = Scalar::qpow(p);
  for (int k = 1; m * k <= order; ++k) {
    pw = pw * x;
    if (pw.is_zero()) break;
    r[m * k] = r[m * k] + pw.scaled(qfact_primed(k, base).inv());
  }
  return r;
}

inline LinearOp<RatU> reconstruct_entries(const OpSeries& s, int order, const std::string& what) {
  const int n = s[0].rows();
  LinearOp<RatU> out(n, n);
  for (int c = 0; c < n; ++c) {
    std::map<int, Series<Scalar>> entries;
    for (int d = 0; d <= order; ++d)
      for (const auto& [r, v] : s[d].col(c)) {
        auto it = entries.try_emplace(r, Series<Scalar>(order)).first;
        it->second[d] = v;
      }
    for (const auto& [r, ser] : entries) {
      try {
        out.add(r, c, rational_reconstruct_auto(ser, order - 1, 1).value);
      } catch (const ReconstructionError& e) {
        throw ReconstructionError(what + ": entry (" + std::to_string(r) + "," + std::to_string(c) + "): " + e.what());
      }
    }
  }
  return out;
}

template <class F>
LinearOp<RatU> lift_op(const LinearOp<F>& a) {
  LinearOp<RatU> out(a.rows(), a.cols());
  for (int c = 0; c < a.cols(); ++c)
    for (const auto& [r, v] : a.col(c)) out.add(r, c, embed<RatU>(v));
  return out;
}

inline ModulePtr<RatU> formal_carrier(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w) {
  return tensor_hopf(twist(lift<RatU>(v), RatU::var()), lift<RatU>(w));
}

// Shared driver for R^+ and R^-: the m-th term is c (x) d with the given generator pair.
template <class TermFn>
RFactor r_pm(RKind kind, const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int order, int first_m,
             int p, bool reverse, TermFn term) {
  if (!w->full) throw UnsupportedError("R-factor: second factor must carry the full algebra action (" + w->name + ")");
  auto t = tensor_hopf(v, w);
  RFactor out;
  out.kind = kind;
  out.tensor = formal_carrier(v, w);
  out.order = order;
  const Scalar c = Scalar::q().inv() - Scalar::q();
  std::vector<std::pair<int, LinearOp<Scalar>>> terms;
  bool terminated = false;
  for (int m = first_m; m <= order; ++m) {
    if (v->truncated() && m > v->buffer) throw TruncationError("R-factor: horizon not reached within buffer of " + v->name);
    auto [a, b] = term(m);
    // truncation artifacts on the buffer rows do not count
    if (trusted_part(*v, a).is_zero() || trusted_part(*w, b).is_zero()) {
      terminated = true;
      break;
    }
    terms.push_back({m, kron(*t, a, b).scaled(c)});
  }
  if (terminated) {
    // finite product, computed exactly over RatU
    out.horizon = terms.empty() ? first_m - 1 : terms.back().first;
    const RatU u = RatU::var();
    LinearOp<RatU> r = LinearOp<RatU>::identity(t->dim());
    for (const auto& [m, x] : terms) {
      LinearOp<RatU> f = qexp_operator(p, lift_op(x).scaled(u.pow(m)));
      r = reverse ? f * r : r * f;
    }
    out.op = r;
    return out;
  }
  OpSeries r(order + 1, LinearOp<Scalar>(t->dim(), t->dim()));
  r[0] = LinearOp<Scalar>::identity(t->dim());
  for (const auto& [m, x] : terms) {
    OpSeries f(order + 1, LinearOp<Scalar>(t->dim(), t->dim()));
    if (m == 0) f[0] = qexp_operator(p, x);
    else f = qexp_series(p, m, x, order);
    r = reverse ? op_series_mul(f, r) : op_series_mul(r, f);
  }
  out.op = reconstruct_entries(r, order, kind == RKind::plus ? "R^+" : "R^-");
  out.reconstructed = true;
  return out;
}

}  // namespace detail

// R^+(u) = prod_{m>=0} exp_q((q^-1 - q) u^m x+_m (x) x-_{-m}), increasing m from the left.
inline RFactor r_plus(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int order = 12) {
  return detail::r_pm(RKind::plus, v, w, order, 0, 1, false, [&](int m) {
    return std::make_pair(x_plus(*v, m), x_minus(*w, -m));
  });
}

// R^-(u) = prod_{m>0} exp_{q^p}((q^-1 - q) u^m k^-1 x-_m (x) x+_{-m} k), decreasing m from the left.
// p = 1 by default: with p = -1 the factor disagrees with the stable maps from the second power on.
inline RFactor r_minus(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int order = 12, int p = 1) {
  return detail::r_pm(RKind::minus, v, w, order, 1, p, true, [&](int m) {
    return std::make_pair(v->k_op(-1) * x_minus(*v, m), x_plus(*w, -m) * w->k_op(1));
  });
}

// R^infty: q^{-n n'/2} on a pair of weights (n, n').
inline RFactor r_infty(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w) {
  RFactor out;
  out.kind = RKind::infinity;
  out.tensor = detail::formal_carrier(v, w);
  std::vector<RatU> d;
  for (const auto& [i, j] : out.tensor->pairs) d.push_back(RatU(Scalar::spow(-v->weight[i] * w->weight[j])));
  out.op = LinearOp<RatU>::diagonal(d);
  return out;
}

// Log-eigenvalue series of R^0 on the pure tensor (i, j): -(q-q^-1) sum u^m m/([m](q^m+q^-m)) g_m(i) g_{-m}(j).
struct ZeroData {
  ModulePtr<Scalar> tensor;
  std::vector<Series<Scalar>> log_eigen;  // per basis index of tensor_hopf(V, W); empty when untrusted
};

inline ZeroData r_zero_log(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int order) {
  if (v->family == Family::tensor || w->family == Family::tensor)
    throw UnsupportedError("r_zero: factors must be base modules with diagonal Drinfeld-Cartan action");
  ZeroData z;
  z.tensor = tensor_hopf(v, w);
  const auto lv = basis_lweights(*v);
  std::vector<LinearOp<Scalar>> hw;
  for (int m = 1; m <= order; ++m) {
    LinearOp<Scalar> h = h_op(*w, -m);
    for (int c = 0; c < h.cols(); ++c)
      for (const auto& e : h.col(c))
        if (e.first != c) throw UnsupportedError("r_zero: h_{-m} is not diagonal on " + w->name);
    hw.push_back(std::move(h));
  }
  std::vector<std::vector<Scalar>> hv(v->dim());
  for (int i = 0; i < v->dim(); ++i)
    if (lv[i]) hv[i] = lv[i]->h_tuple(order);
  const Scalar q = Scalar::q();
  std::vector<Scalar> coef(order + 1);
  for (int m = 1; m <= order; ++m) coef[m] = -detail::qmq() * Scalar(m) / (qint(m) * (q.pow(m) + q.pow(-m)));
  for (int c = 0; c < z.tensor->dim(); ++c) {
    auto [i, j] = z.tensor->pairs[c];
    if (!z.tensor->is_trusted(c) || !lv[i]) {
      z.log_eigen.emplace_back();
      continue;
    }
    Series<Scalar> s(order);
    for (int m = 1; m <= order; ++m) s[m] = coef[m] * hv[i][m - 1] * hw[m - 1].at(j, j);
    z.log_eigen.push_back(std::move(s));
  }
  return z;
}

// Rational part of R^0 relative to the highest pair, with that pair's eigenvalue as scalar part.
inline RFactor r_zero(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int order = 12) {
  auto z = r_zero_log(v, w, order);
  RFactor out;
  out.kind = RKind::zero;
  out.tensor = detail::formal_carrier(v, w);
  out.order = order;
  out.reconstructed = true;
  const int top = detail::pair_index(*z.tensor, 0, 0);
  const Series<Scalar>& l0 = z.log_eigen[top];
  out.scalar_part = l0.exp();
  out.op = LinearOp<RatU>(z.tensor->dim(), z.tensor->dim());
  for (int c = 0; c < z.tensor->dim(); ++c) {
    if (z.log_eigen[c].order() != order) {
      out.op.add(c, c, RatU(1));
      continue;
    }
    Series<Scalar> e = (z.log_eigen[c] - l0).exp();
    try {
      out.op.add(c, c, rational_reconstruct_auto(e, order - 1, 1).value);
    } catch (const ReconstructionError& err) {
      throw ReconstructionError("r_zero: block " + z.tensor->labels[c] + ": " + err.what());
    }
  }
  return out;
}

// R^+ R0bar R^- R^infty on finite-dimensional modules, optionally scaled so that the
// highest (x) highest entry is 1. The discarded scalars are kept in scalar_part.
inline RFactor full_r(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int order = 12, bool normalize = true) {
  if (!v->full || !w->full || v->truncated() || w->truncated())
    throw UnsupportedError("full_r: both factors must be finite-dimensional modules of the full algebra");
  RFactor p = r_plus(v, w, order), z = r_zero(v, w, order), m = r_minus(v, w, order), inf = r_infty(v, w);
  RFactor out;
  out.kind = RKind::full;
  out.tensor = p.tensor;
  out.order = order;
  out.reconstructed = true;
  out.op = p.op * z.op * m.op * inf.op;
  Series<Scalar> scalar = *z.scalar_part;
  if (normalize) {
    const int top = detail::pair_index(*out.tensor, 0, 0);
    const RatU c = out.op.at(top, top);
    if (!c.is_constant()) throw std::logic_error("full_r: highest (x) highest entry depends on u");
    out.op = out.op.scaled(c.inv());
    scalar = scalar.scaled(c.constant());
  }
  out.scalar_part = scalar;
  return out;
}

// tau S tau for a map on the flipped carrier.
template <class F>
LinearOp<F> conjugate_flip(const Module<F>& vw, const Module<F>& wv, const LinearOp<F>& s) {
  return flip(wv, vw) * s * flip(vw, wv);
}

template <class F>
CheckReport compare_trusted(const Module<F>& t, const LinearOp<F>& a, const LinearOp<F>& b, const std::string& what) {
  CheckReport rep;
  for (int c = 0; c < t.dim(); ++c) {
    if (!t.is_trusted(c)) continue;
    for (int r = 0; r < t.dim(); ++r) {
      if (!t.is_trusted(r)) continue;
      if (a.at(r, c) != b.at(r, c)) {
        rep.ok = false;
        rep.witness = what + " at " + t.labels[r] + " <- " + t.labels[c] + ": " + canonical(a.at(r, c)) + " vs " +
                      canonical(b.at(r, c));
        return rep;
      }
    }
  }
  return rep;
}

struct RelktReport {
  CheckReport plus, minus;
  bool ok() const { return plus.ok && minus.ok; }
};

// R^+(u) = tau S_{W,V}(u^-1) tau and R^-(u) = R^infty S_{V,W}(u)^-1 (R^infty)^-1 on V(u) (x) W.
inline RelktReport verify_relkt(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, int order = 12,
                                int minus_base = 1) {
  RelktReport rep;
  RFactor p = r_plus(v, w, order), m = r_minus(v, w, order, minus_base), inf = r_infty(v, w);
  const Module<RatU>& vw = *p.tensor;
  auto swv = stable_map(lift<RatU>(w), twist(lift<RatU>(v), RatU::var()));
  rep.plus = compare_trusted(vw, p.op, conjugate_flip(vw, *swv.tensor, swv.mat), "R+");
  auto svw = stable_map_on(p.tensor);
  std::vector<RatU> d;
  for (int c = 0; c < vw.dim(); ++c) d.push_back(inf.op.at(c, c).inv());
  const LinearOp<RatU> inf_inv = LinearOp<RatU>::diagonal(d);
  rep.minus = compare_trusted(vw, m.op, inf.op * stable_inverse(svw).mat * inf_inv, "R-");
  return rep;
}

struct IMap {
  ModulePtr<RatU> source;  // V(u) (x) W
  ModulePtr<RatU> target;  // W (x) V(u)
  LinearOp<RatU> op;
  LinearOp<RatU> left;     // S_{W,V}(u^-1) tau
  LinearOp<RatU> right;    // S_{V,W}(u)^-1
  int max_m = 0;
};

// S_{W,V}(u^-1) tau alpha S_{V,W}(u)^-1 : V(u) (x) W -> W (x) V(u). alpha must commute with the
// additive Drinfeld-Cartan action on trusted rows (checked for h_1..h_{max_m}).
inline IMap i_map(const ModulePtr<Scalar>& v, const ModulePtr<Scalar>& w, const std::optional<LinearOp<RatU>>& alpha,
                  int max_m = 0) {
  IMap out;
  out.source = detail::formal_carrier(v, w);
  const RatU u = RatU::var();
  auto svw = stable_map_on(out.source, max_m);
  auto swv = stable_map(lift<RatU>(w), twist(lift<RatU>(v), u), max_m);
  out.target = swv.tensor;
  out.max_m = max_m > 0 ? max_m : svw.max_m;
  out.left = swv.mat * flip(*out.source, *out.target);
  out.right = stable_inverse(svw).mat;
  LinearOp<RatU> a = LinearOp<RatU>::identity(out.source->dim());
  if (alpha) {
    for (int m = 1; m <= out.max_m; ++m) {
      LinearOp<RatU> h = h_drinfeld(*out.source, m);
      if (!trusted_part(*out.source, *alpha * h - h * *alpha).is_zero())
        throw std::invalid_argument("i_map: alpha does not commute with h_" + std::to_string(m));
    }
    a = *alpha;
  }
  out.op = out.left * a * out.right;
  return out;
}

namespace detail {

// Entries of (g_target I - I g_source) for the Chevalley generators on trusted rows and columns.
inline std::vector<std::pair<std::string, LinearOp<RatU>>> borel_defects(const IMap& im, const LinearOp<RatU>& op) {
  const Module<RatU>& s = *im.source;
  const Module<RatU>& t = *im.target;
  std::vector<std::pair<std::string, LinearOp<RatU>>> out;
  const std::vector<std::tuple<std::string, LinearOp<RatU>, LinearOp<RatU>>> gens = {
      {"e0", t.e0, s.e0}, {"e1", t.e1, s.e1}, {"k", t.k_op(1), s.k_op(1)}};
  for (const auto& [name, a, b] : gens) {
    LinearOp<RatU> d = a * op - op * b;
    LinearOp<RatU> keep(d.rows(), d.cols());
    for (int c = 0; c < d.cols(); ++c) {
      if (!s.is_trusted(c)) continue;
      // a generator can leave the trusted range, so the last trusted depth is not compared
      for (const auto& [r, x] : d.col(c))
        if (t.is_trusted(r) && t.depth[r] < s.trusted) keep.add(r, c, x);
    }
    out.push_back({name, keep});
  }
  return out;
}

}  // namespace detail

// Chevalley generators e0, e1 and k commute with I (a morphism of Borel modules).
inline CheckReport verify_imap_borel(const IMap& im) {
  CheckReport rep;
  for (const auto& [name, d] : detail::borel_defects(im, im.op))
    for (int c = 0; c < d.cols(); ++c)
      if (!d.col(c).empty()) {
        rep.ok = false;
        rep.witness = name + " at " + im.target->labels[d.col(c).front().first] + " <- " + im.source->labels[c];
        return rep;
      }
  return rep;
}

// Diagonal factors f_i(u) on the first factor (f_0 = 1) such that I with alpha (diag(f) (x) Id)
// is a Borel morphism. Empty when no such factor exists; more than one solution is reported as non-unique.
struct AlphaFit {
  std::vector<RatU> factors;
  bool unique = false;
};

inline AlphaFit fit_first_factor(const IMap& im, const LinearOp<RatU>& alpha, int first_dim) {
  AlphaFit fit;
  const Module<RatU>& s = *im.source;
  std::vector<LinearOp<RatU>> parts;
  for (int i = 0; i < first_dim; ++i) {
    std::vector<RatU> p(s.dim());
    for (int c = 0; c < s.dim(); ++c)
      if (s.pairs[c].first == i) p[c] = RatU(1);
    parts.push_back(im.left * alpha * LinearOp<RatU>::diagonal(p) * im.right);
  }
  std::map<std::tuple<int, int, int>, std::vector<RatU>> rows;
  for (int i = 0; i < first_dim; ++i) {
    auto ds = detail::borel_defects(im, parts[i]);
    for (size_t g = 0; g < ds.size(); ++g)
      for (int c = 0; c < ds[g].second.cols(); ++c)
        for (const auto& [r, x] : ds[g].second.col(c)) {
          auto& row = rows[{static_cast<int>(g), r, c}];
          row.resize(first_dim);
          row[i] = x;
        }
  }
  Matrix<RatU> m(static_cast<int>(rows.size()), first_dim);
  int k = 0;
  for (const auto& [key, row] : rows) {
    for (int i = 0; i < first_dim; ++i) m(k, i) = row[i];
    ++k;
  }
  auto ker = kernel(m);
  if (ker.empty() || ker[0][0].is_zero()) return fit;
  fit.unique = ker.size() == 1;
  const RatU n = ker[0][0].inv();
  for (const auto& x : ker[0]) fit.factors.push_back(x * n);
  return fit;
}

// (h_m on the target) I = I (h_m on the source), trusted rows and columns, m = 1..max_m.
inline CheckReport verify_imap_h(const IMap& im, int max_m) {
  CheckReport rep;
  for (int m = 1; m <= max_m; ++m) {
    LinearOp<RatU> d = h_op(*im.target, m) * im.op - im.op * h_op(*im.source, m);
    for (int c = 0; c < d.cols() && rep.ok; ++c) {
      if (!im.source->is_trusted(c)) continue;
      for (const auto& [r, v] : d.col(c))
        if (im.target->is_trusted(r)) {
          rep.ok = false;
          rep.witness = "h_" + std::to_string(m) + " at " + im.target->labels[r] + " <- " + im.source->labels[c];
          break;
        }
    }
    if (!rep.ok) return rep;
  }
  return rep;
}

// Leading coefficient at u = 1 of a whole operator: lim (u-1)^N A(u) with one N for all entries.
struct Specialization {
  int N = 0;
  Matrix<Scalar> value;
};

inline Specialization leading_at_one(const LinearOp<RatU>& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Specialization sp;
  const Scalar one(1);
  bool any = false;
  for (int c : cols)
    for (const auto& [r, v] : a.col(c))
      if (std::find(rows.begin(), rows.end(), r) != rows.end()) {
        sp.N = any ? std::max(sp.N, -order_at(v, one)) : -order_at(v, one);
        any = true;
      }
  sp.value = Matrix<Scalar>(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (size_t jc = 0; jc < cols.size(); ++jc)
    for (size_t ir = 0; ir < rows.size(); ++ir) {
      const RatU v = a.at(rows[ir], cols[jc]);
      if (v.is_zero()) continue;
      const int o = order_at(v, one);
      if (o + sp.N > 0) continue;
      sp.value(static_cast<int>(ir), static_cast<int>(jc)) = scaled_value_at(v, one, sp.N);
    }
  return sp;
}

// ---- Yang-Baxter on the W1 triple ----

struct YbeReport {
  bool ok = false;
  bool unit_on_top = false;
  bool degenerate_ok = false;
  std::string witness;
};

namespace detail {

// R(x) on legs (a, b) of a 2x2x2 space, x substituted for u.
inline LinearOp<RatUV> leg_op(const Matrix<RatU>& r4, int a, int b, const RatUV& x) {
  LinearOp<RatUV> out(8, 8);
  for (int col = 0; col < 8; ++col) {
    std::array<int, 3> bits{(col >> 2) & 1, (col >> 1) & 1, col & 1};
    const int cin = bits[a] * 2 + bits[b];
    for (int rin = 0; rin < 4; ++rin) {
      const RatU& e = r4(rin, cin);
      if (e.is_zero()) continue;
      auto nb = bits;
      nb[a] = rin >> 1;
      nb[b] = rin & 1;
      out.add(nb[0] * 4 + nb[1] * 2 + nb[2], col, substitute(e, x));
    }
  }
  return out;
}

// Normalized R on W1(u) (x) W1 as a 4x4 matrix in the basis v_i (x) v_j, index 2i + j.
inline Matrix<RatU> w1_r_matrix(int order) {
  auto w1 = make_eval<Scalar>(1, Scalar(1));
  RFactor r = full_r(w1, w1, order);
  Matrix<RatU> m(4, 4);
  for (int c = 0; c < r.tensor->dim(); ++c)
    for (const auto& [row, v] : r.op.col(c)) {
      auto [i, j] = r.tensor->pairs[row];
      auto [i2, j2] = r.tensor->pairs[c];
      m(2 * i + j, 2 * i2 + j2) = v;
    }
  return m;
}

}  // namespace detail

inline YbeReport verify_ybe(int order = 12) {
  YbeReport rep;
  const Matrix<RatU> r4 = detail::w1_r_matrix(order);
  const RatUV u1(RatU::var()), u2 = RatUV::var();
  auto r12 = detail::leg_op(r4, 0, 1, u1 / u2), r13 = detail::leg_op(r4, 0, 2, u1), r23 = detail::leg_op(r4, 1, 2, u2);
  auto lhs = r12 * r13 * r23, rhs = r23 * r13 * r12;
  rep.ok = lhs == rhs;
  if (!rep.ok)
    for (int c = 0; c < 8 && rep.witness.empty(); ++c)
      for (int r = 0; r < 8; ++r)
        if (lhs.at(r, c) != rhs.at(r, c)) {
          rep.witness = "entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
          break;
        }
  rep.unit_on_top = lhs.at(0, 0).is_one() && lhs.col(0).size() == 1 && rhs.at(0, 0).is_one() && rhs.col(0).size() == 1;
  // u2 = 1: R12(u1) R13(u1) R23(1) = R23(1) R13(u1) R12(u1)
  auto s12 = detail::leg_op(r4, 0, 1, u1), s13 = detail::leg_op(r4, 0, 2, u1), s23 = detail::leg_op(r4, 1, 2, RatUV(1));
  rep.degenerate_ok = s12 * s13 * s23 == s23 * s13 * s12;
  return rep;
}

// tau R(u) tau R(1/u) = Id for the normalized R on W1(u) (x) W1.
inline bool verify_unitarity(int order = 12) {
  const Matrix<RatU> r4 = detail::w1_r_matrix(order);
  const RatU u = RatU::var(), ui = u.inv();
  Matrix<RatU> a(4, 4), b(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const int rs = (r & 1) * 2 + (r >> 1);  // tau
      a(rs, c) = r4(r, c);
      b(rs, c) = substitute(r4(r, c), ui);
    }
  Matrix<RatU> p(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) p(i, j) += a(i, k) * b(k, j);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (p(i, j) != RatU(i == j ? 1 : 0)) return false;
  return true;
}

// ---- QT exact sequence ----

// Truncated q-character of L^-_b: Psi_b^{-1} A_b^{-1} ... A_{b q^{-2(j-1)}}^{-1}, j = 0..depth.
inline std::vector<LWeight<Scalar>> lminus_qchar(const Scalar& b, int depth) {
  std::vector<LWeight<Scalar>> out;
  LWeight<Scalar> l = psi_monomial(Sign::minus, b);
  for (int j = 0; j <= depth; ++j) {
    out.push_back(l);
    l = l * a_monomial(b * Scalar::qpow(-2 * j)).inv();
  }
  return out;
}

struct QTReport {
  bool r0_alpha_morphism = false;   // alpha = R0bar R^infty alone already gives a Borel morphism
  std::vector<RatU> alpha_correction;  // diagonal factor on the first factor making I a morphism
  bool morphism = false;            // Borel intertwiner before specialization
  int N = 0;                        // pole order removed at u = 1
  bool rank_one = false;            // rank 1 on every trusted weight space of weight 1 - 2r, 1 <= r <= depth
  bool non_invertible = false;
  std::vector<LWeight<Scalar>> kernel, image;
  bool kernel_literal = false, image_literal = false, identity_literal = false;
  bool kernel_swapped = false, image_swapped = false, identity_swapped = false;
  std::string witness;
  bool ok() const {
    return morphism && rank_one && non_invertible && kernel_literal && image_literal && identity_literal;
  }
};

namespace detail {

// l-weight of an eigenvector x of the h-action among the candidates of its weight space.
inline std::optional<LWeight<Scalar>> identify(const Module<Scalar>& t, const std::vector<Scalar>& x,
                                               const std::vector<LWeight<Scalar>>& cands, int max_m) {
  std::vector<LWeight<Scalar>> alive = cands;
  for (int m = 1; m <= max_m && alive.size() > 1; ++m) {
    auto hx = h_op(t, m).apply(x);
    std::vector<LWeight<Scalar>> keep;
    for (const auto& l : alive) {
      const Scalar g = l.h_eigen(m);
      bool ok = true;
      for (size_t i = 0; i < x.size() && ok; ++i) ok = hx[i] == g * x[i];
      if (ok && std::find(keep.begin(), keep.end(), l) == keep.end()) keep.push_back(l);
    }
    alive = keep;
  }
  if (alive.size() != 1) return std::nullopt;
  return alive[0];
}

inline bool same_multiset(std::vector<LWeight<Scalar>> a, std::vector<LWeight<Scalar>> b) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    auto it = std::find(b.begin(), b.end(), x);
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace detail

// V = L(Y_{aq}) (the module with l-weights Y_{aq}, Y_{aq^3}^{-1}), W = L^-_a truncated at `depth`.
// R_{V,W} is the leading coefficient at u = 1 of I(u) with alpha = R0bar R^infty.
inline QTReport qt_sequence(const Scalar& a, int depth, int buffer = 6, int order = 12) {
  if (depth < 2) throw std::invalid_argument("qt_sequence: depth must be >= 2");
  QTReport rep;
  const Scalar q = Scalar::q();
  auto v = make_eval<Scalar>(1, a * q * q);
  auto w = make_prefund<Scalar>(Sign::minus, a, depth, buffer);
  RFactor z = r_zero(v, w, order), inf = r_infty(v, w);
  LinearOp<RatU> alpha = z.op * inf.op;
  {
    const int top = detail::pair_index(*z.tensor, 0, 0);
    alpha = alpha.scaled(alpha.at(top, top).inv());
  }
  IMap im = i_map(v, w, alpha);
  rep.r0_alpha_morphism = verify_imap_borel(im).ok;
  AlphaFit fit = fit_first_factor(im, alpha, v->dim());
  if (fit.factors.empty()) {
    rep.witness = "no diagonal correction of alpha gives a Borel morphism";
    return rep;
  }
  rep.alpha_correction = fit.factors;
  {
    std::vector<RatU> d;
    for (const auto& pr : im.source->pairs) d.push_back(fit.factors[pr.first]);
    im.op = im.left * alpha * LinearOp<RatU>::diagonal(d) * im.right;
  }
  rep.morphism = fit.unique && verify_imap_borel(im).ok;
  const Module<RatU>& src = *im.source;
  const Module<RatU>& dst = *im.target;
  std::vector<int> rows, cols;
  for (int c = 0; c < src.dim(); ++c)
    if (src.is_trusted(c)) cols.push_back(c);
  for (int r = 0; r < dst.dim(); ++r)
    if (dst.is_trusted(r)) rows.push_back(r);
  Specialization sp = leading_at_one(im.op, rows, cols);
  rep.N = sp.N;
  auto ts = tensor_hopf(v, w), td = tensor_hopf(w, v);
  const auto lsrc = basis_lweights(*ts), ldst = basis_lweights(*td);
  rep.rank_one = true;
  int total_rank = 0;
  for (int r = 0; r <= depth; ++r) {
    const int wt = 1 - 2 * r;
    std::vector<int> ci, ri;
    for (size_t j = 0; j < cols.size(); ++j)
      if (src.weight[cols[j]] == wt) ci.push_back(static_cast<int>(j));
    for (size_t i = 0; i < rows.size(); ++i)
      if (dst.weight[rows[i]] == wt) ri.push_back(static_cast<int>(i));
    Matrix<Scalar> blk(static_cast<int>(ri.size()), static_cast<int>(ci.size()));
    for (size_t i = 0; i < ri.size(); ++i)
      for (size_t j = 0; j < ci.size(); ++j) blk(static_cast<int>(i), static_cast<int>(j)) = sp.value(ri[i], ci[j]);
    const int rk = rank(blk);
    total_rank += rk;
    if (r >= 1 && rk != 1) rep.rank_one = false;
    std::vector<LWeight<Scalar>> cs, cd;
    for (int j : ci)
      if (lsrc[cols[j]]) cs.push_back(*lsrc[cols[j]]);
    for (int i : ri)
      if (ldst[rows[i]]) cd.push_back(*ldst[rows[i]]);
    for (const auto& kv : kernel(blk)) {
      std::vector<Scalar> x(ts->dim());
      for (size_t j = 0; j < ci.size(); ++j) x[cols[ci[j]]] = kv[j];
      auto l = detail::identify(*ts, x, cs, std::min(4, buffer));
      if (!l) {
        rep.witness = "kernel vector of weight " + std::to_string(wt) + " is not an l-weight vector";
        return rep;
      }
      rep.kernel.push_back(*l);
    }
    for (const auto& iv : column_space(blk)) {
      std::vector<Scalar> x(td->dim());
      for (size_t i = 0; i < ri.size(); ++i) x[rows[ri[i]]] = iv[i];
      auto l = detail::identify(*td, x, cd, std::min(4, buffer));
      if (!l) {
        rep.witness = "image vector of weight " + std::to_string(wt) + " is not an l-weight vector";
        return rep;
      }
      rep.image.push_back(*l);
    }
  }
  rep.non_invertible = total_rank < static_cast<int>(cols.size());
  const auto plus = constant_lweight<Scalar>(1), minus = constant_lweight<Scalar>(-1);
  auto shifted = [](std::vector<LWeight<Scalar>> l, const LWeight<Scalar>& c, int keep) {
    l.resize(keep);
    for (auto& x : l) x = x * c;
    return l;
  };
  // kernel lives in weights -1-2j (j < depth), image in 1-2j (j <= depth)
  const Scalar up = a * q * q, down = a * q.pow(-2);
  rep.kernel_literal = detail::same_multiset(rep.kernel, shifted(lminus_qchar(up, depth), minus, depth));
  rep.image_literal = detail::same_multiset(rep.image, shifted(lminus_qchar(down, depth), plus, depth + 1));
  rep.kernel_swapped = detail::same_multiset(rep.kernel, shifted(lminus_qchar(down, depth), minus, depth));
  rep.image_swapped = detail::same_multiset(rep.image, shifted(lminus_qchar(up, depth), plus, depth + 1));
  // [L(Y_aq)][L^-_a] against the two sums, on weights >= 1 - 2 depth
  std::vector<LWeight<Scalar>> lhs;
  for (const auto& x : std::vector<LWeight<Scalar>>{y_monomial(a * q), y_monomial(a * q.pow(3)).inv()})
    for (const auto& y : lminus_qchar(a, depth))
      if ((x * y).weight >= 1 - 2 * depth) lhs.push_back(x * y);
  auto rhs = [&](const Scalar& bp, const Scalar& bm) {
    auto r1 = shifted(lminus_qchar(bp, depth), plus, depth + 1);
    auto r2 = shifted(lminus_qchar(bm, depth), minus, depth);
    r1.insert(r1.end(), r2.begin(), r2.end());
    return r1;
  };
  rep.identity_literal = detail::same_multiset(lhs, rhs(down, up));
  rep.identity_swapped = detail::same_multiset(lhs, rhs(up, down));
  if (!rep.ok() && rep.witness.empty()) {
    if (!rep.identity_literal) rep.witness = "character identity fails with [w1][L-_{aq^-2}] + [-w1][L-_{aq^2}]";
    else if (!rep.kernel_literal) rep.witness = "kernel q-character differs from [-w1] chi_q(L-_{aq^2})";
    else if (!rep.image_literal) rep.witness = "image q-character differs from [w1] chi_q(L-_{aq^-2})";
    else rep.witness = "morphism/rank check failed";
  }
  return rep;
}

// ---- alpha(k) stationarity on L^+(u) (x) W_k ----

struct AlphaReport {
  bool eigen_reference = true;      // R^0 eigenvalue equals exp(sum u^m X_{k,j,m}/(q^{2m}+q^{-2m}))
  bool eigen_derived = true;      // ... equals exp(sum u^m X_{k,j,m}/(m(q^{2m}-q^{-2m})))
  bool stationary_reference = true;   // with alpha(k) = exp(sum u^m q^{2km}/(q^{2m}-q^{-2m}))
  bool stationary_corrected = true; // with alpha(k) = exp(-sum u^m q^{2km}/(m(q^{2m}-q^{-2m})))
  bool top_is_scalar = true;
  std::string witness;
};

inline AlphaReport alpha_stationarity(const std::vector<int>& ks, int order = 12) {
  AlphaReport rep;
  const Scalar q = Scalar::q();
  const int kmax = ks.empty() ? 1 : *std::max_element(ks.begin(), ks.end());
  auto lp = make_prefund<Scalar>(Sign::plus, Scalar(1), kmax, 2);
  std::map<int, std::vector<Series<Scalar>>> reference, corrected;
  auto note = [&](bool& flag, const std::string& w) {
    if (flag && rep.witness.empty()) rep.witness = w;
    flag = false;
  };
  for (int k : ks) {
    auto wk = make_eval<Scalar>(k, Scalar(1));
    auto zd = r_zero_log(lp, wk, order);
    RFactor z = r_zero(lp, wk, order);
    Series<Scalar> ap(order), ac(order);
    for (int m = 1; m <= order; ++m) {
      const Scalar d = q.pow(2 * m) - q.pow(-2 * m);
      ap[m] = q.pow(2 * k * m) / d;
      ac[m] = -q.pow(2 * k * m) / (Scalar(m) * d);
    }
    for (int j = 0; j <= k; ++j) {
      const Series<Scalar>& l = zd.log_eigen[detail::pair_index(*zd.tensor, 0, j)];
      Series<Scalar> lp_(order), ld(order);
      for (int m = 1; m <= order; ++m) {
        const Scalar x = -q.pow(2 * (j - 1) * m) - q.pow(2 * j * m) + q.pow(2 * k * m) + q.pow(-2 * m);
        lp_[m] = x / (q.pow(2 * m) + q.pow(-2 * m));
        ld[m] = x / (Scalar(m) * (q.pow(2 * m) - q.pow(-2 * m)));
      }
      if (l != lp_) note(rep.eigen_reference, "k=" + std::to_string(k) + " j=" + std::to_string(j) + ": reference eigen-series");
      if (l != ld) note(rep.eigen_derived, "k=" + std::to_string(k) + " j=" + std::to_string(j) + ": derived eigen-series");
      reference[k].push_back((l + ap).exp());
      corrected[k].push_back((l + ac).exp());
      if (j == 0 && l.exp() != *z.scalar_part) note(rep.top_is_scalar, "k=" + std::to_string(k) + ": top row");
    }
  }
  for (size_t a = 0; a + 1 < ks.size(); ++a) {
    const int k1 = ks[a], k2 = ks[a + 1];
    const size_t n = std::min(reference[k1].size(), reference[k2].size());
    for (size_t j = 0; j < n; ++j) {
      if (reference[k1][j] != reference[k2][j])
        note(rep.stationary_reference, "reference alpha: k=" + std::to_string(k1) + " vs " + std::to_string(k2));
      if (corrected[k1][j] != corrected[k2][j])
        note(rep.stationary_corrected, "corrected alpha: k=" + std::to_string(k1) + " vs " + std::to_string(k2));
    }
  }
  return rep;
}

// ---- T*P^1 stable envelopes ----

struct StabReport {
  bool plus_ok = false, minus_ok = false;
  std::string witness;
};

// Stab_{C+} = diag(q^-1(u-q^2), 1-u) S_{W1,W1}(u)^{-1} and Stab_{C-} = diag(u-1, q(q^-2-u)) R^+(u)^{-1}
// on the zero-weight block (v0*v1, v1*v0) <-> ([p1], [p0]).
inline StabReport stab_envelope_compare() {
  StabReport rep;
  const Scalar q = Scalar::q(), qi = q.inv();
  const RatU u = RatU::var(), one(1);
  Matrix<RatU> stab_p(2, 2), stab_m(2, 2), dp(2, 2), dm(2, 2);
  stab_p(0, 0) = RatU(qi) * (u - RatU(q * q));
  stab_p(1, 0) = u * RatU(qi - q);
  stab_p(1, 1) = one - u;
  stab_m(0, 0) = u - one;
  stab_m(0, 1) = RatU(qi - q);
  stab_m(1, 1) = RatU(q) * (RatU(q.pow(-2)) - u);
  dp(0, 0) = stab_p(0, 0);
  dp(1, 1) = stab_p(1, 1);
  dm(0, 0) = stab_m(0, 0);
  dm(1, 1) = stab_m(1, 1);
  auto w1 = make_eval<Scalar>(1, Scalar(1));
  auto s = stable_map_formal(w1, w1);
  const Module<RatU>& t = *s.tensor;
  const std::vector<int> blk{t.index_of("v0*v1"), t.index_of("v1*v0")};
  Matrix<RatU> tp = inverse(s.mat.dense(blk, blk));
  RFactor rp = r_plus(w1, w1);
  Matrix<RatU> tm = inverse(rp.op.dense(blk, blk));
  auto mul = [](const Matrix<RatU>& a, const Matrix<RatU>& b) {
    Matrix<RatU> c(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) c(i, j) += a(i, k) * b(k, j);
    return c;
  };
  auto eq = [](const Matrix<RatU>& a, const Matrix<RatU>& b) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (a(i, j) != b(i, j)) return false;
    return true;
  };
  rep.plus_ok = eq(mul(dp, tp), stab_p);
  rep.minus_ok = eq(mul(dm, tm), stab_m);
  if (!rep.plus_ok) rep.witness = "Stab_{C+} triangular factor: " + canonical(tp(1, 0));
  else if (!rep.minus_ok) rep.witness = "Stab_{C-} triangular factor: " + canonical(tm(0, 1));
  return rep;
}

}  // namespace qaff

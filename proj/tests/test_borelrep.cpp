#include "doctest.h"
#include "qaff/drinfeld.hpp"
#include "qaff/qexp.hpp"
#include "qaff/series.hpp"

using namespace qaff;

namespace {

const Scalar q = Scalar::q();
const Scalar qi = Scalar::q().inv();
const Scalar qq = q - qi;

// h_m eigenvalue of an l-weight psi(z): coefficient of z^m in log(psi/psi(0)), over (q - q^{-1}).
Scalar h_from_psi(const RatU& psi, int m) {
  Scalar c0 = psi.eval(Scalar(0));
  auto L = Series<Scalar>::from_frac(psi * RatU(c0.inv()), m).log();
  return L[m] / qq;
}

RatU z() { return RatU::var(); }

RatU y_mono(const Scalar& a) { return RatU(q) * (RatU(1) - z() * RatU(a * qi)) / (RatU(1) - z() * RatU(a * q)); }
RatU a_mono(const Scalar& a) { return y_mono(a * qi) * y_mono(a * q); }

// l-weight of v_i in W_k(a), telescoped from the Y-monomials.
RatU eval_psi(int k, int i, const Scalar& a) {
  RatU za = z() * RatU(a);
  return RatU(q.pow(k - 2 * i)) * (RatU(1) - za * RatU(q.pow(-2 * k))) * (RatU(1) - za * RatU(q * q)) /
         ((RatU(1) - za * RatU(q.pow(2 - 2 * i))) * (RatU(1) - za * RatU(q.pow(-2 * i))));
}

template <class F>
bool diagonal(const LinearOp<F>& op) {
  for (int c = 0; c < op.cols(); ++c)
    for (const auto& e : op.col(c))
      if (e.first != c) return false;
  return true;
}

}  // namespace

TEST_CASE("evaluation module: shape, relations, h1 eigenvalues") {
  for (int k = 0; k <= 3; ++k) {
    auto w = make_eval<Scalar>(k, Scalar(1));
    CHECK(w->dim() == k + 1);
    CHECK(check_relations(*w) == "");
    auto h1 = h_op(*w, 1);
    CHECK(diagonal(h1));
    for (int i = 0; i <= k; ++i)
      CHECK(h1.at(i, i) == (q.pow(2 - 2 * i) + q.pow(-2 * i) - q.pow(-2 * k) - q * q) / qq);
  }
  auto w1 = make_eval<Scalar>(1, Scalar(1));
  CHECK(h_op(*w1, 1).at(0, 0) == (Scalar(1) - q.pow(-2)) / qq);
  auto w0 = make_eval<Scalar>(0, Scalar(1));
  CHECK(w0->e0.is_zero());
  CHECK(w0->e1.is_zero());
  CHECK(w0->f0.is_zero());
  CHECK(w0->f1.is_zero());
  auto w3 = make_eval<Scalar>(3, Scalar(1));
  for (int j = 1; j <= 3; ++j) CHECK(w3->f0.at(j - 1, j) == q);
  CHECK(check_relations(*make_eval<Scalar>(2, q.pow(5))) == "");
  CHECK_THROWS_AS(make_eval<Scalar>(-1, Scalar(1)), std::invalid_argument);
}

TEST_CASE("recursion signs: x+/x- commutators reproduce phi+ - phi-") {
  for (int k = 1; k <= 3; ++k) {
    auto w = make_eval<Scalar>(k, q.pow(3));
    const Module<Scalar>& m = *w;
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) {
        const int n = a + b;
        LinearOp<Scalar> rhs(m.dim(), m.dim());
        if (n > 0) rhs = phi(m, n);
        if (n < 0) rhs = -phi(m, n);
        if (n == 0) rhs = m.k_op(1) - m.k_op(-1);
        CHECK(commutator(x_plus(m, a), x_minus(m, b)) == rhs.scaled(qq.inv()));
      }
  }
}

TEST_CASE("evaluation module: higher h_m match the Y-monomial l-weights") {
  const Scalar a = q.pow(3);
  for (int k = 1; k <= 3; ++k) {
    auto w = make_eval<Scalar>(k, a);
    for (int m = 1; m <= 4; ++m) {
      auto h = h_op(*w, m);
      REQUIRE(diagonal(h));
      for (int i = 0; i <= k; ++i) CHECK(h.at(i, i) == h_from_psi(eval_psi(k, i, a), m));
    }
  }
  // W_1(1) is L(Y_{q^-1}): top l-weight Y_{q^-1}, bottom Y_q^{-1}
  CHECK(eval_psi(1, 0, Scalar(1)) == y_mono(qi));
  CHECK(eval_psi(1, 1, Scalar(1)) == y_mono(q).inv());
}

TEST_CASE("evaluation module: negative h_m") {
  // (q^{-1} - q) h_{-m} v_j = (q^{2(j-1)m} + q^{2jm} - q^{2km} - q^{-2m}) / m at a = 1
  for (int k = 1; k <= 3; ++k) {
    auto w = make_eval<Scalar>(k, Scalar(1));
    for (int m = 1; m <= 3; ++m) {
      auto h = h_op(*w, -m);
      REQUIRE(diagonal(h));
      for (int j = 0; j <= k; ++j) {
        Scalar expect = (q.pow(2 * (j - 1) * m) + q.pow(2 * j * m) - q.pow(2 * k * m) - q.pow(-2 * m)) / Scalar(m);
        CHECK(h.at(j, j) * (qi - q) == expect);
      }
    }
  }
}

TEST_CASE("positive prefundamental: scalar h_m") {
  auto lp = make_prefund<Scalar>(Sign::plus, Scalar(1), 4, 4);
  CHECK(lp->dim() == 9);
  CHECK(check_relations(*lp) == "");
  for (int m = 1; m <= 4; ++m) {
    auto h = trusted_part(*lp, h_op(*lp, m));
    for (int i = 0; i < lp->dim(); ++i) {
      if (!lp->is_trusted(i)) continue;
      CHECK(h.at(i, i) == (Scalar(m) * (qi - q)).inv());
    }
    CHECK(diagonal(h));
  }
  CHECK_THROWS_AS(h_op(*lp, 5), TruncationError);
  CHECK_THROWS_AS(make_prefund<Scalar>(Sign::plus, Scalar(1), -1, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_prefund<Scalar>(Sign::minus, Scalar(1), 2, 0), std::invalid_argument);
}

TEST_CASE("negative prefundamental: e0 coefficients and l-weights") {
  // closed form of the recursion, solved by hand: c_i = q^{2-i}[i+1]/(q - q^{-1})
  auto c = lminus_coefficients(10);
  CHECK(c[0] * q.pow(-2) == qq.inv());
  for (int i = 0; i < 10; ++i) CHECK(c[i] == q.pow(2 - i) * qint(i + 1) / qq);

  for (const Scalar& a : {Scalar(1), q.pow(-3)}) {
    auto lm = make_prefund<Scalar>(Sign::minus, a, 5, 4);
    CHECK(check_relations(*lm) == "");
    auto h1 = h_op(*lm, 1);
    for (int i = 0; i <= 5; ++i) CHECK(h1.at(i, i) == (q.pow(2 - 2 * i) + q.pow(-2 * i) - q * q) / qq * a);
    for (int m = 1; m <= 4; ++m) {
      auto h = trusted_part(*lm, h_op(*lm, m));
      REQUIRE(diagonal(h));
      RatU psi = (RatU(1) - z() * RatU(a)).inv();
      for (int j = 0; j <= 5; ++j) {
        CHECK(h.at(j, j) == h_from_psi(psi, m));
        psi = psi * a_mono(a * q.pow(-2 * j)).inv();
      }
    }
  }
}

TEST_CASE("negative prefundamental: negative h_m from the limit formula") {
  auto lm = make_prefund<Scalar>(Sign::minus, q, 3, 3);
  auto h = h_op(*lm, -2);
  // (q^{-1} - q) h_{-2} w_1 = a^{-2} (1 + q^4 - q^{-4}) / 2
  CHECK(h.at(1, 1) * (qi - q) == q.pow(-2) * (Scalar(1) + q.pow(4) - q.pow(-4)) / Scalar(2));
  auto lp = make_prefund<Scalar>(Sign::plus, q, 3, 3);
  CHECK_THROWS_AS(h_op(*lp, -1), UnsupportedError);
  CHECK(h_op(*make_onedim<Scalar>(3), -2).is_zero());
}

TEST_CASE("one-dimensional modules and the tensor unit") {
  auto one = make_onedim<Scalar>(1);
  CHECK(one->k_op(1).at(0, 0) == q);
  CHECK(one->e0.is_zero());
  auto w = make_eval<Scalar>(2, q);
  auto unit = make_onedim<Scalar>(0);
  for (auto t : {tensor_hopf(w, unit), tensor_hopf(unit, w)}) {
    CHECK(t->e0 == w->e0);
    CHECK(t->e1 == w->e1);
    CHECK(t->f0 == w->f0);
    CHECK(t->f1 == w->f1);
    CHECK(h_op(*t, 2) == h_op(*w, 2));
  }
}

TEST_CASE("twist") {
  auto w = make_eval<Scalar>(2, Scalar(1));
  auto same = twist(w, Scalar(1));
  CHECK(same->e0 == w->e0);
  CHECK(same->f0 == w->f0);
  const Scalar a = q.pow(2) + Scalar(3);
  auto wa = twist(w, a);
  auto direct = make_eval<Scalar>(2, a);
  CHECK(wa->e0 == direct->e0);
  CHECK(wa->f0 == direct->f0);
  CHECK(wa->e1 == direct->e1);
  CHECK(wa->spectral == a);
  auto back = twist(wa, a.inv());
  CHECK(back->e0 == w->e0);
  CHECK(back->f0 == w->f0);
  auto t = tensor_hopf(make_eval<Scalar>(1, Scalar(1)), make_eval<Scalar>(1, q));
  auto tt = twist(t, a);
  auto td = tensor_hopf(make_eval<Scalar>(1, a), make_eval<Scalar>(1, q * a));
  CHECK(tt->e0 == td->e0);
  CHECK_THROWS_AS(twist(w, Scalar(0)), std::invalid_argument);
}

TEST_CASE("hopf tensor W_k(u) (x) W_l: h1 diagonal and first off-diagonal") {
  const RatU u = RatU::var();
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) {
      auto t = tensor_hopf(make_eval<RatU>(k, u), make_eval<RatU>(l, RatU(1)));
      CHECK(check_relations(*t) == "");
      CHECK(t->e1.col(0).empty());
      auto h1 = h_op(*t, 1);
      for (int c = 0; c < t->dim(); ++c) {
        auto [i, j] = t->pairs[c];
        RatU p = RatU((q * q + 1) * q.pow(-2 * j) - q * q - q.pow(-2 * l)) +
                 u * RatU((q * q + 1) * q.pow(-2 * i) - q * q - q.pow(-2 * k));
        CHECK(h1.at(c, c) == p * RatU(qq.inv()));
        if (i < k && j > 0) {
          int r = t->index_of("v" + std::to_string(i + 1) + "*v" + std::to_string(j - 1));
          Scalar alpha = (qi - q) * q.pow(-2 * i) * qint(i + 1) * qint(k - i);
          CHECK(h1.at(r, c) == u * RatU(alpha * qint(2)));
        }
      }
    }
}

TEST_CASE("drinfeld tensor: additive h and agreement with the hopf diagonal") {
  const RatU u = RatU::var();
  auto v = make_eval<RatU>(1, u), w = make_eval<RatU>(1, RatU(1));
  DrinfeldTensor<RatU> d(v, w);
  auto hopf = tensor_hopf(v, w);
  for (int m = 1; m <= 3; ++m) {
    auto hd = d.h(m);
    CHECK(diagonal(hd));
    auto hh = h_op(*hopf, m);
    for (int c = 0; c < hopf->dim(); ++c) {
      auto [i, j] = hopf->pairs[c];
      CHECK(hd.at(c, c) == h_op(*v, m).at(i, i) + h_op(*w, m).at(j, j));
      CHECK(hh.at(c, c) == hd.at(c, c));
    }
  }
  auto k = d.k();
  for (int c = 0; c < hopf->dim(); ++c) {
    auto [i, j] = hopf->pairs[c];
    CHECK(k.at(c, c) == RatU(q.pow((1 - 2 * i) + (1 - 2 * j))));
  }
  CHECK_THROWS_AS(d.chevalley("e0"), UnsupportedError);
}

TEST_CASE("h_m commute pairwise and are weight preserving") {
  const RatU u = RatU::var();
  std::vector<ModulePtr<RatU>> mods = {
      tensor_hopf(make_eval<RatU>(2, u), make_eval<RatU>(1, RatU(1))),
      tensor_hopf(make_prefund<RatU>(Sign::minus, u, 3, 4), make_eval<RatU>(1, RatU(1))),
      tensor_hopf(make_prefund<RatU>(Sign::plus, u, 3, 4), make_prefund<RatU>(Sign::minus, RatU(1), 3, 4)),
  };
  for (const auto& t : mods) {
    for (int a = 1; a <= 3; ++a)
      for (int b = a + 1; b <= 4; ++b)
        CHECK(trusted_part(*t, commutator(h_op(*t, a), h_op(*t, b))).is_zero());
    for (int m = 1; m <= 3; ++m) {
      auto h = h_op(*t, m);
      for (int c = 0; c < t->dim(); ++c)
        for (const auto& e : h.col(c)) CHECK(t->weight[e.first] == t->weight[c]);
      auto x = x_minus(*t, m);
      for (int c = 0; c < t->dim(); ++c)
        for (const auto& e : x.col(c)) CHECK(t->weight[e.first] == t->weight[c] - 2);
    }
  }
}

TEST_CASE("spectral naturality") {
  const RatU u = RatU::var();
  auto wu = make_eval<RatU>(2, u);
  const Scalar b = q.pow(3) - Scalar(2);
  auto wb = make_eval<Scalar>(2, b);
  for (int m = 1; m <= 3; ++m) {
    auto hu = h_op(*wu, m), xu = x_minus(*wu, m);
    auto hb = h_op(*wb, m), xb = x_minus(*wb, m);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        CHECK(substitute(hu.at(r, c), b) == hb.at(r, c));
        CHECK(substitute(xu.at(r, c), b) == xb.at(r, c));
      }
  }
}

TEST_CASE("q-exponential of nilpotent operators") {
  CHECK(qexp_operator(1, LinearOp<Scalar>(3, 3)) == LinearOp<Scalar>::identity(3));
  LinearOp<Scalar> x(2, 2);
  x.add(0, 1, q + Scalar(5));
  auto e = qexp_operator(1, x);
  CHECK(e == LinearOp<Scalar>::identity(2) + x);
  // order-0 coefficient of the R^+ entry on W_1 (x) W_1
  auto t = tensor_hopf(make_eval<Scalar>(1, Scalar(1)), make_eval<Scalar>(1, Scalar(1)));
  auto v = make_eval<Scalar>(1, Scalar(1));
  LinearOp<Scalar> xx(4, 4);
  auto xp = x_plus(*v, 0), xm = x_minus(*v, 0);
  for (int c = 0; c < 4; ++c) {
    auto [i, j] = t->pairs[c];
    for (const auto& [ri, a] : xp.col(i))
      for (const auto& [rj, b] : xm.col(j)) xx.add(t->index_of("v" + std::to_string(ri) + "*v" + std::to_string(rj)), c, a * b);
  }
  auto r = qexp_operator(1, xx.scaled(qi - q));
  CHECK(r.at(t->index_of("v0*v1"), t->index_of("v1*v0")) == qi - q);
  LinearOp<Scalar> y(2, 2);
  y.add(0, 1, Scalar(1));
  y.add(1, 0, Scalar(1));
  CHECK_THROWS_AS(qexp_operator(1, y), NonTerminationError);
  // x^2 / [2]'! with the primed factorial q^{p}[2]_{q^p}
  LinearOp<Scalar> n3(3, 3);
  n3.add(0, 1, Scalar(1));
  n3.add(1, 2, Scalar(1));
  CHECK(qexp_operator(-1, n3).at(0, 2) == (qi * qint(2)).inv());
  CHECK(qexp_operator(1, n3, QExpVariant::standard).at(0, 2) == qint(2).inv());
}

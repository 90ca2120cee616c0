#include "doctest.h"
#include "qaff/lweight.hpp"

using namespace qaff;

namespace {

const Scalar q = Scalar::q();
const Scalar qi = Scalar::q().inv();

RatU z() { return RatU::var(); }

// the fundamental module with l-weights Y_a, Y_{aq^2}^{-1}
ModulePtr<Scalar> fundamental(const Scalar& a) { return make_eval<Scalar>(1, a * q); }

bool has(const std::vector<QTerm<Scalar>>& qc, const LWeight<Scalar>& l, int mult = 1) {
  for (const auto& t : qc)
    if (t.lw == l) return t.mult == mult;
  return false;
}

}  // namespace

TEST_CASE("monomials") {
  const Scalar a = q.pow(3) + Scalar(2);
  auto p = psi_monomial(Sign::plus, a);
  CHECK(p.psi.eval(Scalar(0)).is_one());
  CHECK(p.weight == 0);
  CHECK(psi_monomial(Sign::minus, a).psi == p.psi.inv());
  auto y = y_monomial(a);
  CHECK(y.psi.eval(Scalar(0)) == q);
  CHECK(y.weight == 1);
  CHECK(make_lweight(y.psi).weight == 1);
  auto A = a_monomial(a);
  CHECK(A.weight == 2);
  CHECK(A.psi == RatU(q * q) * (RatU(1) - z() * RatU(a * q.pow(-2))) / (RatU(1) - z() * RatU(a * q * q)));
  CHECK_THROWS_AS(y_monomial(Scalar(0)), std::invalid_argument);
  CHECK_THROWS_AS(make_lweight(RatU(Scalar(3))), std::invalid_argument);
  CHECK(constant_lweight(-2).psi == RatU(q.pow(-2)));
}

TEST_CASE("u-deformation") {
  auto c = constant_lweight(3);
  CHECK(u_deform(c).psi == Frac<RatU>(RatU(q.pow(3))));
  const Scalar a = q + Scalar(1);
  const RatU u = RatU::var();
  auto d = u_deform(psi_monomial(Sign::plus, a));
  CHECK(d.psi == Frac<RatU>(RatU(1)) - Frac<RatU>::var() * Frac<RatU>(u * RatU(a)));
  auto w = make_eval<Scalar>(2, Scalar(1));
  auto lws = basis_lweights(*w);
  for (int i = 0; i <= 2; ++i) {
    auto du = u_deform(*lws[i]);
    RatU h1 = du.h_eigen(1);
    CHECK(h1 == u * RatU((q.pow(2 - 2 * i) + q.pow(-2 * i) - q.pow(-4) - q * q) / (q - qi)));
  }
}

TEST_CASE("cross order") {
  CHECK(cross_compare({1, -1}, {1, -1}) == CrossOrder::equal);
  // (wt v1, wt v0) against (wt v0, wt v1) in W1 (x) W1
  CHECK(cross_compare({-1, 1}, {1, -1}) == CrossOrder::p1_greater);
  CHECK(cross_compare({1, -1}, {-1, 1}) == CrossOrder::p2_greater);
  CHECK(cross_compare({0, 0}, {2, -4}) == CrossOrder::incomparable);
}

TEST_CASE("fundamental module l-weights and q-character") {
  const Scalar a = q.pow(-1) * Scalar(5);
  auto v = fundamental(a);
  auto qc = qcharacter(*v);
  REQUIRE(qc.size() == 2);
  CHECK(has(qc, y_monomial(a)));
  CHECK(has(qc, y_monomial(a * q * q).inv()));
  auto blocks = lweight_decompose(*v);
  CHECK(blocks.size() == 2);
  for (const auto& b : blocks) CHECK(b.basis.size() == 1);
}

TEST_CASE("two fundamental modules: explicit l-weight vectors") {
  const Scalar a(1), b = q.pow(3);
  auto t = tensor_hopf(fundamental(a), fundamental(b));
  const int pp = t->index_of("v0*v1"), mm = t->index_of("v1*v0");
  std::vector<Scalar> x(4), y(4);
  x[mm] = 1;
  y[pp] = b - a;
  y[mm] = a * (q - qi);
  auto lx = y_monomial(a * q * q).inv() * y_monomial(b);
  auto ly = y_monomial(a) * y_monomial(b * q * q).inv();
  for (int m = 1; m <= 3; ++m) {
    auto h = h_op(*t, m);
    auto hx = h.apply(x), hy = h.apply(y);
    for (int i = 0; i < 4; ++i) {
      CHECK(hx[i] == x[i] * lx.h_eigen(m));
      CHECK(hy[i] == y[i] * ly.h_eigen(m));
    }
  }
  auto blocks = lweight_decompose(*t, 3);
  CHECK(blocks.size() == 4);
}

TEST_CASE("coinciding l-weights give a non-semisimple block") {
  auto t = tensor_hopf(fundamental(Scalar(1)), fundamental(Scalar(1)));
  auto blocks = lweight_decompose(*t, 2);
  int found = 0;
  for (const auto& b : blocks)
    if (b.weight == 0) {
      ++found;
      CHECK(b.basis.size() == 2);
      CHECK(b.nil_order == 2);
    }
  CHECK(found == 1);
}

TEST_CASE("positive prefundamental q-character and tensor square") {
  const Scalar a = q * q;
  auto lp = make_prefund<Scalar>(Sign::plus, a, 3, 3);
  auto qc = qcharacter(*lp);
  CHECK(qc.size() == 4);
  for (int r = 0; r <= 3; ++r) CHECK(has(qc, psi_monomial(Sign::plus, a) * constant_lweight(-2 * r)));

  const RatU u = RatU::var();
  auto t = tensor_hopf(make_prefund<RatU>(Sign::plus, u, 3, 3), make_prefund<RatU>(Sign::plus, RatU(1), 3, 3));
  auto blocks = lweight_decompose(*t);
  for (int w : t->weights()) {
    int n = 0;
    for (const auto& b : blocks) n += b.weight == w;
    if (-w / 2 <= 3) CHECK(n == 1);
  }
}

TEST_CASE("q-character multiplicativity on W1 (x) W2") {
  auto v = make_eval<Scalar>(1, q.pow(2)), w = make_eval<Scalar>(2, q.pow(-3));
  auto t = tensor_hopf(v, w);
  auto blocks = lweight_decompose(*t, 4);
  std::vector<QTerm<Scalar>> from_blocks;
  for (const auto& b : blocks) {
    // independent of the product rule: eigenvalues of the Hopf action on the block
    for (int m = 1; m <= 4; ++m) {
      auto h = h_op(*t, m);
      for (int i : b.support) CHECK(h.at(i, i) == b.lw.h_eigen(m));
    }
    from_blocks.push_back({b.lw, static_cast<int>(b.basis.size())});
  }
  CHECK(same_qcharacter(from_blocks, qchar_product(qcharacter(*v), qcharacter(*w))));
  int total = 0;
  for (const auto& t2 : from_blocks) total += t2.mult;
  CHECK(total == 6);
}

TEST_CASE("block certification: (h_m - gamma_m)^r kills each block") {
  const RatU u = RatU::var();
  auto t = tensor_hopf(make_eval<RatU>(1, u), make_eval<RatU>(2, RatU(1)));
  auto blocks = lweight_decompose(*t, 3);
  for (const auto& b : blocks)
    for (int m = 1; m <= 3; ++m) {
      auto h = h_op(*t, m);
      const RatU g = b.lw.h_eigen(m);
      for (auto v : b.basis) {
        for (int r = 0; r < b.nil_order; ++r) {
          auto hv = h.apply(v);
          for (size_t i = 0; i < v.size(); ++i) hv[i] -= g * v[i];
          v = hv;
        }
        for (const auto& x : v) CHECK(x.is_zero());
      }
    }
}

TEST_CASE("constant part from the normalized l-weight") {
  auto w2 = make_eval<Scalar>(2, Scalar(1));
  auto lws = basis_lweights(*w2);
  const auto& top = *lws[0];
  CHECK(constant_part_from_normalized(top.normalized(), top) == 2);
  const Scalar b = q.pow(5);
  CHECK(constant_part_from_normalized(top.normalized() * a_monomial(b).inv().normalized(), top) == 0);
  for (int i = 0; i <= 2; ++i) CHECK(constant_part_from_normalized(lws[i]->normalized(), top) == lws[i]->weight);
  CHECK_THROWS_AS(constant_part_from_normalized(top.normalized() * psi_monomial(Sign::plus, b).psi, top),
                  std::invalid_argument);
}

TEST_CASE("reconstruction from too few eigenvalues is refused") {
  auto l = y_monomial(q) * y_monomial(q.pow(4)).inv();
  CHECK(lweight_from_h(0, l.h_tuple(6)) == l);
  CHECK_THROWS_AS(lweight_from_h(0, l.h_tuple(1)), ReconstructionError);
}

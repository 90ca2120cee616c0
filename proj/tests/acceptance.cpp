// Acceptance runner: one PASS/FAIL line per criterion.
// Exits 0 once every criterion has been evaluated; with --strict, exits 1 if any failed.

#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>

#include "oracles.hpp"
#include "qaff/suites.hpp"

using namespace qaff;

namespace {

// Wall-clock limits in seconds; 0 means no limit.
constexpr double kLimitGoldenEval = 10;
constexpr double kLimitGoldenPrefund = 30;
constexpr double kLimitRelkt = 30;
constexpr double kLimitYbe = 60;
constexpr double kLimitQt = 60;
constexpr double kLimitProperties = 120;

// Expansion order for R0 and alpha(k); depth of truncated prefundamental modules.
constexpr int kOrder = 12;
constexpr int kDepth = 8;
constexpr int kBuffer = 6;

const Scalar q = Scalar::q();
const Scalar qi = Scalar::q().inv();
const RatU u = RatU::var();
const RatU one(1);

ModulePtr<Scalar> W(int k) { return make_eval<Scalar>(k, Scalar(1)); }
ModulePtr<Scalar> Lm(int d = kDepth) { return make_prefund<Scalar>(Sign::minus, Scalar(1), d, kBuffer); }
ModulePtr<Scalar> Lp(int d = kDepth) { return make_prefund<Scalar>(Sign::plus, Scalar(1), d, kBuffer); }

SuiteOptions options() {
  SuiteOptions o;
  o.depth = kDepth;
  o.buffer = kBuffer;
  o.order = kOrder;
  return o;
}

// "" on success, otherwise the first failing check.
std::string run_suite(const std::string& name) {
  for (const auto& run : run_suites({name}, options(), 1))
    for (const auto& c : run.checks)
      if (c.status == Status::fail) return c.check + ": " + c.witness;
  return "";
}

struct Criterion {
  int id;
  std::string title;
  double limit;
  std::function<std::string()> check;
};

std::string golden_eval() {
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) {
      auto w = oracle::check_golden(stable_map_formal(W(k), W(l)), Family::eval, oracle::Shape::rational, k);
      if (!w.empty()) return "W" + std::to_string(k) + "xW" + std::to_string(l) + ": " + w;
    }
  return "";
}

std::string golden_prefund() {
  using oracle::Shape;
  struct Case {
    std::string name;
    ModulePtr<Scalar> v, w;
    Family first;
    Shape shape;
    int first_max;
  };
  const std::vector<Case> cases = {
      {"W2xL-", W(2), Lm(), Family::eval, Shape::rational, 2},
      {"L-xW2", Lm(), W(2), Family::lminus, Shape::rational, -1},
      {"L-xL-", Lm(), Lm(), Family::lminus, Shape::rational, -1},
      {"W2xL+", W(2), Lp(), Family::eval, Shape::plus_right, 2},
      {"L-xL+", Lm(), Lp(), Family::lminus, Shape::plus_right, -1},
      {"L+xW2", Lp(), W(2), Family::lplus, Shape::plus_left, -1},
      {"L+xL-", Lp(), Lm(), Family::lplus, Shape::plus_left, -1},
  };
  for (const auto& c : cases) {
    auto w = oracle::check_golden(stable_map_formal(c.v, c.w), c.first, c.shape, c.first_max);
    if (!w.empty()) return c.name + ": " + w;
  }
  auto pp = stable_map_formal(Lp(), Lp());
  if (!(trusted_part(*pp.tensor, pp.mat) == trusted_part(*pp.tensor, LinearOp<RatU>::identity(pp.tensor->dim()))))
    return "L+xL+ is not the identity";
  return "";
}

std::string norm_w1() {
  auto s = stable_map_formal(W(1), W(1));
  const Module<RatU>& t = *s.tensor;
  const int a = t.index_of("v0*v1"), b = t.index_of("v1*v0");
  auto n = stable_norm(s.mat);
  if (n.N[a] != 1 || n.N[b] != 0) return "pole orders " + std::to_string(n.N[a]) + ", " + std::to_string(n.N[b]);
  if (!n.limit(b, b).is_one() || !(n.limit(b, a) == qi - q) || !n.limit(a, a).is_zero())
    return "limit column of v0*v1 is not (q^-1 - q) v1*v0";
  if (n.invertible) return "normalized map is invertible";
  return "";
}

std::string r_zero_w1() {
  auto w1 = W(1);
  auto zd = r_zero_log(w1, w1, kOrder);
  const int a = zd.tensor->index_of("v0*v1"), b = zd.tensor->index_of("v1*v0");
  for (int m = 1; m <= kOrder; ++m) {
    const Scalar base = (q.pow(m) - q.pow(-m)) / (Scalar(m) * (q.pow(m) + q.pow(-m)));
    if (!(zd.log_eigen[a][m] == base * q.pow(-2 * m)) || !(zd.log_eigen[b][m] == base * q.pow(2 * m)))
      return "exponent mismatch at u^" + std::to_string(m);
  }
  const RFactor z = r_zero(w1, w1, kOrder);
  const RatU r = z.op.at(a, a) / z.op.at(b, b);
  const RatU expect = (one - u * RatU(q * q)) * (one - u * RatU(qi * qi)) / ((one - u) * (one - u));
  if (!(r == expect)) return "rational part " + canonical(r);
  if (!(Series<Scalar>::from_frac(expect, kOrder) == (zd.log_eigen[a] - zd.log_eigen[b]).exp()))
    return "rational part does not re-expand to the exponential";
  return "";
}

std::string full_r_w1() {
  auto w1 = W(1);
  RFactor r = full_r(w1, w1, kOrder);
  const Module<RatU>& t = *r.tensor;
  const int idx[2] = {t.index_of("v0*v1"), t.index_of("v1*v0")};
  const RatU den = u - RatU(qi * qi);
  const RatU d = RatU(qi) * (u - one) / den, off = (one - RatU(qi * qi)) / den;
  const RatU expect[2][2] = {{d, off}, {u * off, d}};
  const RatU c = r.op.at(idx[0], idx[0]) / expect[0][0];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!(r.op.at(idx[i], idx[j]) == c * expect[i][j]))
        return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + canonical(r.op.at(idx[i], idx[j]));
  if (!c.is_one()) return "overall scalar " + canonical(c);
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<Criterion> criteria = {
      {1, "stable maps of W_k (x) W_l, k,l <= 3, match the closed form", kLimitGoldenEval, golden_eval},
      {2, "stable maps with prefundamental factors at depth 8; L+ (x) L+ is the identity", kLimitGoldenPrefund,
       golden_prefund},
      {3, "normalized stable map of W1 (x) W1", 0, norm_w1},
      {4, "R+ and R- against stable maps", kLimitRelkt, [] { return run_suite("relkt"); }},
      {5, "R0 on W1 (x) W1: exponents and rational part to order 12", 0, r_zero_w1},
      {6, "normalized R on W1 (x) W1", 0, full_r_w1},
      {7, "Yang-Baxter and unitarity for W1", kLimitYbe, [] { return run_suite("ybe"); }},
      {8, "stable envelopes of T*P1", 0, [] { return run_suite("exfam"); }},
      {9, "Drinfeld intertwiners at depth 8, m <= 4", 0, [] { return run_suite("hiso"); }},
      {10, "specialized R on L(Y_aq) (x) L-_a at depth 8", kLimitQt, [] { return run_suite("qt"); }},
      {11, "alpha(k) on L+ (x) W_k, k <= 4, order 12", 0, [] { return run_suite("remce"); }},
      {12, "ratio, l-weight and structure properties", kLimitProperties,
       [] {
         for (const char* s : {"ratio", "prodlweight", "structure"})
           if (auto w = run_suite(s); !w.empty()) return w;
         return std::string();
       }},
  };
  int passed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string witness;
    try {
      witness = c.check();
    } catch (const std::exception& e) {
      witness = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (witness.empty() && c.limit > 0 && secs > c.limit)
      witness = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit) + " s";
    const bool ok = witness.empty();
    passed += ok;
    std::cout << (ok ? "PASS" : "FAIL") << " [" << std::setw(2) << c.id << "] " << c.title << " (" << std::fixed
              << std::setprecision(1) << secs << " s)";
    if (!ok) std::cout << ": " << witness;
    std::cout << std::endl;
  }
  std::cout << passed << "/" << criteria.size() << " criteria passed" << std::endl;
  return strict && passed != static_cast<int>(criteria.size()) ? 1 : 0;
}

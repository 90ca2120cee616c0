#pragma once

// Closed forms used as independent oracles by the unit tests and the acceptance runner.

#include <string>

#include "qaff/stablemap.hpp"

namespace oracle {

using namespace qaff;

enum class Shape {
  rational,    // v_i' (x) v_j -> sum u^l v'_{i+l} (x) v_{j-l} / ([l]! prod (u q^{1-2i-t} - q^{1-2j+t}))
  plus_right,  // second factor L^+: q^{2il + l(l-1)/2}/[l]!
  plus_left,   // first factor L^+: q^{(2j-i)l - l(l+1)}/[l]! (-u)^l
  identity,
};

inline RatU coefficient(Shape shape, int i, int j, int l) {
  const Scalar q = Scalar::q();
  const RatU u = RatU::var();
  if (l == 0) return RatU(1);
  switch (shape) {
    case Shape::rational: {
      RatU den(qfact(l));
      for (int t = 1; t <= l; ++t) den = den * (u * RatU(q.pow(1 - 2 * i - t)) - RatU(q.pow(1 - 2 * j + t)));
      return u.pow(l) / den;
    }
    case Shape::plus_right:
      return RatU(q.pow(2 * i * l) * Scalar::spow(l * (l - 1)) / qfact(l));
    case Shape::plus_left:
      return RatU(q.pow((2 * j - i) * l - l * (l + 1)) / qfact(l)) * (-u).pow(l);
    case Shape::identity:
      return RatU();
  }
  return RatU();
}

// Compares S(u) in the basis (x_i' (x) y_j) with the closed form on trusted columns.
// `first_max` bounds i + l by the first factor (k for W_k, -1 when unbounded).
// Returns "" on success or a description of the first mismatch.
inline std::string check_golden(const StableMap<RatU>& s, Family first, Shape shape, int first_max) {
  const Module<RatU>& t = *s.tensor;
  LinearOp<RatU> sp = s.mat;
  if (first == Family::eval || first == Family::lminus || first == Family::lplus)
    sp = rebase_left(t, s.mat, primed_factors(*t.left, first));
  for (int c = 0; c < t.dim(); ++c) {
    if (!s.computed[c]) continue;
    auto [i, j] = t.pairs[c];
    for (int r = 0; r < t.dim(); ++r) {
      if (!t.is_trusted(r)) continue;
      auto [i2, j2] = t.pairs[r];
      RatU expect;
      const int l = i2 - i;
      if (l >= 0 && j - j2 == l && l <= j && (first_max < 0 || i + l <= first_max))
        expect = shape == Shape::identity ? RatU(l == 0 ? 1 : 0) : coefficient(shape, i, j, l);
      if (canonical(sp.at(r, c)) != canonical(expect))
        return t.labels[r] + " <- " + t.labels[c] + ": got " + canonical(sp.at(r, c)) + ", expected " + canonical(expect);
    }
  }
  return "";
}

}  // namespace oracle

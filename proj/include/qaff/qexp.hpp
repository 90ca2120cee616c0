#pragma once

#include <stdexcept>

#include "qaff/frac.hpp"
#include "qaff/linop.hpp"
#include "qaff/qcomb.hpp"

namespace qaff {

enum class QExpVariant { standard, primed };

class NonTerminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// exp_{q^p}(X) = sum_r X^r / [r]'_{q^p}!  for nilpotent X.
template <class F>
LinearOp<F> qexp_operator(int p, const LinearOp<F>& x, QExpVariant variant = QExpVariant::primed) {
  if (x.rows() != x.cols()) throw std::invalid_argument("qexp_operator: non-square operator");
  const int n = x.rows();
  const Scalar base = Scalar::qpow(p);
  LinearOp<F> sum = LinearOp<F>::identity(n);
  LinearOp<F> pw = LinearOp<F>::identity(n);
  for (int r = 1; r <= n + 1; ++r) {
    pw = pw * x;
    if (pw.is_zero()) return sum;
    if (r == n + 1) break;
    Scalar f = variant == QExpVariant::primed ? qfact_primed(r, base) : qfact(r, base);
    sum = sum + pw.scaled(embed<F>(f.inv()));
  }
  throw NonTerminationError("qexp_operator: operator is not nilpotent on its carrier");
}

}  // namespace qaff

#include "qaff/qcomb.hpp"

#include <stdexcept>

namespace qaff {

Scalar qint(long m, const Scalar& base) {
  if (base.is_zero() || base.is_one() || (-base).is_one())
    throw std::domain_error("qint: base must differ from 0, 1, -1");
  if (m == 0) return Scalar();
  return (base.pow(m) - base.pow(-m)) / (base - base.inv());
}

Scalar qint(long m) { return qint(m, Scalar::q()); }

Scalar qfact(long m, const Scalar& base) {
  if (m < 0) throw std::domain_error("qfact: negative argument");
  Scalar r(1);
  for (long j = 1; j <= m; ++j) r *= qint(j, base);
  return r;
}

Scalar qfact(long m) { return qfact(m, Scalar::q()); }

Scalar qfact_primed(long r, const Scalar& base) {
  return base.pow(r * (r - 1) / 2) * qfact(r, base);
}

}  // namespace qaff

#pragma once

#include "qaff/scalar.hpp"

namespace qaff {

// [m]_b = (b^m - b^-m)/(b - b^-1); throws std::domain_error for b in {0, 1, -1}.
Scalar qint(long m, const Scalar& base);
Scalar qint(long m);  // base q

// [m]_b! = [1]_b ... [m]_b
Scalar qfact(long m, const Scalar& base);
Scalar qfact(long m);

// [r]'_b! = b^{r(r-1)/2} [r]_b!
Scalar qfact_primed(long r, const Scalar& base);

}  // namespace qaff

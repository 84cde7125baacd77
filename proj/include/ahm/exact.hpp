#pragma once

#include <cstdint>

#include "ahm/bigint.hpp"

namespace ahm::exact {

// Least integer m with e^m >= x, i.e. the ceiling of ln(x), for rational
// x > 0. A double estimate picks the candidate; certified MPFR brackets of
// e^m decide it, so boundary inputs (x just below or above a power of e)
// resolve exactly.
std::int64_t ceil_ln(const BigRat& x);

// Exact ceiling of e^q for rational q >= 0. Precision is escalated until the
// bracket [exp down, exp up] pins a single integer. Throws ArithmeticFailure
// past the resource guard instead of returning an approximate value.
BigInt ceil_exp(const BigRat& q);

// Exact ceiling of num/den * base^p for a non-integral double exponent p > 0
// and rational base > 0, certified by outward rounding. Integral p should be
// handled exactly by the caller in rational arithmetic.
BigInt ceil_scaled_pow(const BigRat& scale, const BigRat& base, double p);

}  // namespace ahm::exact

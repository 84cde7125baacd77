#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "ahm/errors.hpp"

namespace ahm {

// All rate formulas are evaluated in unbounded integer (and where division is
// involved, rational) arithmetic. GMP backs both types.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigInt ceil_q(const BigRat& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline BigInt floor_q(const BigRat& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline bool fits_u64(const BigInt& v) {
  return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64 && v <= BigInt("18446744073709551615");
}

inline std::uint64_t to_u64(const BigInt& v) {
  if (!fits_u64(v)) {
    throw ArithmeticFailure("integer out of range for a 64-bit index: " + v.get_str());
  }
  // mpz_get_ui truncates to unsigned long; on LP64 that is uint64.
  return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

// Parses a plain decimal literal ("0.9", "-1.25e-3") into the exact rational
// it denotes. Used so configuration values like beta enter the quantitative
// hypotheses exactly, not as binary doubles.
BigRat rat_from_decimal(const std::string& text);

// Exact rational value of a double (every finite double is rational).
inline BigRat rat_from_double(double x) { return BigRat(x); }

// Rational denoted by the shortest decimal that round-trips to x: the double
// 0.9 becomes 9/10, not its exact binary expansion. For values that
// originated as human-written decimals (JSON numbers).
BigRat rat_from_shortest_decimal(double x);

}  // namespace ahm

#include "ahm/exact.hpp"

#include <mpfr.h>

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace ahm {

BigRat rat_from_decimal(const std::string& text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool negative = false;
  if (i < n && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';

  std::string digits;
  long frac_len = 0;
  bool any = false;
  for (; i < n && text[i] >= '0' && text[i] <= '9'; ++i) {
    digits += text[i];
    any = true;
  }
  if (i < n && text[i] == '.') {
    ++i;
    for (; i < n && text[i] >= '0' && text[i] <= '9'; ++i) {
      digits += text[i];
      ++frac_len;
      any = true;
    }
  }
  long exp10 = 0;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
    bool eany = false;
    for (; i < n && text[i] >= '0' && text[i] <= '9'; ++i) {
      exp10 = exp10 * 10 + (text[i] - '0');
      eany = true;
      if (exp10 > 100000) throw DomainError("decimal literal exponent out of range: " + text);
    }
    if (!eany) any = false;
    if (eneg) exp10 = -exp10;
  }
  if (!any || i != n) throw DomainError("not a decimal literal: '" + text + "'");

  BigInt num(digits.empty() ? "0" : digits, 10);
  if (negative) num = -num;
  BigRat q(num);
  const long net = exp10 - frac_len;
  BigInt pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(net)));
  if (net > 0) q *= BigRat(pow10);
  if (net < 0) q /= BigRat(pow10);
  q.canonicalize();
  return q;
}

BigRat rat_from_shortest_decimal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return rat_from_decimal(std::string(buf, res.ptr));
}

}  // namespace ahm

namespace ahm::exact {
namespace {

constexpr mpfr_prec_t kStartPrec = 128;
constexpr mpfr_prec_t kMaxPrec = mpfr_prec_t(1) << 24;

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Certified bracket of e^q at the given precision: lo <= e^q <= hi.
void exp_bracket(const BigRat& q, mpfr_prec_t prec, Real& lo, Real& hi) {
  mpfr_set_q(lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_set_q(hi.get(), q.get_mpq_t(), MPFR_RNDU);
  mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
}

BigInt mpfr_ceil_to_z(mpfr_ptr x) {
  BigInt r;
  mpfr_get_z(r.get_mpz_t(), x, MPFR_RNDU);
  return r;
}

}  // namespace

BigInt ceil_exp(const BigRat& q) {
  if (q < 0) throw DomainError("ceil_exp: exponent must be nonnegative");
  if (q == 0) return 1;
  // Magnitude of e^q in bits, to size the working precision.
  const double qd = mpq_get_d(q.get_mpq_t());
  const double magnitude_bits = qd * 1.4426950408889634 + 8;
  mpfr_prec_t prec = kStartPrec + static_cast<mpfr_prec_t>(magnitude_bits);
  for (; prec <= kMaxPrec; prec *= 2) {
    Real lo(prec), hi(prec);
    exp_bracket(q, prec, lo, hi);
    const BigInt cl = mpfr_ceil_to_z(lo.get());
    const BigInt ch = mpfr_ceil_to_z(hi.get());
    if (cl == ch) return cl;
  }
  throw ArithmeticFailure("ceil_exp: could not certify the ceiling of e^" +
                          q.get_num().get_str() + "/" + q.get_den().get_str());
}

std::int64_t ceil_ln(const BigRat& x) {
  if (x <= 0) throw DomainError("ceil_ln: argument must be positive");
  if (x == 1) return 0;
  // Candidate from a log bracket; ambiguity at an integer boundary is then
  // settled by comparing e^m against x exactly.
  for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
    Real lo(prec), hi(prec);
    mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
    const BigInt cl = mpfr_ceil_to_z(lo.get());
    const BigInt ch = mpfr_ceil_to_z(hi.get());
    if (cl == ch) return static_cast<std::int64_t>(cl.get_si());
    if (ch - cl == 1) {
      // Is e^cl >= x? If so the answer is cl, otherwise ch.
      const BigInt m = cl;
      for (mpfr_prec_t p2 = prec; p2 <= kMaxPrec; p2 *= 2) {
        Real elo(p2), ehi(p2);
        BigRat mq(m);
        exp_bracket(mq, p2, elo, ehi);
        if (mpfr_cmp_q(elo.get(), x.get_mpq_t()) >= 0) return static_cast<std::int64_t>(m.get_si());
        if (mpfr_cmp_q(ehi.get(), x.get_mpq_t()) < 0) return static_cast<std::int64_t>(ch.get_si());
      }
      break;
    }
  }
  throw ArithmeticFailure("ceil_ln: could not certify the ceiling of ln(" +
                          x.get_num().get_str() + "/" + x.get_den().get_str() + ")");
}

BigInt ceil_scaled_pow(const BigRat& scale, const BigRat& base, double p) {
  if (base <= 0) throw DomainError("ceil_scaled_pow: base must be positive");
  if (scale <= 0) throw DomainError("ceil_scaled_pow: scale must be positive");
  if (!(p > 0) || !std::isfinite(p)) throw DomainError("ceil_scaled_pow: exponent must be positive and finite");
  for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
    Real blo(prec), bhi(prec), plo(prec), phi(prec);
    mpfr_set_q(blo.get(), base.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(bhi.get(), base.get_mpq_t(), MPFR_RNDU);
    // base^p is monotone in base for p > 0, so directed rounding on the base
    // carries through pow.
    mpfr_set_d(plo.get(), p, MPFR_RNDN);  // doubles are exact in mpfr
    mpfr_pow(blo.get(), blo.get(), plo.get(), MPFR_RNDD);
    mpfr_pow(bhi.get(), bhi.get(), plo.get(), MPFR_RNDU);
    Real slo(prec), shi(prec);
    mpfr_set_q(slo.get(), scale.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(shi.get(), scale.get_mpq_t(), MPFR_RNDU);
    mpfr_mul(blo.get(), blo.get(), slo.get(), MPFR_RNDD);
    mpfr_mul(bhi.get(), bhi.get(), shi.get(), MPFR_RNDU);
    const BigInt cl = mpfr_ceil_to_z(blo.get());
    const BigInt ch = mpfr_ceil_to_z(bhi.get());
    if (cl == ch) return cl;
    // A genuine integer value of scale*base^p would make the brackets
    // straddle forever; take the safe (larger) ceiling once the bracket is
    // tighter than one quarter ulp of the integer.
    if (prec >= 4096 && ch - cl == 1) return ch;
  }
  throw ArithmeticFailure("ceil_scaled_pow: could not certify the ceiling");
}

}  // namespace ahm::exact

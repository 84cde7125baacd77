#include <doctest.h>

#include <vector>

#include "ahm/errors.hpp"
#include "ahm/exact.hpp"
#include "ahm/schedules.hpp"

using namespace ahm;

TEST_CASE("canonical linear schedule values and certificates") {
  const auto s = canonical_linear_schedule(BigRat(1, 2));
  CHECK(s.alpha(0) == 1.0);
  CHECK(s.alpha(2) == 0.5);
  CHECK(s.beta(17) == 0.5);
  CHECK(s.alpha_exact(0) == BigRat(1));
  CHECK(s.alpha_exact(2) == BigRat(1, 2));
  // mpq comparisons assume canonical form, so the lambda must reduce 2/(n+2).
  CHECK(s.alpha_exact(2).get_str() == "1/2");
  CHECK(s.beta_exact(3) == BigRat(1, 2));

  REQUIRE(s.sigma1.has_value());
  CHECK((*s.sigma1)(BigInt(3)) == 6);
  CHECK(s.sigma1->nondecreasing());
  CHECK(s.sigma1->kind() == ModulusKind::RateOfConvergence);

  REQUIRE(s.sigma2.has_value());
  // sigma2(m) = max(0, ceil(e^((m+2)/2)) - 3).
  CHECK((*s.sigma2)(BigInt(0)) == 0);   // ceil(e) - 3 = 0
  CHECK((*s.sigma2)(BigInt(2)) == 5);   // ceil(e^2) - 3 = 8 - 3
  CHECK((*s.sigma2)(BigInt(4)) == 18);  // ceil(e^3) - 3 = 21 - 3

  REQUIRE(s.sigma3.has_value());
  CHECK((*s.sigma3)(BigInt(7)) == 14);
  REQUIRE(s.sigma4.has_value());
  CHECK((*s.sigma4)(BigInt(100)) == 0);  // beta is constant

  REQUIRE(s.lambda_cap.has_value());
  CHECK(*s.lambda_cap == 2);
}

TEST_CASE("lambda cap tracks beta exactly") {
  CHECK(*canonical_linear_schedule(BigRat(3, 4)).lambda_cap == 4);
  CHECK(*canonical_linear_schedule(BigRat(1, 3)).lambda_cap == 3);
  CHECK(*canonical_linear_schedule(rat_from_shortest_decimal(0.9)).lambda_cap == 10);
  CHECK_THROWS_AS(canonical_linear_schedule(BigRat(3, 2)), DomainError);
  CHECK_THROWS_AS(canonical_linear_schedule(BigRat(0)), DomainError);
}

TEST_CASE("harmonic schedule") {
  const auto s = harmonic_schedule(BigRat(1, 2));
  CHECK(s.alpha(0) == 1.0);
  CHECK(s.alpha(3) == 0.25);
  CHECK(s.alpha_exact(4) == BigRat(1, 5));
  REQUIRE(s.sigma1.has_value());
  CHECK((*s.sigma1)(BigInt(9)) == 9);
  REQUIRE(s.sigma2.has_value());
  // sigma2(n) = max(0, ceil(e^n) - 2); H_{m+1} >= ln(m+2) backs it.
  CHECK((*s.sigma2)(BigInt(0)) == 0);
  CHECK((*s.sigma2)(BigInt(2)) == 6);
  double partial = 0.0;
  for (int i = 0; i <= 6; ++i) partial += s.alpha(i);
  CHECK(partial >= 2.0);
}

TEST_CASE("modulus guards its contract") {
  const auto tab = Modulus::from_table({BigInt(4), BigInt(9)}, ModulusKind::CauchyModulus, "tab");
  CHECK(tab(BigInt(1)) == 9);
  CHECK(tab.kind() == ModulusKind::CauchyModulus);
  CHECK_THROWS_AS(tab(BigInt(2)), DomainError);   // table exhausted
  CHECK_THROWS_AS(tab(BigInt(-1)), DomainError);  // negative argument

  const Modulus negative([](const BigInt& k) -> BigInt { return k - 10; },
                         ModulusKind::RateOfConvergence, "k-10");
  CHECK_THROWS_AS(negative(BigInt(3)), DomainError);
  CHECK(negative(BigInt(10)) == 0);

  CHECK_FALSE(Modulus().valid());
  CHECK_THROWS_AS(Modulus()(BigInt(0)), CapabilityError);
}

TEST_CASE("monotonize takes the running maximum") {
  const auto m = monotonize(
      Modulus::from_table({BigInt(5), BigInt(3), BigInt(7)}, ModulusKind::RateOfConvergence, "t"));
  CHECK(m(BigInt(0)) == 5);
  CHECK(m(BigInt(1)) == 5);
  CHECK(m(BigInt(2)) == 7);
  CHECK(m.nondecreasing());
}

TEST_CASE("verify_moduli accepts the stock schedules") {
  for (const auto& s : {canonical_linear_schedule(BigRat(1, 2)), harmonic_schedule(BigRat(2, 3))}) {
    const auto rep = verify_moduli(s, 5000);
    CAPTURE(s.label);
    CHECK(rep.passed());
    CHECK(rep.hypotheses.size() == 5);  // sigma1..sigma4 + the Lambda band
    for (const auto& h : rep.hypotheses) {
      CHECK(h.applicable);
      CHECK(h.n_violated == 0);
    }
  }
}

TEST_CASE("verify_moduli reports a fraudulent sigma1 with a witness") {
  auto s = canonical_linear_schedule(BigRat(1, 2));
  s.sigma1 = Modulus([](const BigInt&) -> BigInt { return BigInt(0); },
                     ModulusKind::RateOfConvergence, "claim: alpha_n <= 1/(k+1) always", true);
  const auto rep = verify_moduli(s, 200);
  CHECK_FALSE(rep.passed());
  const auto& h = rep.hypotheses[0];
  CHECK(h.n_violated > 0);
  bool found = false;
  for (const auto& e : h.entries)
    if (e.status == CheckStatus::Violated) {
      // alpha_0 = 1 > 1/2 already refutes k = 1 at n = 0.
      CHECK(e.witness_n == 0);
      CHECK(e.lhs == 1.0);
      found = true;
      break;
    }
  CHECK(found);
}

TEST_CASE("budget shortfalls are skips, not failures") {
  const auto rep = verify_moduli(canonical_linear_schedule(BigRat(1, 2)), 10);
  CHECK(rep.passed());
  std::uint64_t skipped = 0;
  for (const auto& h : rep.hypotheses) skipped += h.n_skipped;
  CHECK(skipped > 0);
}

TEST_CASE("verify_moduli rejects out-of-range sequences") {
  auto s = canonical_linear_schedule(BigRat(1, 2));
  s.alpha = [](std::uint64_t) { return 1.5; };
  CHECK_THROWS_AS(verify_moduli(s, 10), DomainError);
}

TEST_CASE("exact exponential ceilings") {
  using exact::ceil_exp;
  using exact::ceil_ln;
  CHECK(ceil_ln(BigRat(1)) == 0);
  CHECK(ceil_ln(BigRat(2)) == 1);
  CHECK(ceil_ln(BigRat(4)) == 2);
  // Just below and just above e resolve on opposite sides of the boundary.
  CHECK(ceil_ln(BigRat(2718281, 1000000)) == 1);
  CHECK(ceil_ln(BigRat(2718282, 1000000)) == 2);
  CHECK(ceil_exp(BigRat(0)) == 1);
  CHECK(ceil_exp(BigRat(1)) == 3);
  CHECK(ceil_exp(BigRat(2)) == 8);
  CHECK(ceil_exp(BigRat(37, 2)) == 108254988);  // e^18.5 = 108254987.45...
  CHECK_THROWS_AS(ceil_ln(BigRat(0)), DomainError);
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "ahm/errors.hpp"
#include "ahm/exact.hpp"
#include "ahm/iterate.hpp"
#include "ahm/report.hpp"
#include "ahm/verify.hpp"

using namespace ahm;

namespace {

std::vector<double> vec(std::initializer_list<double> v) { return std::vector<double>(v); }

Trace real_line_trace(std::uint64_t n_max) {
  IterationProblem pb;
  pb.space = make_euclidean(1);
  pb.T = make_reflection(pb.space, vec({0.0}));
  pb.U = make_identity(pb.space);
  pb.u = vec({1.0});
  pb.x0 = vec({1.0});
  pb.p = vec({0.0});
  pb.schedule = canonical_linear_schedule(BigRat(1, 2));
  return run_hm(pb, n_max);
}

RateClaim claim(Quantity q, Modulus::Fn fn, std::string label) {
  RateClaim c;
  c.quantity = q;
  c.rate = std::move(fn);
  c.label = std::move(label);
  return c;
}

}  // namespace

TEST_CASE("quantity names round-trip") {
  for (auto q : {Quantity::DXX, Quantity::DYY, Quantity::DXY, Quantity::DTX, Quantity::DUX,
                 Quantity::DTY, Quantity::DUY, Quantity::DXP, Quantity::DYP})
    CHECK(quantity_from_name(quantity_name(q)) == q);
  CHECK(quantity_name(Quantity::DXX) == "d_xx");
  CHECK_THROWS_AS(quantity_from_name("d_zz"), DomainError);
}

TEST_CASE("check_rate verifies the linear certificate on the hand trace") {
  const auto view = TraceView::from_trace(real_line_trace(100));
  const auto rep = check_rate(
      view, claim(Quantity::DXX, [](const BigInt& k) -> BigInt { return 4 * (k + 1) - 2; },
                  "Sigma1"),
      20, 1e-12);
  CHECK(rep.passed());
  CHECK(rep.n_verified() == 21);
  CHECK(rep.n_violated() == 0);
  CHECK(rep.n_skipped() == 0);
}

TEST_CASE("zero rate is refuted at k >= 1 with witness n = 1") {
  const auto view = TraceView::from_trace(real_line_trace(50));
  const auto rep = check_rate(
      view, claim(Quantity::DXX, [](const BigInt&) -> BigInt { return BigInt(0); }, "zero"), 5,
      1e-12);
  CHECK_FALSE(rep.passed());
  // d_xx[1] = 2/3 > 1/2, so k = 1 fails at n = 1; k = 0 (bound 1) survives.
  REQUIRE(rep.entries.size() >= 2);
  CHECK(rep.entries[0].status == CheckStatus::Verified);
  const auto& e1 = rep.entries[1];
  CHECK(e1.status == CheckStatus::Violated);
  REQUIRE(e1.witness.has_value());
  CHECK(e1.witness->n == 1);
  CHECK(e1.witness->value == doctest::Approx(2.0 / 3.0));
  CHECK(e1.witness->threshold == doctest::Approx(0.5));
}

TEST_CASE("rates beyond the recorded trace are skips") {
  const auto view = TraceView::from_trace(real_line_trace(10));
  const auto rep = check_rate(
      view, claim(Quantity::DXX, [](const BigInt& k) -> BigInt { return 40 * (k + 1); }, "too-far"),
      3, 1e-12);
  CHECK(rep.passed());  // skips are not violations
  CHECK(rep.n_skipped() == 4);
  for (const auto& e : rep.entries) CHECK_FALSE(e.note.empty());
}

TEST_CASE("pointwise bound check") {
  const auto t = real_line_trace(200);
  const auto view = TraceView::from_trace(t);
  const double K = static_cast<double>(t.K);
  const auto good = check_pointwise_bound(
      view, Quantity::DXX,
      [K](std::uint64_t n) { return 4.0 * K / (static_cast<double>(n) + 2.0); }, "4K/(n+2)",
      1e-12);
  CHECK(good.passed());

  const auto bad = check_pointwise_bound(
      view, Quantity::DXX, [](std::uint64_t) { return 0.0; }, "zero bound", 1e-12);
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.entries.size() == 1);
  REQUIRE(bad.entries[0].witness.has_value());
}

TEST_CASE("qxu synthetic lemma check") {
  // Canonical pattern: a_n = 2/(n+2), c_n = 4/((n+2)(n+3)), s_0 = 2, L = 2.
  const auto a = [](std::uint64_t n) { return 2.0 / (static_cast<double>(n) + 2.0); };
  const auto c = [](std::uint64_t n) {
    const double d = static_cast<double>(n);
    return 4.0 / ((d + 2.0) * (d + 3.0));
  };
  const Modulus theta(
      [](const BigInt& m) -> BigInt {
        BigInt v = exact::ceil_exp(BigRat(m + 2, 2)) - 3;
        return std::max(v, BigInt(0));
      },
      ModulusKind::RateOfDivergence, "theta", true);
  const Modulus chi_m([](const BigInt& k) -> BigInt { return 4 * k + 2; },
                      ModulusKind::CauchyModulus, "chi", true);

  // theta at k = 0 lands at 242 and at k = 1 at 22023; k >= 2 needs ~1.2e6
  // steps, so a 30000 budget verifies two certificates and skips the rest.
  const auto rep = qxu_synthetic_check(a, c, 2.0, theta, chi_m, BigInt(2), 4, 30000, 1e-12);
  CHECK(rep.passed());
  CHECK(rep.preconditions_ok);
  CHECK(rep.n_verified() == 2);
  CHECK(rep.n_skipped() == 3);
  CHECK(rep.n_violated() == 0);

  SUBCASE("a fraudulent divergence modulus fails preconditions, not the claim") {
    const Modulus flat([](const BigInt&) -> BigInt { return BigInt(0); },
                       ModulusKind::RateOfDivergence, "theta=0", true);
    const auto bad = qxu_synthetic_check(a, c, 2.0, flat, chi_m, BigInt(2), 4, 2000, 1e-12);
    CHECK_FALSE(bad.passed());
    CHECK_FALSE(bad.preconditions_ok);
    CHECK(bad.n_violated() == 0);
    CHECK_FALSE(bad.precondition_failure.empty());
  }
  SUBCASE("mis-tagged modulus kinds are rejected up front") {
    const auto bad = qxu_synthetic_check(a, c, 2.0, chi_m, chi_m, BigInt(2), 4, 2000, 1e-12);
    CHECK_FALSE(bad.preconditions_ok);
  }
}

TEST_CASE("sabach synthetic lemma check") {
  const auto cseq = [](std::uint64_t) { return 2.0; };
  const auto rep = sabach_synthetic_check(2.0, 2, 2, 1.0, cseq, 2.0, 20000, 1e-12);
  CHECK(rep.passed());

  CHECK_THROWS_AS(sabach_synthetic_check(2.0, 1, 2, 1.0, cseq, 2.0, 100, 1e-12), DomainError);
  CHECK_THROWS_AS(sabach_synthetic_check(2.0, 3, 2, 1.0, cseq, 2.0, 100, 1e-12), DomainError);

  SUBCASE("a start above L/gamma fails the hypotheses") {
    const auto bad = sabach_synthetic_check(2.0, 2, 2, 1.0, cseq, 5.0, 100, 1e-12);
    CHECK_FALSE(bad.preconditions_ok);
  }
}

TEST_CASE("cross consistency of the parametric and closed-form rates") {
  const auto rep = cross_consistency_suite(3, 4, 20);
  CHECK(rep.passed());
  CHECK(rep.entries.size() == 9);  // K in 1..3 times Lambda in 2..4
  for (const auto& e : rep.entries) CHECK(e.status == CheckStatus::Verified);
}

TEST_CASE("bigint json stays numeric below 2^53") {
  CHECK(bigint_json(BigInt(5)).is_number());
  CHECK(bigint_json((BigInt(1) << 53) - 1).is_number());
  const auto big = bigint_json(BigInt(1) << 53);
  REQUIRE(big.is_string());
  CHECK(big.get<std::string>() == "9007199254740992");
}

TEST_CASE("verify report json shape") {
  const auto view = TraceView::from_trace(real_line_trace(30));
  const auto rep = check_rate(
      view, claim(Quantity::DYY, [](const BigInt& k) -> BigInt { return 4 * (k + 1) - 3; },
                  "Sigma2"),
      3, 1e-12);
  const auto j = rep.to_json();
  CHECK(j.at("claim") == "Sigma2");
  CHECK(j.at("passed") == true);
  CHECK(j.at("summary").at("verified") == 4);
  CHECK(j.at("entries").is_array());
  CHECK(j.at("entries").size() == 4);
}

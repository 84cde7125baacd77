#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ahm/iterate.hpp"
#include "ahm/rates.hpp"
#include "ahm/schedules.hpp"

namespace ahm {

enum class Quantity : std::uint8_t { DXX, DYY, DXY, DTX, DUX, DTY, DUY, DXP, DYP };

std::string quantity_name(Quantity q);
Quantity quantity_from_name(const std::string& s);

// Distance columns only; a claim check never needs the points. Can be built
// from an in-process Trace or re-ingested from a CSV written by the CLI.
struct TraceView {
  std::vector<double> cols[9];
  std::uint64_t n_max = 0;

  static TraceView from_trace(const Trace& t);
  const std::vector<double>& seq(Quantity q) const { return cols[static_cast<int>(q)]; }
  std::vector<double>& seq(Quantity q) { return cols[static_cast<int>(q)]; }
};

struct RateClaim {
  Quantity quantity = Quantity::DXX;
  std::function<BigInt(const BigInt&)> rate;
  std::string label;
};

struct VerifyWitness {
  std::uint64_t n = 0;
  double value = 0.0;
  double threshold = 0.0;
};

struct VerifyEntry {
  BigInt k;
  CheckStatus status = CheckStatus::Verified;
  std::optional<VerifyWitness> witness;
  std::string note;
};

struct VerifyReport {
  std::string claim;
  std::vector<VerifyEntry> entries;
  std::uint64_t k_max = 0;
  std::uint64_t budget = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  // A failed hypothesis check (e.g. a fraudulent modulus handed to a
  // synthetic lemma check) is reported here, separately from rate violations.
  bool preconditions_ok = true;
  std::string precondition_failure;

  std::uint64_t n_verified() const;
  std::uint64_t n_violated() const;
  std::uint64_t n_skipped() const;
  bool passed() const { return preconditions_ok && n_violated() == 0; }
  nlohmann::json to_json() const;
};

// For each k <= k_max: skipped_budget when rate(k) > n_max - 1, otherwise
// quantity[n] <= 1/(k+1) + tol for all n from rate(k) to the end of the
// column. tol is scaled per comparison as tol * (1 + value).
VerifyReport check_rate(const TraceView& trace, const RateClaim& claim, std::uint64_t k_max,
                        double tol = 1e-12);

// quantity[n] <= bound(n) + tol*(1+bound(n)) for every defined n.
VerifyReport check_pointwise_bound(const TraceView& trace, Quantity q,
                                   const std::function<double(std::uint64_t)>& bound,
                                   const std::string& label, double tol = 1e-12);

// Runs s_{n+1} = (1 - a_n) s_n + c_n from s_0 and certifies qxu_rate(theta,
// chi, L, k) as a rate of convergence to 0 for k <= k_max. theta and chi are
// first validated against (a) and (c) by brute force at the arguments the
// rate formula consumes; a fraudulent modulus yields a precondition failure,
// not a violation.
VerifyReport qxu_synthetic_check(const std::function<double(std::uint64_t)>& a,
                                 const std::function<double(std::uint64_t)>& c, double s0,
                                 const Modulus& theta, const Modulus& chi_m, const BigInt& L,
                                 std::uint64_t k_max, std::uint64_t budget, double tol = 1e-12);

// Runs s_{n+1} = (1 - gamma a_{n+1}) s_n + (a_n - a_{n+1}) c_n with a_n =
// N/(gamma(n+J)) and asserts s_n <= J L/(gamma(n+J)) + tol for n <= budget.
VerifyReport sabach_synthetic_check(double L, std::uint64_t N, std::uint64_t J, double gamma,
                                    const std::function<double(std::uint64_t)>& c, double s0,
                                    std::uint64_t budget, double tol = 1e-12);

// Exact integer identities tying the parametric UCW rates to the closed-form
// quadratic ones: with Delta = Sigma1 and sigma1(k) = 2k, Gamma0 = Sigma3,
// Omega = Theta, Gamma4 = Sigma4 and Gamma5 = Gamma6 = Sigma5, for every K <=
// K_max, 2 <= Lambda <= Lambda_max, k <= k_max.
VerifyReport cross_consistency_suite(std::uint64_t K_max, std::uint64_t Lambda_max,
                                     std::uint64_t k_max);

}  // namespace ahm

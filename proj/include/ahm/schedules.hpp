#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ahm/bigint.hpp"

namespace ahm {

enum class ModulusKind : std::uint8_t {
  RateOfConvergence,  // n >= f(k)  =>  a_n <= 1/(k+1)
  RateOfDivergence,   // sum_{i<=f(n)} b_i >= n
  CauchyModulus,      // n >= f(k)  =>  sum_{i=n+1}^{n+p} c_i <= 1/(k+1), all p
};

// An integer-to-integer modulus. Values are arbitrary-precision: the rate
// formulas compose these through exponentials, so fixed-width overflow is a
// real hazard, not a theoretical one.
class Modulus {
 public:
  using Fn = std::function<BigInt(const BigInt&)>;

  Modulus() = default;
  Modulus(Fn fn, ModulusKind kind, std::string label, bool nondecreasing = false)
      : fn_(std::move(fn)), kind_(kind), label_(std::move(label)), nondecreasing_(nondecreasing) {}

  static Modulus from_table(std::vector<BigInt> values, ModulusKind kind, std::string label);

  BigInt operator()(const BigInt& k) const;
  bool valid() const { return static_cast<bool>(fn_); }
  ModulusKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  bool nondecreasing() const { return nondecreasing_; }

 private:
  Fn fn_;
  ModulusKind kind_ = ModulusKind::RateOfConvergence;
  std::string label_;
  bool nondecreasing_ = false;
};

// Pointwise running maximum f'(k) = max_{j <= k} f(j). Nondecreasing by
// construction and serves the same role as f wherever one is required.
Modulus monotonize(const Modulus& m);

// Parameter sequences for the iteration together with their quantitative
// certificates. The exact (rational) forms back the certificate checks; the
// double forms drive the numerics.
struct Schedule {
  std::function<double(std::uint64_t)> alpha;
  std::function<double(std::uint64_t)> beta;
  std::function<BigRat(std::uint64_t)> alpha_exact;
  std::function<BigRat(std::uint64_t)> beta_exact;

  std::optional<Modulus> sigma1;  // alpha_n -> 0
  std::optional<Modulus> sigma2;  // sum alpha_n diverges
  std::optional<Modulus> sigma3;  // sum |alpha_{n+1} - alpha_n| converges
  std::optional<Modulus> sigma4;  // sum |beta_{n+1} - beta_n| converges
  std::optional<BigInt> lambda_cap;  // Lambda with 1/L <= beta_n <= 1 - 1/L

  std::string label;
};

// alpha_n = 2/(n+2), beta_n = beta constant. The certificates:
//   sigma1(k) = 2k, sigma2(m) = max(0, ceil(e^{(m+2)/2}) - 3),
//   sigma3(k) = 2k, sigma4 = 0, Lambda = ceil(max(1/beta, 1/(1-beta))).
Schedule canonical_linear_schedule(const BigRat& beta);

// alpha_n = 1/(n+1), beta_n = beta constant.
Schedule harmonic_schedule(const BigRat& beta);

enum class CheckStatus : std::uint8_t { Verified, Violated, SkippedBudget };

struct ModulusCheckEntry {
  BigInt k;
  CheckStatus status = CheckStatus::Verified;
  std::optional<std::uint64_t> witness_n;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct HypothesisResult {
  std::string hypothesis;
  bool applicable = true;
  std::uint64_t n_verified = 0;
  std::uint64_t n_violated = 0;
  std::uint64_t n_skipped = 0;
  // Every violation and skip is recorded; verified entries beyond a small
  // sample are only counted.
  std::vector<ModulusCheckEntry> entries;
  bool passed() const { return n_violated == 0; }
};

struct ModulusReport {
  std::vector<HypothesisResult> hypotheses;
  std::uint64_t budget = 0;
  bool passed() const {
    for (const auto& h : hypotheses)
      if (!h.passed()) return false;
    return true;
  }
};

// Brute-force check of every certificate the schedule carries against its
// own sequences: sigma1 over n in [sigma1(k), budget], sigma2 partial sums,
// sigma3/sigma4 tail sums, and the Lambda band for beta (exact rational
// comparison). k values whose modulus exceeds the budget are reported as
// skipped, not silently passed.
ModulusReport verify_moduli(const Schedule& s, std::uint64_t budget);

}  // namespace ahm

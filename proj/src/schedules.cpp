#include "ahm/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ahm/errors.hpp"
#include "ahm/exact.hpp"

namespace ahm {

Modulus Modulus::from_table(std::vector<BigInt> values, ModulusKind kind, std::string label) {
  bool nondecreasing = true;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i] > values[i + 1]) nondecreasing = false;
  auto fn = [values = std::move(values), label](const BigInt& k) -> BigInt {
    if (k < 0) throw DomainError(label + ": modulus argument must be nonnegative");
    const std::uint64_t idx = to_u64(k);
    if (idx >= values.size())
      throw DomainError(label + ": modulus table exhausted at argument " + k.get_str());
    return values[idx];
  };
  return Modulus(std::move(fn), kind, std::move(label), nondecreasing);
}

BigInt Modulus::operator()(const BigInt& k) const {
  if (!fn_) throw CapabilityError("modulus '" + label_ + "' is not defined");
  if (k < 0) throw DomainError("modulus argument must be nonnegative");
  BigInt v = fn_(k);
  if (v < 0) throw DomainError("modulus '" + label_ + "' returned a negative value");
  return v;
}

Modulus monotonize(const Modulus& m) {
  if (!m.valid()) throw CapabilityError("monotonize: empty modulus");
  auto base = m;
  auto fn = [base](const BigInt& k) -> BigInt {
    BigInt best = base(0);
    for (BigInt i = 1; i <= k; ++i) best = std::max(best, base(i));
    return best;
  };
  return Modulus(std::move(fn), m.kind(), m.label() + "^M", true);
}

namespace {

void require_open_unit(const BigRat& beta, const char* who) {
  if (!(beta > 0 && beta < 1))
    throw DomainError(std::string(who) + ": beta must lie in (0, 1), got " + beta.get_str());
}

BigInt lambda_cap_for(const BigRat& beta) {
  const BigRat inv_b = 1 / beta;
  const BigRat inv_1mb = 1 / (BigRat(1) - beta);
  return ceil_q(std::max(inv_b, inv_1mb));
}

}  // namespace

Schedule canonical_linear_schedule(const BigRat& beta) {
  require_open_unit(beta, "canonical_linear_schedule");
  Schedule s;
  const double beta_d = mpq_get_d(beta.get_mpq_t());
  s.alpha = [](std::uint64_t n) { return 2.0 / (static_cast<double>(n) + 2.0); };
  s.beta = [beta_d](std::uint64_t) { return beta_d; };
  s.alpha_exact = [](std::uint64_t n) {
    BigRat r(2, static_cast<unsigned long>(n) + 2);
    r.canonicalize();
    return r;
  };
  s.beta_exact = [beta](std::uint64_t) { return beta; };
  s.sigma1 = Modulus([](const BigInt& k) -> BigInt { return 2 * k; }, ModulusKind::RateOfConvergence,
                     "sigma1=2k", true);
  // Partial sums of 2/(i+2) reach n no later than index ceil(e^{(n+2)/2})-3:
  // sum_{i<=m} 2/(i+2) = 2(H_{m+2} - 1) >= 2(ln(m+3) - 1).
  s.sigma2 = Modulus(
      [](const BigInt& n) -> BigInt {
        BigInt v = exact::ceil_exp(BigRat(n + 2, 2)) - 3;
        return std::max(v, BigInt(0));
      },
      ModulusKind::RateOfDivergence, "sigma2=ceil(e^((n+2)/2))-3", true);
  s.sigma3 = Modulus([](const BigInt& k) -> BigInt { return 2 * k; }, ModulusKind::CauchyModulus,
                     "sigma3=2k", true);
  s.sigma4 = Modulus([](const BigInt&) { return BigInt(0); }, ModulusKind::CauchyModulus,
                     "sigma4=0", true);
  s.lambda_cap = lambda_cap_for(beta);
  s.label = "canonical_linear(beta=" + beta.get_str() + ")";
  return s;
}

Schedule harmonic_schedule(const BigRat& beta) {
  require_open_unit(beta, "harmonic_schedule");
  Schedule s;
  const double beta_d = mpq_get_d(beta.get_mpq_t());
  s.alpha = [](std::uint64_t n) { return 1.0 / (static_cast<double>(n) + 1.0); };
  s.beta = [beta_d](std::uint64_t) { return beta_d; };
  s.alpha_exact = [](std::uint64_t n) { return BigRat(1, static_cast<unsigned long>(n) + 1); };
  s.beta_exact = [beta](std::uint64_t) { return beta; };
  s.sigma1 =
      Modulus([](const BigInt& k) { return k; }, ModulusKind::RateOfConvergence, "sigma1=k", true);
  // H_{m+1} >= ln(m+2), so m = ceil(e^n) - 2 gives partial sums >= n.
  s.sigma2 = Modulus(
      [](const BigInt& n) -> BigInt {
        BigInt v = exact::ceil_exp(BigRat(n)) - 2;
        return std::max(v, BigInt(0));
      },
      ModulusKind::RateOfDivergence, "sigma2=ceil(e^n)-2", true);
  // Tail of |1/(i+2) - 1/(i+1)| past n telescopes to 1/(n+2).
  s.sigma3 =
      Modulus([](const BigInt& k) { return k; }, ModulusKind::CauchyModulus, "sigma3=k", true);
  s.sigma4 = Modulus([](const BigInt&) { return BigInt(0); }, ModulusKind::CauchyModulus,
                     "sigma4=0", true);
  s.lambda_cap = lambda_cap_for(beta);
  s.label = "harmonic(beta=" + beta.get_str() + ")";
  return s;
}

namespace {

struct EntrySink {
  HypothesisResult* h;
  static constexpr std::uint64_t kVerifiedSample = 8;

  void add(ModulusCheckEntry e) {
    switch (e.status) {
      case CheckStatus::Verified:
        h->n_verified++;
        if (h->n_verified <= kVerifiedSample) h->entries.push_back(std::move(e));
        return;
      case CheckStatus::Violated:
        h->n_violated++;
        break;
      case CheckStatus::SkippedBudget:
        h->n_skipped++;
        break;
    }
    h->entries.push_back(std::move(e));
  }
};

}  // namespace

ModulusReport verify_moduli(const Schedule& s, std::uint64_t budget) {
  if (budget < 1) throw DomainError("verify_moduli: budget must be >= 1");
  if (!s.alpha || !s.beta) throw StructuralError("verify_moduli: schedule lacks sequences");
  ModulusReport report;
  report.budget = budget;

  // Materialize the sequences once.
  std::vector<double> alpha(budget + 2), beta(budget + 2);
  for (std::uint64_t n = 0; n < budget + 2; ++n) {
    alpha[n] = s.alpha(n);
    beta[n] = s.beta(n);
    if (!(alpha[n] >= 0.0 && alpha[n] <= 1.0))
      throw DomainError("alpha[" + std::to_string(n) + "] outside [0, 1]");
    if (!(beta[n] >= 0.0 && beta[n] <= 1.0))
      throw DomainError("beta[" + std::to_string(n) + "] outside [0, 1]");
  }

  // (Q1): alpha_n <= 1/(k+1) for all n in [sigma1(k), budget].
  {
    HypothesisResult h;
    h.hypothesis = "Q1: sigma1 is a rate of convergence for alpha";
    h.applicable = s.sigma1.has_value();
    if (h.applicable) {
      EntrySink sink{&h};
      std::vector<double> suffix_max(budget + 2);
      suffix_max[budget + 1] = alpha[budget + 1];
      for (std::uint64_t n = budget + 1; n-- > 0;)
        suffix_max[n] = std::max(alpha[n], suffix_max[n + 1]);
      for (BigInt k = 0; k <= BigInt(budget); ++k) {
        const BigInt v = (*s.sigma1)(k);
        if (v > budget) {
          sink.add({k, CheckStatus::SkippedBudget, std::nullopt, 0.0, 0.0,
                    "sigma1(k) = " + v.get_str() + " beyond budget"});
          break;
        }
        const std::uint64_t start = to_u64(v);
        const double bound = 1.0 / (mpq_get_d(BigRat(k + 1).get_mpq_t()));
        if (suffix_max[start] <= bound + 1e-12) {
          sink.add({k, CheckStatus::Verified, std::nullopt, suffix_max[start], bound, ""});
        } else {
          std::uint64_t wn = start;
          while (alpha[wn] <= bound + 1e-12) ++wn;
          sink.add({k, CheckStatus::Violated, wn, alpha[wn], bound,
                    "alpha[n] > 1/(k+1) at n >= sigma1(k)"});
        }
      }
    }
    report.hypotheses.push_back(std::move(h));
  }

  // (Q2): partial sum of alpha through sigma2(n) reaches n.
  {
    HypothesisResult h;
    h.hypothesis = "Q2: sigma2 is a rate of divergence for sum(alpha)";
    h.applicable = s.sigma2.has_value();
    if (h.applicable) {
      EntrySink sink{&h};
      std::vector<double> prefix(budget + 2);  // prefix[m] = sum_{i=0}^{m-1} alpha_i
      {
        double sum = 0.0, comp = 0.0;
        for (std::uint64_t i = 0; i < budget + 1; ++i) {
          prefix[i] = sum;
          const double y = alpha[i] - comp;
          const double t = sum + y;
          comp = (t - sum) - y;
          sum = t;
        }
        prefix[budget + 1] = sum;
      }
      for (BigInt n = 0; n <= BigInt(budget); ++n) {
        const BigInt v = (*s.sigma2)(n);
        if (v > budget) {
          sink.add({n, CheckStatus::SkippedBudget, std::nullopt, 0.0, 0.0,
                    "sigma2(n) = " + v.get_str() + " beyond budget"});
          break;
        }
        const std::uint64_t m = to_u64(v);
        const double sum = prefix[m + 1];
        const double target = mpq_get_d(BigRat(n).get_mpq_t());
        if (sum + 1e-9 >= target) {
          sink.add({n, CheckStatus::Verified, m, sum, target, ""});
        } else {
          sink.add({n, CheckStatus::Violated, m, sum, target,
                    "partial sum through sigma2(n) below n"});
        }
      }
    }
    report.hypotheses.push_back(std::move(h));
  }

  // (Q3)/(Q4): tails of |delta| sums past the modulus stay under 1/(k+1).
  const auto cauchy_check = [&](const Modulus& m, const std::vector<double>& seq,
                                const std::string& name) {
    HypothesisResult h;
    h.hypothesis = name;
    EntrySink sink{&h};
    std::vector<double> delta(budget + 1);
    for (std::uint64_t n = 0; n <= budget; ++n) delta[n] = std::fabs(seq[n + 1] - seq[n]);
    // tail[n] = sum_{i=n}^{budget} delta_i; nonnegative terms make the
    // supremum over tail lengths the full remaining sum. Accumulated once,
    // right to left, so each k costs O(1).
    std::vector<double> tails(budget + 2, 0.0);
    {
      double sum = 0.0, comp = 0.0;
      for (std::uint64_t n = budget + 1; n-- > 0;) {
        const double y = delta[n] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        tails[n] = sum;
      }
    }
    for (BigInt k = 0; k <= BigInt(budget); ++k) {
      const BigInt v = m(k);
      if (v > budget) {
        sink.add({k, CheckStatus::SkippedBudget, std::nullopt, 0.0, 0.0,
                  "modulus value " + v.get_str() + " beyond budget"});
        break;
      }
      const std::uint64_t start = to_u64(v);
      const double tail = tails[start + 1];
      const double bound = 1.0 / mpq_get_d(BigRat(k + 1).get_mpq_t());
      if (tail <= bound + 1e-12) {
        sink.add({k, CheckStatus::Verified, start, tail, bound, ""});
      } else {
        sink.add({k, CheckStatus::Violated, start, tail, bound, "tail sum exceeds 1/(k+1)"});
      }
    }
    return h;
  };
  {
    const std::string name = "Q3: sigma3 is a Cauchy modulus for sum|alpha_{n+1}-alpha_n|";
    HypothesisResult h = s.sigma3 ? cauchy_check(*s.sigma3, alpha, name) : HypothesisResult{};
    h.hypothesis = name;
    h.applicable = s.sigma3.has_value();
    report.hypotheses.push_back(std::move(h));
  }
  {
    const std::string name = "Q4: sigma4 is a Cauchy modulus for sum|beta_{n+1}-beta_n|";
    HypothesisResult h = s.sigma4 ? cauchy_check(*s.sigma4, beta, name) : HypothesisResult{};
    h.hypothesis = name;
    h.applicable = s.sigma4.has_value();
    report.hypotheses.push_back(std::move(h));
  }

  // (Q5): Lambda >= 2 and 1/Lambda <= beta_n <= 1 - 1/Lambda, exactly.
  {
    HypothesisResult h;
    h.hypothesis = "Q5: 1/Lambda <= beta_n <= 1 - 1/Lambda";
    h.applicable = s.lambda_cap.has_value();
    if (h.applicable) {
      EntrySink sink{&h};
      const BigInt& L = *s.lambda_cap;
      if (L < 2) {
        sink.add({BigInt(0), CheckStatus::Violated, std::nullopt, 0.0, 0.0,
                  "Lambda = " + L.get_str() + " < 2"});
      } else if (!s.beta_exact) {
        sink.add({BigInt(0), CheckStatus::SkippedBudget, std::nullopt, 0.0, 0.0,
                  "no exact beta available"});
      } else {
        const BigRat lo(1, L);
        const BigRat hi = BigRat(1) - lo;
        bool ok = true;
        for (std::uint64_t n = 0; n <= budget && ok; ++n) {
          const BigRat b = s.beta_exact(n);
          if (b < lo || b > hi) {
            ok = false;
            sink.add({BigInt(0), CheckStatus::Violated, n, mpq_get_d(b.get_mpq_t()),
                      mpq_get_d(hi.get_mpq_t()), "beta_n outside [1/Lambda, 1-1/Lambda]"});
          }
        }
        if (ok) sink.add({BigInt(0), CheckStatus::Verified, std::nullopt, 0.0, 0.0, ""});
      }
    }
    report.hypotheses.push_back(std::move(h));
  }

  return report;
}

}  // namespace ahm

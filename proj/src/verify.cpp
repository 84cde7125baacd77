#include "ahm/verify.hpp"

#include <algorithm>
#include <cmath>

#include "ahm/errors.hpp"
#include "ahm/report.hpp"

namespace ahm {
namespace {

constexpr const char* kQuantityNames[] = {"d_xx", "d_yy", "d_xy", "d_Tx", "d_Ux",
                                          "d_Ty", "d_Uy", "d_xp", "d_yp"};
constexpr int kQuantityCount = 9;

double to_double(const BigInt& z) { return mpz_get_d(z.get_mpz_t()); }

// Compensated accumulator; the synthetic checks sum up to ~1e6 terms and the
// certificates are compared against exact integers, so naive summation error
// would eat into the tolerance.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Verified: return "verified";
    case CheckStatus::Violated: return "violated";
    case CheckStatus::SkippedBudget: return "skipped_budget";
  }
  return "unknown";
}

}  // namespace

std::string quantity_name(Quantity q) {
  const int i = static_cast<int>(q);
  if (i < 0 || i >= kQuantityCount) throw StructuralError("quantity_name: bad enum value");
  return kQuantityNames[i];
}

Quantity quantity_from_name(const std::string& s) {
  for (int i = 0; i < kQuantityCount; ++i)
    if (s == kQuantityNames[i]) return static_cast<Quantity>(i);
  throw DomainError("unknown quantity name: " + s);
}

TraceView TraceView::from_trace(const Trace& t) {
  TraceView v;
  v.n_max = t.n_max;
  v.seq(Quantity::DXX) = t.d_xx;
  v.seq(Quantity::DYY) = t.d_yy;
  v.seq(Quantity::DXY) = t.d_xy;
  v.seq(Quantity::DTX) = t.d_Tx;
  v.seq(Quantity::DUX) = t.d_Ux;
  v.seq(Quantity::DTY) = t.d_Ty;
  v.seq(Quantity::DUY) = t.d_Uy;
  v.seq(Quantity::DXP) = t.d_xp;
  v.seq(Quantity::DYP) = t.d_yp;
  return v;
}

std::uint64_t VerifyReport::n_verified() const {
  std::uint64_t n = 0;
  for (const auto& e : entries)
    if (e.status == CheckStatus::Verified) ++n;
  return n;
}

std::uint64_t VerifyReport::n_violated() const {
  std::uint64_t n = 0;
  for (const auto& e : entries)
    if (e.status == CheckStatus::Violated) ++n;
  return n;
}

std::uint64_t VerifyReport::n_skipped() const {
  std::uint64_t n = 0;
  for (const auto& e : entries)
    if (e.status == CheckStatus::SkippedBudget) ++n;
  return n;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["claim"] = claim;
  j["k_max"] = k_max;
  j["budget"] = budget;
  j["tol"] = tol;
  j["seed"] = seed;
  j["preconditions_ok"] = preconditions_ok;
  if (!preconditions_ok) j["precondition_failure"] = precondition_failure;
  j["summary"] = {{"verified", n_verified()}, {"violated", n_violated()}, {"skipped", n_skipped()}};
  j["passed"] = passed();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je;
    je["k"] = bigint_json(e.k);
    je["status"] = status_name(e.status);
    if (e.witness)
      je["witness"] = {
          {"n", e.witness->n}, {"value", e.witness->value}, {"threshold", e.witness->threshold}};
    if (!e.note.empty()) je["note"] = e.note;
    arr.push_back(std::move(je));
  }
  j["entries"] = std::move(arr);
  return j;
}

VerifyReport check_rate(const TraceView& trace, const RateClaim& claim, std::uint64_t k_max,
                        double tol) {
  if (!claim.rate) throw CapabilityError("check_rate: claim carries no rate function");
  VerifyReport rep;
  rep.claim = claim.label.empty() ? "rate for " + quantity_name(claim.quantity) : claim.label;
  rep.k_max = k_max;
  rep.budget = trace.n_max;
  rep.tol = tol;

  const auto& col = trace.seq(claim.quantity);
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    VerifyEntry e;
    e.k = k;
    const BigInt n0 = claim.rate(BigInt(k));
    if (n0 < 0) throw DomainError("check_rate: rate(" + std::to_string(k) + ") is negative");
    if (col.empty() || !fits_u64(n0) || to_u64(n0) >= col.size()) {
      e.status = CheckStatus::SkippedBudget;
      e.note = "rate(k) = " + n0.get_str() + " points past the recorded trace (" +
               std::to_string(col.size()) + " entries)";
    } else {
      const double thr = 1.0 / static_cast<double>(k + 1);
      for (std::uint64_t n = to_u64(n0); n < col.size(); ++n) {
        if (col[n] > thr + tol * (1.0 + col[n])) {
          e.status = CheckStatus::Violated;
          e.witness = VerifyWitness{n, col[n], thr};
          break;
        }
      }
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

VerifyReport check_pointwise_bound(const TraceView& trace, Quantity q,
                                   const std::function<double(std::uint64_t)>& bound,
                                   const std::string& label, double tol) {
  if (!bound) throw CapabilityError("check_pointwise_bound: no bound function");
  VerifyReport rep;
  rep.claim = label.empty() ? "pointwise bound on " + quantity_name(q) : label;
  rep.k_max = 0;
  rep.budget = trace.n_max;
  rep.tol = tol;

  const auto& col = trace.seq(q);
  VerifyEntry e;
  e.k = 0;
  e.note = "checked " + std::to_string(col.size()) + " indices";
  for (std::uint64_t n = 0; n < col.size(); ++n) {
    const double b = bound(n);
    if (col[n] > b + tol * (1.0 + b)) {
      e.status = CheckStatus::Violated;
      e.witness = VerifyWitness{n, col[n], b};
      break;
    }
  }
  rep.entries.push_back(std::move(e));
  return rep;
}

VerifyReport qxu_synthetic_check(const std::function<double(std::uint64_t)>& a,
                                 const std::function<double(std::uint64_t)>& c, double s0,
                                 const Modulus& theta, const Modulus& chi_m, const BigInt& L,
                                 std::uint64_t k_max, std::uint64_t budget, double tol) {
  if (!a || !c) throw CapabilityError("qxu_synthetic_check: missing sequence callback");
  if (L < 1) throw DomainError("qxu_synthetic_check: L must be >= 1");
  if (budget < 2) throw DomainError("qxu_synthetic_check: budget must be >= 2");

  VerifyReport rep;
  rep.claim = "qxu synthetic: s_{n+1} = (1 - a_n) s_n + c_n";
  rep.k_max = k_max;
  rep.budget = budget;
  rep.tol = tol;

  auto fail_preconditions = [&rep](std::string why) {
    rep.preconditions_ok = false;
    if (rep.precondition_failure.empty()) rep.precondition_failure = std::move(why);
  };

  if (!theta.valid() || !chi_m.valid()) {
    fail_preconditions("theta/chi modulus is unset");
    return rep;
  }
  if (theta.kind() != ModulusKind::RateOfDivergence)
    fail_preconditions("theta is not tagged as a rate of divergence");
  if (chi_m.kind() != ModulusKind::CauchyModulus)
    fail_preconditions("chi is not tagged as a Cauchy modulus");
  if (!rep.preconditions_ok) return rep;

  const std::uint64_t N = budget;  // trajectory s_0..s_N
  std::vector<double> av(N + 1), cv(N + 1), s(N + 1);
  std::vector<double> A(N + 2, 0.0), C(N + 2, 0.0);  // prefix sums, X[m] = sum_{i<m} x_i
  Kahan ka, kc;
  for (std::uint64_t n = 0; n <= N; ++n) {
    av[n] = a(n);
    cv[n] = c(n);
    if (!(av[n] >= 0.0 && av[n] <= 1.0)) {
      fail_preconditions("a_" + std::to_string(n) + " = " + std::to_string(av[n]) +
                         " lies outside [0, 1]");
      return rep;
    }
    if (!std::isfinite(cv[n])) {
      fail_preconditions("c_" + std::to_string(n) + " is not finite");
      return rep;
    }
    ka.add(av[n]);
    kc.add(cv[n]);
    A[n + 1] = ka.sum;
    C[n + 1] = kc.sum;
  }

  const double Ld = to_double(L);
  s[0] = s0;
  for (std::uint64_t n = 0; n < N; ++n) s[n + 1] = (1.0 - av[n]) * s[n] + cv[n];
  for (std::uint64_t n = 0; n <= N; ++n) {
    if (!(s[n] <= Ld * (1.0 + 1e-9) + tol)) {
      fail_preconditions("trajectory exceeds the declared bound L at n = " + std::to_string(n) +
                         " (s_n = " + std::to_string(s[n]) + ")");
      return rep;
    }
  }

  // Worst tail sum starting past n, for the chi validation:
  //   T(n) = sup_p sum_{i=n+1}^{n+p} c_i = max_{j >= n+2} C[j] - C[n+1],
  // then U(n) = max over starts >= n so a single comparison settles each k.
  std::vector<double> U(N, 0.0);
  {
    double smax = C[N + 1];
    std::vector<double> T(N, 0.0);
    for (std::uint64_t n = N; n-- > 0;) {
      smax = std::max(smax, C[n + 2]);
      T[n] = smax - C[n + 1];
    }
    double worst = T[N - 1];
    for (std::uint64_t n = N; n-- > 0;) {
      worst = std::max(worst, T[n]);
      U[n] = worst;
    }
  }
  // Suffix max of the trajectory: one comparison per k, witness scan on demand.
  std::vector<double> SM(N + 1);
  SM[N] = s[N];
  for (std::uint64_t n = N; n-- > 0;) SM[n] = std::max(s[n], SM[n + 1]);

  for (std::uint64_t k = 0; k <= k_max; ++k) {
    VerifyEntry e;
    e.k = k;
    try {
      const BigInt mk = chi_m(2 * BigInt(k) + 1);
      if (mk < 0) throw DomainError("chi returned a negative value");
      if (!fits_u64(mk) || to_u64(mk) >= N) {
        e.status = CheckStatus::SkippedBudget;
        e.note = "chi(2k+1) = " + mk.get_str() + " exceeds the budget";
        rep.entries.push_back(std::move(e));
        continue;
      }
      const std::uint64_t n0c = to_u64(mk);
      const double thrc = 1.0 / static_cast<double>(2 * k + 2);
      if (U[n0c] > thrc + tol * (1.0 + thrc)) {
        fail_preconditions("chi is not a Cauchy modulus: tail sum " + std::to_string(U[n0c]) +
                           " from n = " + std::to_string(n0c) + " exceeds 1/" +
                           std::to_string(2 * k + 2));
        e.status = CheckStatus::SkippedBudget;
        e.note = "stopped: " + rep.precondition_failure;
        rep.entries.push_back(std::move(e));
        break;
      }

      const BigInt argk = mk + 1 + ceil_ln(BigRat(2 * L * (BigInt(k) + 1)));
      const BigInt tk = theta(argk);
      if (tk < 0) throw DomainError("theta returned a negative value");
      if (!fits_u64(tk) || to_u64(tk) > N) {
        e.status = CheckStatus::SkippedBudget;
        e.note = "theta(" + argk.get_str() + ") = " + tk.get_str() + " exceeds the budget";
        rep.entries.push_back(std::move(e));
        continue;
      }
      const std::uint64_t t = to_u64(tk);
      const double target = to_double(argk);
      if (A[t + 1] < target - tol * (1.0 + target)) {
        fail_preconditions("theta is not a rate of divergence: sum_{i<=theta(m)} a_i = " +
                           std::to_string(A[t + 1]) + " < m = " + argk.get_str());
        e.status = CheckStatus::SkippedBudget;
        e.note = "stopped: " + rep.precondition_failure;
        rep.entries.push_back(std::move(e));
        break;
      }

      const std::uint64_t n0 = t + 1;  // qxu_rate(theta, chi, L, k)
      if (n0 > N) {
        e.status = CheckStatus::SkippedBudget;
        e.note = "rate " + std::to_string(n0) + " exceeds the budget";
      } else {
        const double thr = 1.0 / static_cast<double>(k + 1);
        if (SM[n0] > thr + tol * (1.0 + thr)) {
          for (std::uint64_t n = n0; n <= N; ++n) {
            if (s[n] > thr + tol * (1.0 + thr)) {
              e.status = CheckStatus::Violated;
              e.witness = VerifyWitness{n, s[n], thr};
              break;
            }
          }
        }
      }
    } catch (const DomainError& err) {
      e.status = CheckStatus::SkippedBudget;
      e.note = std::string("modulus evaluation failed: ") + err.what();
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

VerifyReport sabach_synthetic_check(double L, std::uint64_t N, std::uint64_t J, double gamma,
                                    const std::function<double(std::uint64_t)>& c, double s0,
                                    std::uint64_t budget, double tol) {
  if (!c) throw CapabilityError("sabach_synthetic_check: missing sequence callback");
  if (N < 2) throw DomainError("sabach_synthetic_check: N must be >= 2");
  if (J < N) throw DomainError("sabach_synthetic_check: J must be >= N");
  sabach_bound(L, J, gamma, 0);  // validates L, J, gamma

  VerifyReport rep;
  rep.claim = "sabach synthetic: s_n <= J L / (gamma (n + J))";
  rep.k_max = 0;
  rep.budget = budget;
  rep.tol = tol;

  const auto an = [&](std::uint64_t n) {
    return static_cast<double>(N) / (gamma * (static_cast<double>(n) + static_cast<double>(J)));
  };

  if (s0 > L / gamma + tol) {
    rep.preconditions_ok = false;
    rep.precondition_failure =
        "s_0 = " + std::to_string(s0) + " already exceeds the n = 0 bound L/gamma";
    return rep;
  }

  std::vector<double> s(budget + 1);
  s[0] = s0;
  for (std::uint64_t n = 0; n < budget; ++n) {
    const double cn = c(n);
    if (!(std::fabs(cn) <= L * (1.0 + 1e-12) + tol)) {
      rep.preconditions_ok = false;
      rep.precondition_failure =
          "|c_" + std::to_string(n) + "| = " + std::to_string(std::fabs(cn)) + " exceeds L";
      return rep;
    }
    s[n + 1] = (1.0 - gamma * an(n + 1)) * s[n] + (an(n) - an(n + 1)) * cn;
  }

  VerifyEntry e;
  e.k = 0;
  e.note = "checked n <= " + std::to_string(budget);
  for (std::uint64_t n = 0; n <= budget; ++n) {
    const double b = sabach_bound(L, J, gamma, n);
    if (s[n] > b + tol) {
      e.status = CheckStatus::Violated;
      e.witness = VerifyWitness{n, s[n], b};
      break;
    }
  }
  rep.entries.push_back(std::move(e));
  return rep;
}

VerifyReport cross_consistency_suite(std::uint64_t K_max, std::uint64_t Lambda_max,
                                     std::uint64_t k_max) {
  if (K_max < 1) throw DomainError("cross_consistency_suite: K_max must be >= 1");
  if (Lambda_max < 2) throw DomainError("cross_consistency_suite: Lambda_max must be >= 2");

  VerifyReport rep;
  rep.claim =
      "cross-consistency: P = P0, Gamma0 = Sigma3, Omega = Theta, Gamma4 = Sigma4, "
      "Gamma5 = Gamma6 = Sigma5";
  rep.k_max = k_max;
  rep.budget = 0;
  rep.tol = 0.0;

  const Modulus sigma1([](const BigInt& k) -> BigInt { return 2 * k; }, ModulusKind::RateOfConvergence,
                       "2k", true);
  for (std::uint64_t Ku = 1; Ku <= K_max; ++Ku) {
    const BigInt K(Ku);
    const Modulus delta = delta_from_sigma1(K);
    for (std::uint64_t Lu = 2; Lu <= Lambda_max; ++Lu) {
      const BigInt Lam(Lu);
      RateContext ctx;
      ctx.K = K;
      ctx.Lambda = Lam;
      ctx.sigma1 = sigma1;
      ctx.delta = delta;
      ctx.eta.form = ModulusForm::Cat0;
      ctx.eta.power = 2.0;

      VerifyEntry e;
      e.k = 0;
      e.note = "K=" + K.get_str() + " Lambda=" + Lam.get_str();
      for (std::uint64_t k = 0; k <= k_max && e.status == CheckStatus::Verified; ++k) {
        const Cat0Rates c0 = cat0_rates(K, Lam, delta, sigma1, BigInt(k));
        const UcwRates u = ucw_rates(ctx, BigInt(k), Gamma3Route::Cat0);
        const QuadraticRates q = quadratic_rates_lambda(K, Lam, BigInt(k));
        const struct {
          const char* name;
          const BigInt& lhs;
          const BigInt& rhs;
        } pairs[] = {
            {"P vs P0", u.P, c0.P0},           {"Gamma0 vs Sigma3", c0.Gamma0, q.Sigma3},
            {"Omega vs Theta", u.Omega, q.Theta}, {"Gamma4 vs Sigma4", u.Gamma4, q.Sigma4},
            {"Gamma5 vs Sigma5", u.Gamma5, q.Sigma5}, {"Gamma6 vs Sigma5", u.Gamma6, q.Sigma5},
        };
        for (const auto& pr : pairs) {
          if (pr.lhs != pr.rhs) {
            e.status = CheckStatus::Violated;
            e.k = k;
            e.note += ": " + std::string(pr.name) + " differ at k=" + std::to_string(k) + " (" +
                      pr.lhs.get_str() + " != " + pr.rhs.get_str() + ")";
            break;
          }
        }
      }
      rep.entries.push_back(std::move(e));
    }
  }
  return rep;
}

}  // namespace ahm

// Acceptance gate for the toolkit: nine end-to-end checks, one line each.
// Exits 0 only if every criterion passes, including its runtime budget.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "ahm/config.hpp"
#include "ahm/errors.hpp"
#include "ahm/exact.hpp"
#include "ahm/harness.hpp"
#include "ahm/iterate.hpp"
#include "ahm/rates.hpp"
#include "ahm/spaces.hpp"
#include "ahm/verify.hpp"

using namespace ahm;

namespace {

struct Criterion {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct BigView {
  std::string name;
  std::uint64_t K = 1;
  TraceView view;
};

struct Shared {
  std::vector<ExperimentConfig> configs;
  std::vector<BigView> big;  // 1e5-step views from criterion 3, reused by 5

  const ExperimentConfig& by_name(const std::string& n) const {
    for (const auto& c : configs)
      if (c.name == n) return c;
    throw StructuralError("acceptance: no benchmark named " + n);
  }
};

const char* kBenchmarks[] = {"real_line.json",       "euclid2_rotation.json",
                             "euclid2_projection.json", "spider_isometry.json",
                             "spider_contraction.json", "lp_scaling.json"};

std::string tmp_path(const std::string& leaf) { return std::string(AHM_TEST_TMP) + "/" + leaf; }

RateClaim claim(Quantity q, Modulus::Fn fn, std::string label) {
  RateClaim c;
  c.quantity = q;
  c.rate = std::move(fn);
  c.label = std::move(label);
  return c;
}

// 1. W1-W7 plus the uniform-convexity inequality on every stock space.
void c1_axioms(Shared&, Criterion& c) {
  const SpacePtr spaces[] = {make_euclidean(1), make_euclidean(2), make_euclidean(3),
                             make_spider(3),    make_spider(5),    make_lp(3, 2.0),
                             make_lp(3, 4.0)};
  AxiomCheckOptions ax;
  ax.n_samples = 10000;
  ax.seed = 42;
  ax.tol = 1e-9;
  for (const auto& sp : spaces) {
    const auto w = check_w_axioms(*sp, ax);
    c.require(w.passed(), sp->name() + ": a W axiom check failed");
    std::size_t w_named = 0;
    for (const auto& chk : w.checks)
      if (chk.name.size() == 2 && chk.name[0] == 'W') ++w_named;
    c.require(w_named == 7, sp->name() + ": expected checks W1 through W7");
    c.require(sp->has_modulus(), sp->name() + ": stock space should declare a modulus");
    const auto u = check_ucw_inequality(*sp, ax);
    c.require(u.passed(), sp->name() + ": uniform convexity inequality failed");
  }
}

// 2. One-step inequalities and the K-ball bounds on all six benchmarks.
void c2_trace_inequalities(Shared& sh, Criterion& c) {
  for (const auto& cfg : sh.configs) {
    const Trace t = run_variant(cfg.variant, cfg.problem(), 10000);
    const auto rep = check_trace_inequalities(t, 1e-9);
    for (const auto& r : rep.results)
      c.require(r.passed, cfg.name + ": inequality \"" + r.name + "\" violated");
  }
}

// 3. Linear certificates: pointwise 4K/(n+2), 4K/(n+3) plus the Sigma1/Sigma2
// claims through k = 200 on 1e5-step traces.
void c3_linear_rates(Shared& sh, Criterion& c) {
  for (const auto& cfg : sh.configs) {
    const Trace t = run_variant(cfg.variant, cfg.problem(), 100001);
    TraceView view = TraceView::from_trace(t);
    const double Kd = static_cast<double>(t.K);
    const BigInt K(static_cast<unsigned long>(t.K));

    const auto pw_xx = check_pointwise_bound(
        view, Quantity::DXX,
        [Kd](std::uint64_t n) { return 4.0 * Kd / (static_cast<double>(n) + 2.0); },
        "d_xx <= 4K/(n+2)", 1e-12);
    c.require(pw_xx.passed(), cfg.name + ": d_xx exceeds 4K/(n+2)");
    const auto pw_yy = check_pointwise_bound(
        view, Quantity::DYY,
        [Kd](std::uint64_t n) { return 4.0 * Kd / (static_cast<double>(n) + 3.0); },
        "d_yy <= 4K/(n+3)", 1e-12);
    c.require(pw_yy.passed(), cfg.name + ": d_yy exceeds 4K/(n+3)");

    const auto s1 = check_rate(
        view, claim(Quantity::DXX,
                    [K](const BigInt& k) -> BigInt { return linear_rates(K, k).Sigma1; }, "Sigma1"),
        200, 1e-12);
    c.require(s1.n_verified() == 201, cfg.name + ": Sigma1 not verified for every k <= 200");
    const auto s2 = check_rate(
        view, claim(Quantity::DYY,
                    [K](const BigInt& k) -> BigInt { return linear_rates(K, k).Sigma2; }, "Sigma2"),
        200, 1e-12);
    c.require(s2.n_verified() == 201, cfg.name + ": Sigma2 not verified for every k <= 200");

    sh.big.push_back(BigView{cfg.name, t.K, std::move(view)});
  }
}

// 4. Quadratic certificates on the K = 1, beta = 1/2 cat0 benchmarks: every k
// whose rate fits inside 2e5 verifies, everything else is a budget skip.
void c4_quadratic_rates(Shared& sh, Criterion& c) {
  c.require(quadratic_rates_lambda(BigInt(1), BigInt(2), BigInt(0)).Sigma5 == 16382,
            "Sigma5(0) should equal 16382");

  struct Block {
    Quantity q;
    char sel;
    const char* label;
    std::uint64_t k_max;
  };
  const Block blocks[] = {{Quantity::DUY, '3', "Sigma3", 30},
                          {Quantity::DXY, 'T', "Theta", 15},
                          {Quantity::DTY, '4', "Sigma4", 8},
                          {Quantity::DTX, '5', "Sigma5", 5},
                          {Quantity::DUX, '5', "Sigma5", 5}};
  const auto rate_of = [](char sel, const BigInt& k) -> BigInt {
    const QuadraticRates q = quadratic_rates_lambda(BigInt(1), BigInt(2), k);
    switch (sel) {
      case '3': return q.Sigma3;
      case 'T': return q.Theta;
      case '4': return q.Sigma4;
      default: return q.Sigma5;
    }
  };

  for (const char* name : {"real_line", "euclid2_rotation", "spider_isometry"}) {
    const ExperimentConfig& cfg = sh.by_name(name);
    const Trace t = run_variant(cfg.variant, cfg.problem(), 200001);
    c.require(t.K == 1, cfg.name + ": expected K = 1");
    const TraceView view = TraceView::from_trace(t);

    for (const auto& b : blocks) {
      const auto rep = check_rate(
          view, claim(b.q, [&rate_of, b](const BigInt& k) -> BigInt { return rate_of(b.sel, k); },
                      b.label),
          b.k_max, 1e-12);
      c.require(rep.n_violated() == 0,
                cfg.name + ": " + b.label + " violated for " + quantity_name(b.q));
      for (const auto& e : rep.entries) {
        const BigInt r = rate_of(b.sel, e.k);
        const bool within = fits_u64(r) && to_u64(r) <= 200000;
        c.require(e.status == (within ? CheckStatus::Verified : CheckStatus::SkippedBudget),
                  cfg.name + ": " + b.label + " entry k=" + e.k.get_str() +
                      " has the wrong status");
      }
      if (b.sel == '3')
        c.require(rep.entries.size() > 2 && rep.entries[2].status == CheckStatus::Verified,
                  cfg.name + ": Sigma3 should verify through k = 2");
      if (b.sel == '5')
        c.require(!rep.entries.empty() && rep.entries[0].status == CheckStatus::Verified,
                  cfg.name + ": Sigma5 should verify at k = 0");
    }
  }
}

// 5. Gamma1: the k = 0 certificate (22025) verifies on the K = 1 traces, and
// the formula is re-derived independently in exact arithmetic for k <= 5.
void c5_gamma1(Shared& sh, Criterion& c) {
  std::uint64_t k1_views = 0;
  for (const auto& bv : sh.big) {
    if (bv.K != 1) continue;
    ++k1_views;
    const ExperimentConfig& cfg = sh.by_name(bv.name);
    const RateContext ctx = make_rate_context(cfg.schedule, BigInt(1), cfg.space);
    c.require(gamma1(ctx, BigInt(0)) == 22025, bv.name + ": Gamma1(0) should be 22025");

    const auto rep = check_rate(
        bv.view,
        claim(Quantity::DXX, [ctx](const BigInt& k) -> BigInt { return gamma1(ctx, k); },
              "Gamma1"),
        5, 1e-12);
    c.require(rep.n_violated() == 0, bv.name + ": Gamma1 claim violated");
    c.require(!rep.entries.empty() && rep.entries[0].status == CheckStatus::Verified,
              bv.name + ": Gamma1 should verify at k = 0");
    c.require(rep.n_skipped() == 5, bv.name + ": Gamma1 should skip k = 1..5 at budget 1e5");
  }
  c.require(k1_views == 3, "expected three K = 1 benchmark views");

  // Independent re-derivation: chi(2k+1) = 2(4K(2k+2) - 1), then
  // Gamma1 = max(0, ceil(e^((m+2)/2)) - 3) + 1 at m = chi + 2 + ceil(ln 4K(k+1)).
  const Schedule s = canonical_linear_schedule(BigRat(1, 2));
  for (unsigned long Ku = 1; Ku <= 3; ++Ku) {
    const BigInt K(Ku);
    const RateContext ctx = make_rate_context(s, K);
    for (unsigned long k = 0; k <= 5; ++k) {
      const BigInt chi = 2 * (4 * K * (2 * k + 2) - 1);
      const BigInt four_k1 = 4 * K * (k + 1);
      const BigInt m = chi + 2 + exact::ceil_ln(BigRat(four_k1));
      const BigInt m2 = m + 2;
      BigRat half(m2, BigInt(2));
      half.canonicalize();
      BigInt expect = exact::ceil_exp(half) - 3;
      if (expect < 0) expect = 0;
      expect += 1;
      c.require(gamma1(ctx, BigInt(k)) == expect,
                "Gamma1 mismatch at K=" + K.get_str() + ", k=" + std::to_string(k));
    }
  }
}

// 6. Synthetic sequence lemmas: three qxu instantiations (including a == 1)
// and three sabach parameter tuples, budget 1e5, tol 1e-12.
void c6_synthetic(Shared&, Criterion& c) {
  const std::uint64_t budget = 100000;

  const Schedule cs = canonical_linear_schedule(BigRat(1, 2));
  const Modulus chi_stock([](const BigInt& m) -> BigInt { return 4 * m + 2; },
                          ModulusKind::CauchyModulus, "4k+2", true);
  const auto r1 = qxu_synthetic_check(
      [](std::uint64_t n) { return 2.0 / (static_cast<double>(n) + 2.0); },
      [](std::uint64_t n) {
        const double d = static_cast<double>(n);
        return 4.0 / ((d + 2.0) * (d + 3.0));
      },
      2.0, *cs.sigma2, chi_stock, BigInt(2), 3, budget, 1e-12);
  c.require(r1.passed() && r1.n_verified() == 2, "stock qxu check failed");

  const Modulus theta_id([](const BigInt& m) -> BigInt { return m; },
                         ModulusKind::RateOfDivergence, "theta=n", true);
  const Modulus chi_id([](const BigInt& m) -> BigInt { return m; }, ModulusKind::CauchyModulus,
                       "chi=k", true);
  const auto r2 = qxu_synthetic_check(
      [](std::uint64_t) { return 1.0; },
      [](std::uint64_t n) { return std::ldexp(1.0, -static_cast<int>(n) - 1); }, 1.0, theta_id,
      chi_id, BigInt(1), 10, budget, 1e-12);
  c.require(r2.passed() && r2.n_verified() == 11, "degenerate a == 1 qxu check failed");

  const Schedule hs = harmonic_schedule(BigRat(1, 2));
  const auto r3 = qxu_synthetic_check(
      [](std::uint64_t n) { return 1.0 / (static_cast<double>(n) + 1.0); },
      [](std::uint64_t n) {
        const double d = static_cast<double>(n);
        return 1.0 / ((d + 1.0) * (d + 2.0));
      },
      1.0, *hs.sigma2, chi_id, BigInt(1), 5, budget, 1e-12);
  c.require(r3.passed() && r3.n_verified() >= 4, "harmonic qxu check failed");

  const struct {
    double L;
    std::uint64_t N;
    std::uint64_t J;
    double gamma;
  } tuples[] = {{2.0, 2, 2, 1.0}, {1.0, 2, 3, 1.0}, {5.0, 2, 4, 0.5}};
  for (const auto& t : tuples) {
    const double L = t.L;
    const auto rep = sabach_synthetic_check(
        t.L, t.N, t.J, t.gamma, [L](std::uint64_t) { return L; }, t.L / t.gamma, budget, 1e-12);
    c.require(rep.passed(), "sabach check failed for L=" + std::to_string(t.L));
  }
}

// 7. Parametric vs closed-form rate identities, exact integer equality.
void c7_cross_consistency(Shared&, Criterion& c) {
  const auto rep = cross_consistency_suite(10, 10, 100);
  c.require(rep.entries.size() == 90, "expected 90 (K, Lambda) cells");
  c.require(rep.passed(), "a cross-consistency identity failed: " +
                              (rep.entries.empty() ? std::string() : rep.entries[0].note));
}

// 8. Specializations collapse exactly: halpern has x_{n+1} = y_n, mann has
// y_n = x_n, bit for bit over 1e3 steps.
void c8_variants(Shared& sh, Criterion& c) {
  for (const char* name : {"real_line", "euclid2_rotation"}) {
    const ExperimentConfig& cfg = sh.by_name(name);
    const IterationProblem pb = cfg.problem();

    const Trace th = run_variant(Variant::Halpern, pb, 1000);
    bool ok = true;
    for (std::uint64_t n = 0; n < 1000 && ok; ++n)
      ok = pb.space->dist(th.x[n + 1], th.y[n]) == 0.0;
    c.require(ok, cfg.name + ": halpern x_{n+1} != y_n");

    const Trace tm = run_variant(Variant::Mann, pb, 1000);
    ok = true;
    for (std::uint64_t n = 0; n < 1000 && ok; ++n)
      ok = pb.space->dist(tm.y[n], tm.x[n]) == 0.0;
    c.require(ok, cfg.name + ": mann y_n != x_n");
  }
}

bool axiom_failure_with_witness(const AxiomReport& rep) {
  for (const auto& chk : rep.checks)
    if (!chk.passed && chk.witness) return true;
  return false;
}

// 9. Negative controls: each injected defect is caught with a witness in
// process and a nonzero exit through the CLI.
void c9_injections(Shared& sh, Criterion& c) {
  const ExperimentConfig& cfg = sh.by_name("real_line");
  const struct {
    Injection inj;
    const char* flag;
  } cases[] = {{Injection::BrokenW7, "broken-w7"},
               {Injection::FakeModulus, "fake-modulus"},
               {Injection::ExpansiveMap, "expansive-map"},
               {Injection::ZeroRate, "zero-rate"}};

  for (const auto& cs : cases) {
    BatteryOptions opts;
    opts.injection = cs.inj;
    opts.budget = 2000;
    opts.k_max = 5;
    const BatteryReport rep = run_verify_battery(cfg, opts);
    c.require(!rep.passed(), std::string(cs.flag) + ": battery unexpectedly passed");

    bool witnessed = false;
    switch (cs.inj) {
      case Injection::BrokenW7: witnessed = axiom_failure_with_witness(rep.w_axioms); break;
      case Injection::FakeModulus:
        witnessed = rep.ucw_applicable && axiom_failure_with_witness(rep.ucw);
        break;
      case Injection::ExpansiveMap: witnessed = axiom_failure_with_witness(rep.nonexp_T); break;
      case Injection::ZeroRate:
        for (const auto& r : rep.claims)
          for (const auto& e : r.entries)
            if (e.status == CheckStatus::Violated && e.witness) witnessed = true;
        break;
      default: break;
    }
    c.require(witnessed, std::string(cs.flag) + ": no concrete witness recorded");

    const std::string out = tmp_path(std::string("acc9_") + cs.flag + ".out");
    const std::string cmd = std::string("\"") + AHM_CLI_PATH + "\" verify " + AHM_CONFIG_DIR +
                            "/real_line.json --inject " + cs.flag +
                            " --budget 2000 --kmax 5 >" + out + " 2>&1";
    const int status = std::system(cmd.c_str());
    const int rc = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    c.require(rc == 1, std::string(cs.flag) + ": CLI exit was " + std::to_string(rc));
  }
}

}  // namespace

int main() {
  Shared sh;
  try {
    for (const char* leaf : kBenchmarks)
      sh.configs.push_back(ExperimentConfig::load(std::string(AHM_CONFIG_DIR) + "/" + leaf));
  } catch (const Error& e) {
    std::fprintf(stderr, "acceptance: cannot load benchmark configs: %s\n", e.what());
    return 3;
  }

  struct Row {
    const char* label;
    double limit_s;  // 0 = no runtime budget
    void (*fn)(Shared&, Criterion&);
  };
  const Row rows[] = {
      {"axiom suites, 1e4 samples, tol 1e-9", 10.0, c1_axioms},
      {"trace inequalities on 6 benchmarks, slack 1e-9", 10.0, c2_trace_inequalities},
      {"linear rates to n = 1e5, claims k <= 200", 0.0, c3_linear_rates},
      {"quadratic cat0 rates within budget 2e5", 60.0, c4_quadratic_rates},
      {"Gamma1 certificate + exact re-derivation", 0.0, c5_gamma1},
      {"synthetic sequence lemmas, tol 1e-12", 0.0, c6_synthetic},
      {"cross-consistency K,Lambda <= 10, k <= 100", 5.0, c7_cross_consistency},
      {"variant specializations are exact", 0.0, c8_variants},
      {"negative controls are detected", 0.0, c9_injections},
  };

  bool all_ok = true;
  int idx = 0;
  for (const auto& row : rows) {
    ++idx;
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      row.fn(sh, c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.ok && row.limit_s > 0.0 && dt >= row.limit_s)
      c.require(false, "runtime " + std::to_string(dt) + " s exceeds the " +
                           std::to_string(row.limit_s) + " s budget");
    std::printf("[%d/9] %-48s %s  (%.2f s)\n", idx, row.label, c.ok ? "PASS" : "FAIL", dt);
    if (!c.ok) std::printf("      -> %s\n", c.detail.c_str());
    all_ok = all_ok && c.ok;
  }
  std::printf("acceptance: %s\n", all_ok ? "all 9 criteria passed" : "FAILED");
  return all_ok ? 0 : 1;
}

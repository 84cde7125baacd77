#include "ahm/harness.hpp"

#include <algorithm>
#include <cmath>

#include "ahm/errors.hpp"
#include "ahm/maps.hpp"
#include "ahm/rates.hpp"

namespace ahm {
namespace {

const char* status_str(CheckStatus s) {
  switch (s) {
    case CheckStatus::Verified: return "verified";
    case CheckStatus::Violated: return "violated";
    case CheckStatus::SkippedBudget: return "skipped_budget";
  }
  return "unknown";
}

nlohmann::json moduli_json(const ModulusReport& m) {
  nlohmann::json j;
  j["budget"] = m.budget;
  j["passed"] = m.passed();
  nlohmann::json hyps = nlohmann::json::array();
  for (const auto& h : m.hypotheses) {
    nlohmann::json jh;
    jh["hypothesis"] = h.hypothesis;
    jh["applicable"] = h.applicable;
    jh["summary"] = {
        {"verified", h.n_verified}, {"violated", h.n_violated}, {"skipped", h.n_skipped}};
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : h.entries) {
      nlohmann::json je;
      je["k"] = bigint_json(e.k);
      je["status"] = status_str(e.status);
      if (e.witness_n) {
        je["witness_n"] = *e.witness_n;
        je["lhs"] = e.lhs;
        je["rhs"] = e.rhs;
      }
      if (!e.note.empty()) je["note"] = e.note;
      entries.push_back(std::move(je));
    }
    jh["entries"] = std::move(entries);
    hyps.push_back(std::move(jh));
  }
  j["hypotheses"] = std::move(hyps);
  return j;
}

nlohmann::json inequalities_json(const InequalityReport& r) {
  nlohmann::json j;
  j["tol"] = r.tol;
  j["passed"] = r.passed();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : r.results) {
    nlohmann::json je;
    je["name"] = e.name;
    je["passed"] = e.passed;
    je["checked"] = e.checked;
    je["worst_slack"] = e.worst_slack;
    if (e.witness_n) je["witness_n"] = *e.witness_n;
    arr.push_back(std::move(je));
  }
  j["results"] = std::move(arr);
  return j;
}

BigInt effective_K(const ExperimentConfig& cfg) {
  if (cfg.K_override) return BigInt(static_cast<unsigned long>(*cfg.K_override));
  const double mp = std::max(cfg.space->dist(cfg.x0, cfg.p), cfg.space->dist(cfg.u, cfg.p));
  return BigInt(std::ceil(std::max(mp, 1.0)));
}

// Stock instantiation of the qxu lemma: a_n = 2/(n+2) with its divergence
// certificate, c_n the telescoping tail 4/((n+2)(n+3)) with chi(k) = 4k+2.
VerifyReport stock_qxu(std::uint64_t k_max, std::uint64_t budget) {
  const Schedule s = canonical_linear_schedule(BigRat(1, 2));
  const Modulus theta(*s.sigma2);
  const Modulus chi([](const BigInt& k) -> BigInt { return 4 * k + 2; }, ModulusKind::CauchyModulus,
                    "4k+2", true);
  const auto a = [](std::uint64_t n) { return 2.0 / (static_cast<double>(n) + 2.0); };
  const auto c = [](std::uint64_t n) {
    const double d = static_cast<double>(n);
    return 4.0 / ((d + 2.0) * (d + 3.0));
  };
  return qxu_synthetic_check(a, c, 2.0, theta, chi, 2, k_max, budget, 1e-12);
}

VerifyReport stock_sabach(std::uint64_t budget) {
  const auto c = [](std::uint64_t) { return 2.0; };
  return sabach_synthetic_check(2.0, 2, 2, 1.0, c, 2.0, budget, 1e-12);
}

}  // namespace

Injection injection_from_name(const std::string& s) {
  if (s == "none") return Injection::None;
  if (s == "broken-w7") return Injection::BrokenW7;
  if (s == "fake-modulus") return Injection::FakeModulus;
  if (s == "expansive-map") return Injection::ExpansiveMap;
  if (s == "zero-rate") return Injection::ZeroRate;
  throw DomainError("unknown injection: " + s);
}

std::vector<RateClaim> applicable_claims(const ExperimentConfig& cfg) {
  std::vector<RateClaim> claims;
  if (cfg.variant == Variant::Mann) return claims;  // no anchor, no Halpern-type rates

  const BigInt K = effective_K(cfg);
  const bool canonical = cfg.schedule_kind == "canonical_linear";

  if (canonical) {
    claims.push_back({Quantity::DXX,
                      [K](const BigInt& k) { return linear_rates(K, k).Sigma1; },
                      "Sigma1 for d_xx"});
    claims.push_back({Quantity::DYY,
                      [K](const BigInt& k) { return linear_rates(K, k).Sigma2; },
                      "Sigma2 for d_yy"});
  }

  const Schedule& s = cfg.schedule;
  if (s.sigma1 && s.sigma2 && s.sigma3 && s.sigma4) {
    const RateContext ctx = make_rate_context(s, K, cfg.space);
    claims.push_back(
        {Quantity::DXX, [ctx](const BigInt& k) { return gamma1(ctx, k); }, "Gamma1 for d_xx"});
    claims.push_back(
        {Quantity::DYY, [ctx](const BigInt& k) { return gamma2(ctx, k); }, "Gamma2 for d_yy"});
  }

  if (canonical && cfg.space && cfg.space->is_cat0()) {
    const BigRat beta = cfg.beta;
    const auto quad = [K, beta](const BigInt& k) { return quadratic_rates(K, beta, k); };
    claims.push_back(
        {Quantity::DUY, [quad](const BigInt& k) { return quad(k).Sigma3; }, "Sigma3 for d_Uy"});
    claims.push_back(
        {Quantity::DXY, [quad](const BigInt& k) { return quad(k).Theta; }, "Theta for d_xy"});
    claims.push_back(
        {Quantity::DTY, [quad](const BigInt& k) { return quad(k).Sigma4; }, "Sigma4 for d_Ty"});
    claims.push_back(
        {Quantity::DTX, [quad](const BigInt& k) { return quad(k).Sigma5; }, "Sigma5 for d_Tx"});
    claims.push_back(
        {Quantity::DUX, [quad](const BigInt& k) { return quad(k).Sigma5; }, "Sigma5 for d_Ux"});
  }
  return claims;
}

bool BatteryReport::passed() const {
  if (!w_axioms.passed()) return false;
  if (ucw_applicable && !ucw.passed()) return false;
  if (!nonexp_T.passed() || !nonexp_U.passed()) return false;
  if (!moduli.passed()) return false;
  if (!inequalities.passed()) return false;
  for (const auto& r : claims)
    if (!r.passed()) return false;
  for (const auto& r : synthetic)
    if (!r.passed()) return false;
  return true;
}

nlohmann::json BatteryReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["passed"] = passed();
  j["w_axioms"] = w_axioms.to_json();
  if (ucw_applicable) j["ucw"] = ucw.to_json();
  j["nonexpansive"] = {{"T", nonexp_T.to_json()}, {"U", nonexp_U.to_json()}};
  j["moduli"] = moduli_json(moduli);
  j["trace_inequalities"] = inequalities_json(inequalities);
  nlohmann::json jc = nlohmann::json::array();
  for (const auto& r : claims) jc.push_back(r.to_json());
  j["claims"] = std::move(jc);
  nlohmann::json js = nlohmann::json::array();
  for (const auto& r : synthetic) js.push_back(r.to_json());
  j["synthetic"] = std::move(js);
  return j;
}

BatteryReport run_verify_battery(const ExperimentConfig& cfg, const BatteryOptions& opts) {
  BatteryReport rep;
  rep.name = cfg.name;
  const std::uint64_t budget = opts.budget.value_or(cfg.budget);
  const std::uint64_t k_max = opts.k_max.value_or(cfg.k_max);
  const double tol = opts.tol.value_or(cfg.tol);
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);

  SpacePtr axiom_space = cfg.space;
  SpacePtr ucw_space = cfg.space;
  Map T = cfg.T;
  std::vector<RateClaim> claims = applicable_claims(cfg);

  switch (opts.injection) {
    case Injection::None:
      break;
    case Injection::BrokenW7: {
      const auto dim = cfg.space->vector_dim();
      if (!dim) throw CapabilityError("broken-comb injection requires a vector space");
      axiom_space = make_broken_comb_space(*dim);
      break;
    }
    case Injection::FakeModulus: {
      const auto dim = cfg.space->vector_dim();
      if (!dim) throw CapabilityError("fake-modulus injection requires a vector space");
      ucw_space = make_fake_modulus_space(*dim, 0.9);
      break;
    }
    case Injection::ExpansiveMap:
      T = make_expansive_scale(cfg.space, 1.5);
      break;
    case Injection::ZeroRate:
      claims.push_back({Quantity::DXX, [](const BigInt&) { return BigInt(0); },
                        "injected zero rate for d_xx"});
      break;
  }

  if (opts.run_axiom_checks) {
    AxiomCheckOptions ax;
    ax.seed = seed;
    ax.tol = tol;
    rep.w_axioms = check_w_axioms(*axiom_space, ax);
    rep.ucw_applicable = ucw_space->has_modulus();
    if (rep.ucw_applicable) rep.ucw = check_ucw_inequality(*ucw_space, ax);
    rep.nonexp_T = check_nonexpansive(T, ax);
    rep.nonexp_U = check_nonexpansive(cfg.U, ax);
  }

  rep.moduli = verify_moduli(cfg.schedule, budget);

  IterationProblem pb = cfg.problem();
  pb.T = T;
  Trace t;
  try {
    pb.validate(tol);
    t = run_variant(cfg.variant, pb, cfg.n_max);
  } catch (const Error&) {
    // An injected map can invalidate the declared fixed point or blow up the
    // iteration entirely (an expansive map diverges past double range). The
    // map check above already failed with a witness, so fall back to the
    // configured problem for the trace-level checks.
    pb = cfg.problem();
    pb.validate(tol);
    t = run_variant(cfg.variant, pb, cfg.n_max);
  }
  rep.inequalities = check_trace_inequalities(t, tol);

  const TraceView own = TraceView::from_trace(t);
  const TraceView& view = opts.imported ? *opts.imported : own;
  for (const auto& claim : claims) rep.claims.push_back(check_rate(view, claim, k_max, 1e-12));

  if (cfg.schedule_kind == "canonical_linear" && cfg.variant != Variant::Mann) {
    const double Kd = static_cast<double>(t.K);
    rep.claims.push_back(check_pointwise_bound(
        view, Quantity::DXX,
        [Kd](std::uint64_t n) { return 4.0 * Kd / (static_cast<double>(n) + 2.0); },
        "d_xx <= 4K/(n+2)", 1e-12));
    rep.claims.push_back(check_pointwise_bound(
        view, Quantity::DYY,
        [Kd](std::uint64_t n) { return 4.0 * Kd / (static_cast<double>(n) + 3.0); },
        "d_yy <= 4K/(n+3)", 1e-12));
  }

  rep.synthetic.push_back(stock_qxu(std::min<std::uint64_t>(k_max, 10), budget));
  rep.synthetic.push_back(stock_sabach(budget));
  return rep;
}

}  // namespace ahm

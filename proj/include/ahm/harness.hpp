#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ahm/config.hpp"
#include "ahm/verify.hpp"

namespace ahm {

// Deliberate defects for exercising the detectors end to end. Each one must
// surface as a violated entry (or failed precondition) and a nonzero exit.
enum class Injection : std::uint8_t {
  None,
  BrokenW7,      // convex-combination operator that ignores lambda
  FakeModulus,   // constant "modulus" no metric space satisfies
  ExpansiveMap,  // T scaled by 1.5 about the origin
  ZeroRate,      // claim d_xx with rate k -> 0
};

Injection injection_from_name(const std::string& s);

struct BatteryOptions {
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> k_max;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  Injection injection = Injection::None;
  // When set, claims are checked against this imported view instead of the
  // freshly run trace (round-trip mode).
  const TraceView* imported = nullptr;
  bool run_axiom_checks = true;
};

struct BatteryReport {
  std::string name;
  AxiomReport w_axioms;
  AxiomReport ucw;
  bool ucw_applicable = false;
  AxiomReport nonexp_T;
  AxiomReport nonexp_U;
  ModulusReport moduli;
  InequalityReport inequalities;
  std::vector<VerifyReport> claims;
  std::vector<VerifyReport> synthetic;

  bool passed() const;
  nlohmann::json to_json() const;
};

// Everything cmd_verify does, reusable in-process: run the iteration, then
// trace inequalities, every applicable rate claim, the schedule's moduli and
// the synthetic sequence lemmas.
BatteryReport run_verify_battery(const ExperimentConfig& cfg, const BatteryOptions& opts = {});

// The claims run_verify_battery would check for this configuration.
std::vector<RateClaim> applicable_claims(const ExperimentConfig& cfg);

}  // namespace ahm

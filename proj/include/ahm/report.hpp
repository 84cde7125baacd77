#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ahm/bigint.hpp"

namespace ahm {

// A concrete counterexample: which sample broke which inequality, and the two
// sides of the comparison.
struct Witness {
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  std::uint64_t sample_index = 0;
};

struct AxiomCheck {
  std::string name;
  bool passed = true;
  std::uint64_t samples_run = 0;
  std::optional<Witness> witness;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  std::uint64_t seed = 0;
  std::uint64_t n_samples = 0;
  double tol = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  nlohmann::json to_json() const;
};

nlohmann::json witness_to_json(const Witness& w);

// Numbers below 2^53 serialize as JSON numbers, anything larger as a decimal
// string; consumers never see a silently rounded integer.
nlohmann::json bigint_json(const BigInt& z);

}  // namespace ahm

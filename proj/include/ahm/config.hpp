#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ahm/iterate.hpp"

namespace ahm {

// Parsed experiment description. Parsing throws ValidationError with a
// message naming the offending key; the CLI maps that to exit code 2.
struct ExperimentConfig {
  std::string name;
  SpacePtr space;
  Map T;
  Map U;
  Point u;
  Point x0;
  Point p;
  Schedule schedule;
  std::string schedule_kind;
  BigRat beta;  // exact, reused by the rate table
  Variant variant = Variant::General;
  std::uint64_t n_max = 1000;
  std::uint64_t k_max = 100;
  std::uint64_t budget = 100000;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> K_override;
  std::optional<std::string> out;

  IterationProblem problem() const;

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_json(const nlohmann::json& j);
};

SpacePtr parse_space(const nlohmann::json& j);
Point parse_point(const nlohmann::json& j, const Space& space);
Map parse_map(const nlohmann::json& j, const SpacePtr& space);
Schedule parse_schedule(const nlohmann::json& j, BigRat* beta_out = nullptr,
                        std::string* kind_out = nullptr);

}  // namespace ahm

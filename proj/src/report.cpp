#include "ahm/report.hpp"

namespace ahm {

nlohmann::json witness_to_json(const Witness& w) {
  return {
      {"description", w.description},
      {"lhs", w.lhs},
      {"rhs", w.rhs},
      {"sample_index", w.sample_index},
  };
}

nlohmann::json bigint_json(const BigInt& z) {
  if (fits_u64(z) && z < BigInt(1) << 53) return nlohmann::json(to_u64(z));
  return nlohmann::json(z.get_str());
}

nlohmann::json AxiomReport::to_json() const {
  nlohmann::json checks_j = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj = {
        {"name", c.name},
        {"passed", c.passed},
        {"samples_run", c.samples_run},
    };
    if (c.witness) cj["witness"] = witness_to_json(*c.witness);
    checks_j.push_back(std::move(cj));
  }
  return {
      {"checks", std::move(checks_j)},
      {"seed", seed},
      {"n_samples", n_samples},
      {"tol", tol},
      {"passed", passed()},
  };
}

}  // namespace ahm

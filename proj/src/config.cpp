#include "ahm/config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <utility>
#include <vector>

#include "ahm/errors.hpp"
#include "ahm/maps.hpp"

namespace ahm {
namespace {

using nlohmann::json;

const json& need_key(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing key \"" + key + "\"");
  return *it;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": expected a string");
  return v.get<std::string>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + ": expected a number");
  return v.get<double>();
}

std::uint64_t as_nat(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ValidationError(where + ": expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

// Numbers are converted through their shortest round-tripping decimal, so a
// config saying 0.9 means 9/10 and not the nearest binary double. Strings may
// be decimals ("0.25") or fractions ("1/3").
BigRat parse_rational(const json& v, const std::string& where) {
  try {
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.find('/') != std::string::npos) {
        mpq_class q;
        if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0 || mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
          throw DomainError("malformed fraction \"" + s + "\"");
        q.canonicalize();
        return q;
      }
      return rat_from_decimal(s);
    }
    if (v.is_number()) return rat_from_shortest_decimal(v.get<double>());
  } catch (const DomainError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  throw ValidationError(where + ": expected a number or a numeric string");
}

std::vector<BigInt> parse_bigint_table(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ValidationError(where + ": expected a nonempty array");
  std::vector<BigInt> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& el = v[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (el.is_number_integer()) {
      if (el.get<std::int64_t>() < 0) throw ValidationError(at + ": negative modulus value");
      out.emplace_back(el.get<std::uint64_t>());
    } else if (el.is_string()) {
      try {
        BigInt z(el.get<std::string>(), 10);
        if (z < 0) throw ValidationError(at + ": negative modulus value");
        out.push_back(std::move(z));
      } catch (const std::invalid_argument&) {
        throw ValidationError(at + ": malformed integer string");
      }
    } else {
      throw ValidationError(at + ": expected an integer or a decimal string");
    }
  }
  return out;
}

}  // namespace

SpacePtr parse_space(const json& j) {
  const std::string kind = as_string(need_key(j, "kind", "space"), "space.kind");
  if (kind == "euclidean") {
    const auto dim = as_nat(need_key(j, "dim", "space"), "space.dim");
    if (dim < 1) throw ValidationError("space.dim: must be >= 1");
    return make_euclidean(static_cast<std::uint32_t>(dim));
  }
  if (kind == "spider") {
    const auto rays = as_nat(need_key(j, "rays", "space"), "space.rays");
    if (rays < 1) throw ValidationError("space.rays: must be >= 1");
    return make_spider(static_cast<std::uint32_t>(rays));
  }
  if (kind == "lp") {
    const auto dim = as_nat(need_key(j, "dim", "space"), "space.dim");
    if (dim < 1) throw ValidationError("space.dim: must be >= 1");
    const double p = as_double(need_key(j, "p", "space"), "space.p");
    return make_lp(static_cast<std::uint32_t>(dim), p);
  }
  throw ValidationError("space.kind: unknown kind \"" + kind + "\"");
}

Point parse_point(const json& j, const Space& space) {
  Point pt;
  if (j.is_array()) {
    std::vector<double> v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
      v.push_back(as_double(j[i], "point[" + std::to_string(i) + "]"));
    pt = std::move(v);
  } else if (j.is_object()) {
    SpiderCoord c;
    c.ray = static_cast<std::uint32_t>(as_nat(need_key(j, "ray", "point"), "point.ray"));
    c.radius = as_double(need_key(j, "radius", "point"), "point.radius");
    if (c.radius < 0.0) throw ValidationError("point.radius: must be nonnegative");
    pt = c;
  } else {
    throw ValidationError("point: expected a coordinate array or {\"ray\", \"radius\"}");
  }
  try {
    space.validate(pt);
  } catch (const Error& e) {
    throw ValidationError(std::string("point: ") + e.what());
  }
  return pt;
}

Map parse_map(const json& j, const SpacePtr& space) {
  const std::string kind = as_string(need_key(j, "kind", "map"), "map.kind");
  try {
    if (kind == "identity") return make_identity(space);
    if (kind == "constant")
      return make_constant(space, parse_point(need_key(j, "value", "map"), *space));
    if (kind == "rotation2d")
      return make_rotation2d(space, as_double(need_key(j, "angle", "map"), "map.angle"));
    if (kind == "radial_scale")
      return make_radial_scale(space, as_double(need_key(j, "lambda", "map"), "map.lambda"),
                               parse_point(need_key(j, "center", "map"), *space));
    if (kind == "ray_permutation") {
      const json& pj = need_key(j, "perm", "map");
      if (!pj.is_array()) throw ValidationError("map.perm: expected an array");
      std::vector<std::uint32_t> perm;
      perm.reserve(pj.size());
      for (std::size_t i = 0; i < pj.size(); ++i)
        perm.push_back(
            static_cast<std::uint32_t>(as_nat(pj[i], "map.perm[" + std::to_string(i) + "]")));
      return make_ray_permutation(space, std::move(perm));
    }
    if (kind == "projection_ball")
      return make_projection_ball(space, parse_point(need_key(j, "center", "map"), *space),
                                  as_double(need_key(j, "radius", "map"), "map.radius"));
    if (kind == "reflection")
      return make_reflection(space, parse_point(need_key(j, "center", "map"), *space));
    if (kind == "compose")
      return make_compose(parse_map(need_key(j, "outer", "map"), space),
                          parse_map(need_key(j, "inner", "map"), space));
    if (kind == "average")
      return make_average(parse_map(need_key(j, "inner", "map"), space),
                          as_double(need_key(j, "lambda", "map"), "map.lambda"));
    if (kind == "expansive_scale")
      return make_expansive_scale(space, as_double(need_key(j, "factor", "map"), "map.factor"));
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("map \"" + kind + "\": " + e.what());
  }
  throw ValidationError("map.kind: unknown kind \"" + kind + "\"");
}

Schedule parse_schedule(const json& j, BigRat* beta_out, std::string* kind_out) {
  const std::string kind = as_string(need_key(j, "kind", "schedule"), "schedule.kind");
  const BigRat beta = parse_rational(need_key(j, "beta", "schedule"), "schedule.beta");
  if (!(beta > 0 && beta < 1))
    throw ValidationError("schedule.beta: must lie in (0, 1), got " + beta.get_str());
  if (beta_out) *beta_out = beta;
  if (kind_out) *kind_out = kind;

  if (kind == "canonical_linear") return canonical_linear_schedule(beta);
  if (kind == "harmonic") return harmonic_schedule(beta);
  if (kind != "custom") throw ValidationError("schedule.kind: unknown kind \"" + kind + "\"");

  const json& aj = need_key(j, "alpha", "schedule");
  if (!aj.is_array() || aj.empty())
    throw ValidationError("schedule.alpha: custom schedules need a nonempty table");
  auto table = std::make_shared<std::vector<BigRat>>();
  table->reserve(aj.size());
  for (std::size_t i = 0; i < aj.size(); ++i) {
    BigRat a = parse_rational(aj[i], "schedule.alpha[" + std::to_string(i) + "]");
    if (!(a >= 0 && a <= 1))
      throw ValidationError("schedule.alpha[" + std::to_string(i) + "]: must lie in [0, 1]");
    table->push_back(std::move(a));
  }

  Schedule s;
  s.label = "custom";
  s.alpha_exact = [table](std::uint64_t n) {
    if (n >= table->size())
      throw DomainError("custom schedule: alpha table exhausted at n = " + std::to_string(n));
    return (*table)[n];
  };
  s.alpha = [table](std::uint64_t n) {
    if (n >= table->size())
      throw DomainError("custom schedule: alpha table exhausted at n = " + std::to_string(n));
    return mpq_get_d((*table)[n].get_mpq_t());
  };
  const double bd = mpq_get_d(beta.get_mpq_t());
  s.beta = [bd](std::uint64_t) { return bd; };
  s.beta_exact = [beta](std::uint64_t) { return beta; };

  struct SigmaSpec {
    const char* key;
    ModulusKind kind;
    std::optional<Modulus> Schedule::* slot;
  };
  const SigmaSpec sigmas[] = {
      {"sigma1", ModulusKind::RateOfConvergence, &Schedule::sigma1},
      {"sigma2", ModulusKind::RateOfDivergence, &Schedule::sigma2},
      {"sigma3", ModulusKind::CauchyModulus, &Schedule::sigma3},
      {"sigma4", ModulusKind::CauchyModulus, &Schedule::sigma4},
  };
  for (const auto& sp : sigmas) {
    if (!j.contains(sp.key)) continue;
    s.*(sp.slot) = Modulus::from_table(
        parse_bigint_table(j.at(sp.key), std::string("schedule.") + sp.key), sp.kind,
        std::string(sp.key) + "[table]");
  }

  if (j.contains("Lambda")) {
    const auto L = as_nat(j.at("Lambda"), "schedule.Lambda");
    if (L < 2) throw ValidationError("schedule.Lambda: must be >= 2");
    s.lambda_cap = BigInt(L);
  } else {
    s.lambda_cap = ceil_q(std::max(BigRat(BigRat(1) / beta), BigRat(BigRat(1) / (BigRat(1) - beta))));
  }
  return s;
}

IterationProblem ExperimentConfig::problem() const {
  IterationProblem pb;
  pb.space = space;
  pb.T = T;
  pb.U = U;
  pb.u = u;
  pb.x0 = x0;
  pb.p = p;
  pb.schedule = schedule;
  pb.K_override = K_override;
  return pb;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  ExperimentConfig cfg;
  cfg.name = j.contains("name") ? as_string(j.at("name"), "name") : "experiment";
  cfg.space = parse_space(need_key(j, "space", "config"));
  cfg.T = parse_map(need_key(j, "T", "config"), cfg.space);
  cfg.U = parse_map(need_key(j, "U", "config"), cfg.space);
  cfg.u = parse_point(need_key(j, "u", "config"), *cfg.space);
  cfg.x0 = parse_point(need_key(j, "x0", "config"), *cfg.space);
  cfg.p = parse_point(need_key(j, "p", "config"), *cfg.space);
  cfg.schedule = parse_schedule(need_key(j, "schedule", "config"), &cfg.beta, &cfg.schedule_kind);
  if (j.contains("variant")) {
    try {
      cfg.variant = variant_from_name(as_string(j.at("variant"), "variant"));
    } catch (const DomainError& e) {
      throw ValidationError(std::string("variant: ") + e.what());
    }
  }
  if (j.contains("n_max")) {
    cfg.n_max = as_nat(j.at("n_max"), "n_max");
    if (cfg.n_max < 1) throw ValidationError("n_max: must be >= 1");
  }
  if (j.contains("k_max")) cfg.k_max = as_nat(j.at("k_max"), "k_max");
  if (j.contains("budget")) {
    cfg.budget = as_nat(j.at("budget"), "budget");
    if (cfg.budget < 2) throw ValidationError("budget: must be >= 2");
  }
  if (j.contains("tol")) {
    cfg.tol = as_double(j.at("tol"), "tol");
    if (!(cfg.tol > 0.0)) throw ValidationError("tol: must be positive");
  }
  if (j.contains("seed")) cfg.seed = as_nat(j.at("seed"), "seed");
  if (j.contains("K")) {
    const auto K = as_nat(j.at("K"), "K");
    if (K < 1) throw ValidationError("K: must be >= 1");
    cfg.K_override = K;
  }
  if (j.contains("out")) cfg.out = as_string(j.at("out"), "out");
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace ahm

// ahm: batch front end for the alternating iteration toolkit.
//
//   ahm run    <config.json>   run the iteration, write trace CSV + constants
//   ahm rates  <config.json>   evaluate the rate table for k <= k_max
//   ahm verify <config.json>   full verification battery, exit 1 on violation
//   ahm suite  <dir>           verify every *.json config in a directory
//
// Exit codes: 0 pass, 1 violation, 2 config error, 3 runtime error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ahm/config.hpp"
#include "ahm/harness.hpp"
#include "ahm/rates.hpp"
#include "ahm/trace_io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> k_max;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--budget", o->budget, "Brute-force check budget");
  cmd->add_option("--kmax", o->k_max, "Largest k for rate tables and claims");
  cmd->add_option("--tol", o->tol, "Numerical tolerance");
  cmd->add_option("--seed", o->seed, "Sampler seed");
  cmd->add_option("--out", o->out, "Output path (default: derived from the config)");
}

ahm::ExperimentConfig load_config(const std::string& path, const CommonOpts& o) {
  ahm::ExperimentConfig cfg = ahm::ExperimentConfig::load(path);
  if (o.budget) cfg.budget = *o.budget;
  if (o.k_max) cfg.k_max = *o.k_max;
  if (o.tol) cfg.tol = *o.tol;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out = *o.out;
  cfg.problem().validate(cfg.tol);
  return cfg;
}

std::string trace_path(const ahm::ExperimentConfig& cfg) {
  return cfg.out.value_or(cfg.name + ".trace.csv");
}

std::string constants_path(const std::string& csv_path) {
  fs::path p(csv_path);
  p.replace_extension(".constants.json");
  return p.string();
}

void emit(const json& j, const std::optional<std::string>& out) {
  if (out) {
    std::ofstream f(*out, std::ios::binary);
    if (!f) throw ahm::StructuralError("cannot open for writing: " + *out);
    f << j.dump(2) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

int cmd_run(const ahm::ExperimentConfig& cfg) {
  const ahm::Trace t = ahm::run_variant(cfg.variant, cfg.problem(), cfg.n_max);
  const std::string csv = trace_path(cfg);
  ahm::write_trace_csv(t, csv);
  ahm::write_constants_json(t, cfg.name, constants_path(csv));
  std::cout << "wrote " << csv << " and " << constants_path(csv) << " (n_max=" << t.n_max
            << ", M_p=" << t.M_p << ", K=" << t.K << ")\n";
  return kExitPass;
}

int cmd_rates(const ahm::ExperimentConfig& cfg, bool force_cat0) {
  const bool is_cat0 = cfg.space->is_cat0();
  if (force_cat0 && !is_cat0) {
    std::cerr << "config error: --cat0 requested but space " << cfg.space->name()
              << " carries no CAT(0) certificate\n";
    return kExitConfig;
  }
  const bool canonical = cfg.schedule_kind == "canonical_linear";
  const ahm::BigInt K = [&cfg] {
    if (cfg.K_override) return ahm::BigInt(static_cast<unsigned long>(*cfg.K_override));
    const double mp =
        std::max(cfg.space->dist(cfg.x0, cfg.p), cfg.space->dist(cfg.u, cfg.p));
    return ahm::BigInt(std::ceil(std::max(mp, 1.0)));
  }();
  const ahm::Schedule& s = cfg.schedule;
  const bool general = s.sigma1 && s.sigma2 && s.sigma3 && s.sigma4;
  const bool quadratic = (is_cat0 || force_cat0) && s.lambda_cap;
  const bool cat0_gamma0 = quadratic && s.sigma1;

  ahm::RateContext ctx;
  if (general) ctx = ahm::make_rate_context(s, K, cfg.space);
  const ahm::Modulus delta = ahm::delta_from_sigma1(K);

  json rows = json::array();
  for (std::uint64_t k = 0; k <= cfg.k_max; ++k) {
    json row;
    row["k"] = k;
    if (canonical) {
      const auto lin = ahm::linear_rates(K, ahm::BigInt(k));
      row["Σ1"] = ahm::bigint_json(lin.Sigma1);  // Sigma1
      row["Σ2"] = ahm::bigint_json(lin.Sigma2);  // Sigma2
    }
    if (general) {
      row["Γ1"] = ahm::bigint_json(ahm::gamma1(ctx, ahm::BigInt(k)));  // Gamma1
      row["Γ2"] = ahm::bigint_json(ahm::gamma2(ctx, ahm::BigInt(k)));  // Gamma2
    }
    if (cat0_gamma0) {
      const auto c0 = ahm::cat0_rates(K, *s.lambda_cap, delta, *s.sigma1, ahm::BigInt(k));
      row["Γ0"] = ahm::bigint_json(c0.Gamma0);  // Gamma0
    }
    if (quadratic) {
      const auto q = ahm::quadratic_rates_lambda(K, *s.lambda_cap, ahm::BigInt(k));
      row["Σ3"] = ahm::bigint_json(q.Sigma3);  // Sigma3
      row["Θ"] = ahm::bigint_json(q.Theta);    // Theta
      row["Σ4"] = ahm::bigint_json(q.Sigma4);  // Sigma4
      row["Σ5"] = ahm::bigint_json(q.Sigma5);  // Sigma5
    }
    rows.push_back(std::move(row));
  }

  json out;
  out["name"] = cfg.name;
  out["schedule"] = s.label;
  out["K"] = ahm::bigint_json(K);
  if (s.lambda_cap) out["Lambda"] = ahm::bigint_json(*s.lambda_cap);
  out["k_max"] = cfg.k_max;
  out["cat0"] = is_cat0;
  out["rows"] = std::move(rows);
  emit(out, cfg.out);
  return kExitPass;
}

int cmd_verify(const ahm::ExperimentConfig& cfg, const std::string& inject,
               const std::optional<std::string>& import_csv) {
  ahm::BatteryOptions opts;
  opts.injection = ahm::injection_from_name(inject);
  ahm::TraceView imported;
  if (import_csv) {
    imported = ahm::read_trace_csv(*import_csv);
    opts.imported = &imported;
  }
  const ahm::BatteryReport rep = ahm::run_verify_battery(cfg, opts);
  emit(rep.to_json(), cfg.out);
  return rep.passed() ? kExitPass : kExitViolation;
}

int cmd_suite(const std::string& dir, const CommonOpts& o) {
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      configs.push_back(entry.path());
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    std::cerr << "config error: no *.json configs under " << dir << "\n";
    return kExitConfig;
  }

  int worst = kExitPass;
  for (const auto& path : configs) {
    ahm::ExperimentConfig cfg;
    try {
      cfg = load_config(path.string(), o);
    } catch (const ahm::Error& e) {
      std::cerr << "config error in " << path.string() << ": " << e.what() << "\n";
      return kExitConfig;
    }
    cfg.out.reset();  // one summary line per config; no per-config report files
    ahm::BatteryOptions opts;
    const ahm::BatteryReport rep = ahm::run_verify_battery(cfg, opts);
    std::cout << (rep.passed() ? "PASS" : "FAIL") << "  " << path.filename().string() << "  ("
              << cfg.name << ")\n";
    if (!rep.passed()) {
      worst = std::max(worst, kExitViolation);
      std::cout << rep.to_json().dump(2) << '\n';
    }
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alternating Halpern/Mann iteration toolkit"};
  app.require_subcommand(1);

  std::string config_path, suite_dir;
  std::string inject = "none";
  std::optional<std::string> import_csv;
  bool force_cat0 = false;
  CommonOpts opts;

  auto* run = app.add_subcommand("run", "Run the iteration and write trace CSV");
  run->add_option("config", config_path, "Experiment config JSON")->required();
  add_common(run, &opts);

  auto* rates = app.add_subcommand("rates", "Evaluate the rate table");
  rates->add_option("config", config_path, "Experiment config JSON")->required();
  rates->add_flag("--cat0", force_cat0, "Require the CAT(0) rate block");
  add_common(rates, &opts);

  auto* verify = app.add_subcommand("verify", "Run the verification battery");
  verify->add_option("config", config_path, "Experiment config JSON")->required();
  verify->add_option("--inject", inject,
                     "Deliberate defect: none|broken-w7|fake-modulus|expansive-map|zero-rate");
  verify->add_option("--import", import_csv, "Check claims against a previously written CSV");
  add_common(verify, &opts);

  auto* suite = app.add_subcommand("suite", "Verify every config in a directory");
  suite->add_option("dir", suite_dir, "Directory of config JSONs")->required();
  add_common(suite, &opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (suite->parsed()) return cmd_suite(suite_dir, opts);

    ahm::ExperimentConfig cfg;
    try {
      cfg = load_config(config_path, opts);
      if (verify->parsed()) ahm::injection_from_name(inject);  // validate the flag early
    } catch (const ahm::Error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }

    if (run->parsed()) return cmd_run(cfg);
    if (rates->parsed()) return cmd_rates(cfg, force_cat0);
    if (verify->parsed()) return cmd_verify(cfg, inject, import_csv);
    std::cerr << "config error: no subcommand\n";
    return kExitConfig;
  } catch (const ahm::Error& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

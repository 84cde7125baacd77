#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ahm/config.hpp"
#include "ahm/errors.hpp"
#include "ahm/trace_io.hpp"

using namespace ahm;
using nlohmann::json;

namespace {

std::string tmp_path(const std::string& leaf) { return std::string(AHM_TEST_TMP) + "/" + leaf; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(bool(out));
  out << text;
}

// Minimal well-formed config; tests mutate single keys from here.
json base_config() {
  return json::parse(R"({
    "name": "t",
    "space": {"kind": "euclidean", "dim": 1},
    "T": {"kind": "reflection", "center": [0.0]},
    "U": {"kind": "identity"},
    "u": [1.0],
    "x0": [1.0],
    "p": [0.0],
    "schedule": {"kind": "canonical_linear", "beta": "1/2"}
  })");
}

std::string validation_message(const json& j) {
  try {
    ExperimentConfig::from_json(j);
  } catch (const ValidationError& e) {
    return e.what();
  }
  FAIL("expected ValidationError");
  return {};
}

}  // namespace

TEST_CASE("shipped benchmark config loads and validates") {
  const auto cfg = ExperimentConfig::load(std::string(AHM_CONFIG_DIR) + "/real_line.json");
  CHECK(cfg.name == "real_line");
  CHECK(cfg.schedule_kind == "canonical_linear");
  CHECK(cfg.beta == BigRat(1, 2));
  CHECK(cfg.variant == Variant::General);
  CHECK(cfg.n_max == 10000);
  CHECK(cfg.k_max == 100);
  CHECK(cfg.space->name() == "euclidean(1)");
  CHECK_NOTHROW(cfg.problem().validate());
}

TEST_CASE("defaults cover every optional key") {
  const auto cfg = ExperimentConfig::from_json(base_config());
  CHECK(cfg.name == "t");
  CHECK(cfg.variant == Variant::General);
  CHECK(cfg.n_max == 1000);
  CHECK(cfg.k_max == 100);
  CHECK(cfg.budget == 100000);
  CHECK(cfg.tol == 1e-9);
  CHECK(cfg.seed == 42);
  CHECK_FALSE(cfg.K_override.has_value());
  CHECK_FALSE(cfg.out.has_value());
}

TEST_CASE("a decimal beta parses to the exact rational, not the nearest double") {
  auto j = base_config();
  j["schedule"]["beta"] = 0.9;  // JSON number
  auto cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.beta == BigRat(9, 10));
  CHECK(cfg.schedule.lambda_cap == BigInt(10));

  j["schedule"]["beta"] = "0.9";
  cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.beta == BigRat(9, 10));
  CHECK(cfg.schedule.lambda_cap == BigInt(10));

  j["schedule"]["beta"] = "9/10";
  cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.beta == BigRat(9, 10));
  CHECK(cfg.schedule.lambda_cap == BigInt(10));
}

TEST_CASE("beta outside the open unit interval is rejected") {
  auto j = base_config();
  j["schedule"]["beta"] = 1.5;
  const auto msg = validation_message(j);
  CHECK(msg.find("(0, 1)") != std::string::npos);
  j["schedule"]["beta"] = 0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ValidationError);
}

TEST_CASE("missing keys are reported by name") {
  auto j = base_config();
  j.erase("T");
  CHECK(validation_message(j).find("missing key \"T\"") != std::string::npos);

  j = base_config();
  j["space"].erase("dim");
  CHECK(validation_message(j).find("dim") != std::string::npos);

  j = base_config();
  j["space"]["kind"] = "hilbert";
  CHECK(validation_message(j).find("hilbert") != std::string::npos);
}

TEST_CASE("bounds on the scalar knobs") {
  auto j = base_config();
  j["n_max"] = 0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ValidationError);
  j = base_config();
  j["budget"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ValidationError);
  j = base_config();
  j["tol"] = 0.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ValidationError);
  j = base_config();
  j["K"] = 0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ValidationError);
  j = base_config();
  j["variant"] = "fastest";
  CHECK(validation_message(j).find("variant") != std::string::npos);
}

TEST_CASE("custom schedule built from tables") {
  auto j = base_config();
  j["schedule"] = json::parse(R"({
    "kind": "custom",
    "beta": "1/2",
    "alpha": ["1", "1/2", "1/3", 0.25],
    "sigma1": [0, 2, 4],
    "sigma3": [0, 2],
    "Lambda": 3
  })");
  const auto cfg = ExperimentConfig::from_json(j);
  const Schedule& s = cfg.schedule;
  CHECK(s.label == "custom");
  CHECK(s.alpha_exact(0) == BigRat(1));
  CHECK(s.alpha_exact(1) == BigRat(1, 2));
  CHECK(s.alpha_exact(3) == BigRat(1, 4));
  CHECK(s.alpha(2) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(s.alpha_exact(4), DomainError);
  CHECK(s.lambda_cap == BigInt(3));

  REQUIRE(s.sigma1.has_value());
  CHECK((*s.sigma1)(BigInt(1)) == 2);
  CHECK((*s.sigma1)(BigInt(2)) == 4);
  CHECK_THROWS_AS((*s.sigma1)(BigInt(3)), DomainError);
  CHECK(s.sigma1->kind() == ModulusKind::RateOfConvergence);
  REQUIRE(s.sigma3.has_value());
  CHECK_FALSE(s.sigma2.has_value());
  CHECK_FALSE(s.sigma4.has_value());

  SUBCASE("Lambda defaults to the cap implied by beta") {
    j["schedule"].erase("Lambda");
    const auto c2 = ExperimentConfig::from_json(j);
    CHECK(c2.schedule.lambda_cap == BigInt(2));
  }
  SUBCASE("alpha entries outside [0, 1] are rejected") {
    j["schedule"]["alpha"][1] = "3/2";
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), ValidationError);
  }
}

TEST_CASE("config loader failure modes") {
  CHECK_THROWS_AS(ExperimentConfig::load(tmp_path("does_not_exist.json")), ValidationError);
  const auto p = tmp_path("malformed.json");
  spit(p, "{\"name\": ");
  CHECK_THROWS_AS(ExperimentConfig::load(p), ValidationError);
}

TEST_CASE("trace csv writes and re-ingests bit for bit") {
  const auto cfg = ExperimentConfig::load(std::string(AHM_CONFIG_DIR) + "/real_line.json");
  const Trace t = run_hm(cfg.problem(), 10);
  const auto path = tmp_path("roundtrip.csv");
  write_trace_csv(t, path);

  const std::string text = slurp(path);
  std::vector<std::string> lines;
  {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
  }
  REQUIRE(lines.size() == 12);  // header + rows 0..10
  CHECK(lines[0] == "n,d_xx,d_yy,d_xy,d_Tx,d_Ux,d_Ty,d_Uy,d_xp,d_yp");
  // d_xx[1] is the double 1 - 1/3 (one ulp above 2/3); shortest round-trip form.
  CHECK(lines[2].rfind("1,0.6666666666666667,", 0) == 0);
  // Difference columns end before the final row; their cells go blank.
  CHECK(lines[11].rfind("10,,,", 0) == 0);
  CHECK(text.find("\r") == std::string::npos);

  const TraceView back = read_trace_csv(path);
  const TraceView direct = TraceView::from_trace(t);
  CHECK(back.n_max == 10);
  for (int q = 0; q < 9; ++q) {
    const auto& a = back.cols[q];
    const auto& b = direct.cols[q];
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("corrupted trace csv is rejected") {
  const auto p = tmp_path("corrupt.csv");
  spit(p, "n,d_xx\n0,1\n");
  CHECK_THROWS_AS(read_trace_csv(p), StructuralError);

  const std::string hdr = "n,d_xx,d_yy,d_xy,d_Tx,d_Ux,d_Ty,d_Uy,d_xp,d_yp\n";
  spit(p, hdr + "0,abc,,,,,,,,\n");
  CHECK_THROWS_AS(read_trace_csv(p), StructuralError);

  spit(p, hdr + "0,1,,,,,,,,\n2,1,,,,,,,,\n");
  CHECK_THROWS_AS(read_trace_csv(p), StructuralError);

  spit(p, hdr);
  CHECK_THROWS_AS(read_trace_csv(p), StructuralError);
}

TEST_CASE("constants sidecar records the run header") {
  const auto cfg = ExperimentConfig::load(std::string(AHM_CONFIG_DIR) + "/real_line.json");
  const Trace t = run_hm(cfg.problem(), 10);
  const auto path = tmp_path("constants.json");
  write_constants_json(t, cfg.name, path);

  const auto j = json::parse(slurp(path));
  CHECK(j.at("name") == "real_line");
  CHECK(j.at("variant") == "general");
  CHECK(j.at("schedule") == "canonical_linear(beta=1/2)");
  CHECK(j.at("M_p") == 1.0);
  CHECK(j.at("K") == 1);
  CHECK(j.at("n_max") == 10);
}

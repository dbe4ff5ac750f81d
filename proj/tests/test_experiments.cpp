#include "doctest.h"
#include "oracles.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bbm/experiments.hpp"
#include "bbm/io.hpp"
#include "bbm/rng.hpp"
#include "bbm/solver.hpp"

using namespace bbm;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("bbm_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

bool mentions(const std::vector<std::string>& lines, const std::string& needle) {
  for (const auto& l : lines)
    if (l.find(needle) != std::string::npos) return true;
  return false;
}

ExperimentConfig small_nz() {
  ExperimentConfig c;
  c.kind = "nz-convergence";
  c.seed = 5;
  c.params = {{"k_list", {16, 32}}, {"n_samples", 8}};
  return c;
}

}  // namespace

TEST_CASE("every kind has defaults and validates") {
  for (const auto& k : experiment_kinds()) {
    CHECK(default_params(k).is_object());
    ExperimentConfig c;
    c.kind = k;
    CHECK(validate(c).ok());
  }
  CHECK_THROWS_AS(default_params("nope"), ConfigError);
}

TEST_CASE("config round trip") {
  ExperimentConfig c = small_nz();
  c.threads = 3;
  c.format = "json";
  c.params["alpha"] = 0.1 + 0.2;
  json j = c.to_json();
  ExperimentConfig back = ExperimentConfig::from_json(json::parse(j.dump()));
  CHECK(back.to_json() == j);
  CHECK(back.params["alpha"].get<double>() == 0.1 + 0.2);
  CHECK(config_hash(back) == config_hash(c));
  ExperimentConfig other = c;
  other.threads = 1;
  other.out_dir = "elsewhere";
  CHECK(config_hash(other) == config_hash(c));
  other.seed = 6;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("schema errors list the offending keys") {
  json j = small_nz().to_json();
  j["params"]["alpah"] = 0.3;
  j["params"]["n_samples"] = "many";
  j["colour"] = "blue";
  try {
    ExperimentConfig::from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("alpah") != std::string::npos);
    CHECK(msg.find("n_samples") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
  }
  json k = small_nz().to_json();
  k["kind"] = "unknown-kind";
  CHECK_THROWS_AS(ExperimentConfig::from_json(k), ConfigError);
}

TEST_CASE("validate reports regime diagnostics") {
  ExperimentConfig c = small_nz();
  c.params["alpha"] = 0.2;
  c.params["s2"] = 0.1;
  Diagnostics d = validate(c);
  CHECK(d.ok());
  CHECK(mentions(d.warnings, "not Cauchy"));

  c.params["alpha"] = 0.4;
  c.params["s2"] = 0.8;
  d = validate(c);
  CHECK_FALSE(d.ok());
  CHECK(mentions(d.errors, "s2"));

  ExperimentConfig inf;
  inf.kind = "inflation";
  d = validate(inf);
  CHECK(d.ok());
  CHECK(d.info.size() + d.warnings.size() >= 7u);

  inf.params["s"] = 0.5;
  CHECK_FALSE(validate(inf).ok());
  std::ostringstream log;
  inf.out_dir = scratch("bad").string();
  CHECK(run(inf, log) == 2);
  CHECK_FALSE(std::filesystem::exists(inf.out_dir));
}

TEST_CASE("reruns are byte identical and thread independent") {
  ExperimentConfig c = small_nz();
  std::ostringstream log;
  auto d1 = scratch("det1"), d2 = scratch("det2"), d3 = scratch("det3");
  c.out_dir = d1.string();
  run(c, log);
  c.out_dir = d2.string();
  run(c, log);
  c.threads = 3;
  c.out_dir = d3.string();
  run(c, log);
  std::string a = slurp(d1 / "nz-convergence.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(d2 / "nz-convergence.csv"));
  CHECK(a == slurp(d3 / "nz-convergence.csv"));

  json m1 = json::parse(slurp(d1 / "manifest.json")), m3 = json::parse(slurp(d3 / "manifest.json"));
  CHECK(m1["config_hash"] == m3["config_hash"]);
  CHECK(m1["member_seeds"] == m3["member_seeds"]);
  for (const char* key : {"tool", "version", "kind", "master_seed", "member_seed_rule", "member_seeds", "config_hash",
                          "config", "resolved_params", "claim", "pass"})
    CHECK(m1.contains(key));
  CHECK(m1["resolved_params"]["alpha"].get<double>() == 0.4);
  CHECK(m1["member_seeds"].size() == 8u);
  CHECK(m1["member_seeds"][2].get<std::uint64_t>() == member_seed(5, 2));
  CHECK(std::filesystem::exists(d1 / "summary.txt"));
}

TEST_CASE("small runs pass end to end") {
  std::ostringstream log;
  ExperimentConfig g;
  g.kind = "gwp-energy-trace";
  g.params = {{"N", 16}, {"M_grid", 64}, {"T", 0.2}, {"dt", 2e-3}, {"probe_samples", 4}};
  g.out_dir = scratch("gwp").string();
  CHECK(run(g, log) == 0);

  ExperimentConfig inf;
  inf.kind = "inflation";
  inf.format = "json";
  inf.out_dir = scratch("inf").string();
  CHECK(run(inf, log) == 0);
  json out = json::parse(slurp(std::filesystem::path(inf.out_dir) / "inflation.json"));
  CHECK(out["rows"].size() > 0u);

  ExperimentConfig sv;
  sv.kind = "solver-validate";
  ExperimentResult r = execute(sv);
  CHECK(r.pass);
  CHECK_FALSE(r.summary_lines.empty());
}

TEST_CASE("io round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.5) == "0.5");

  SpectralField f = oracle::random_field(12, 9, 0.5);
  SpectralField g = field_from_json(json::parse(field_to_json(f).dump()));
  REQUIRE(g.M() == f.M());
  for (int n = 0; n <= f.M(); ++n) CHECK(g[n] == f[n]);

  SolverConfig sc;
  sc.dt = 3e-4;
  sc.M_grid = 96;
  sc.scheme = Scheme::picard;
  SolverConfig sb = solver_config_from_json(json::parse(solver_config_to_json(sc).dump()));
  CHECK(sb.dt == sc.dt);
  CHECK(sb.M_grid == 96);
  CHECK(sb.scheme == Scheme::picard);

  SolverConfig run_cfg;
  run_cfg.M_grid = 16;
  run_cfg.dt = 0.01;
  run_cfg.T_final = 0.05;
  Trajectory tr = integrate_bbm(oracle::random_field(8, 2, 1.0), run_cfg);
  Trajectory tb = trajectory_from_json(json::parse(trajectory_to_json(tr).dump()));
  REQUIRE(tb.states.size() == tr.states.size());
  CHECK(tb.times == tr.times);
  for (std::size_t i = 0; i < tr.states.size(); ++i)
    for (int n = 0; n <= tr.states[i].M(); ++n) CHECK(tb.states[i][n] == tr.states[i][n]);

  CHECK(to_csv({"a", "b"}, {{"1", "2"}}) == "a,b\n1,2\n");
}

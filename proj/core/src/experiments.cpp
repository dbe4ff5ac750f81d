#include "bbm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "bbm/imethod.hpp"
#include "bbm/inflation.hpp"
#include "bbm/nonlinearity.hpp"
#include "bbm/parallel.hpp"
#include "bbm/random_data.hpp"
#include "bbm/rng.hpp"
#include "bbm/solver.hpp"
#include "bbm/tail_stats.hpp"

#ifndef BBM_VERSION
#define BBM_VERSION "0.0.0"
#endif

namespace bbm {

using nlohmann::json;

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"regularity-scan", "ck-divergence",  "nz-convergence",
                                              "sharpness",       "gwp-energy-trace", "inflation",
                                              "tails",           "chaos-moments",  "solver-validate"};
  return kinds;
}

json default_params(const std::string& kind) {
  if (kind == "regularity-scan")
    return {{"alpha", 0.5},
            {"family", "gaussian"},
            {"s_offsets", {-0.1, 0.1}},
            {"M_list", {64, 128, 256, 512, 1024}},
            {"n_samples", 1000}};
  if (kind == "ck-divergence")
    return {{"alphas", {0.3, 0.35, 0.45, 0.5}},
            {"kernel", "fejer"},
            {"k_list", {16, 32, 64, 128, 256, 512, 1024, 2048, 4096}},
            {"mc_alpha", 0.4},
            {"mc_k", 64},
            {"mc_t", 0.3},
            {"mc_samples", 10000}};
  if (kind == "nz-convergence")
    return {{"alpha", 0.4},
            {"s2", 0.7},
            {"kernel", "fejer"},
            {"kernel2", "gaussian-symbol"},
            {"k_list", {64, 128, 256, 512, 1024}},
            {"ratio", 2.0},
            {"n_samples", 200},
            {"family", "gaussian"}};
  if (kind == "sharpness")
    return {{"alpha", 0.2}, {"test_mode", 1}, {"N_list", {64, 128, 256, 512, 1024, 2048, 4096}}, {"n_samples", 2000}};
  if (kind == "gwp-energy-trace")
    return {{"alpha", 0.5},   {"family", "gaussian"}, {"N", 64},           {"s", 0.75},
            {"M_grid", 256},  {"dt", 1e-3},           {"T", 2.0},          {"kernel", "exact"},
            {"k", 0.0},       {"gronwall", true},     {"probe_samples", 200}, {"tolerance", 1e-6}};
  if (kind == "inflation")
    return {{"s", -1.0},
            {"p", 2.0},
            {"n", 2},
            {"delta", 0.2},
            {"N", 512},
            {"prefactors", {{"A", 0.125}, {"R", 0.25}, {"T", 16.0}}},
            {"M_grid", 0},
            {"steps", 64}};
  if (kind == "tails")
    return {{"observables", {"z", "nz"}},
            {"alpha", 0.5},
            {"M_grid", 64},
            {"n_time", 16},
            {"s_z", -0.1},
            {"s_nz", 0.5},
            {"T", 1.0},
            {"n_samples", 10000},
            {"lambda_grid", json::array()},
            {"grr_beta", 0.5},
            {"grr_q", 4.0},
            {"grr_paths", 10000}};
  if (kind == "chaos-moments")
    return {{"families", {"gaussian", "uniform-phase"}},
            {"n_samples", 100000},
            {"quartic",
             {{"alpha", 0.5}, {"s", 0.5}, {"T", 1.0}, {"M_list", {64, 128, 256, 512}}, {"n_samples", 200}, {"n_time", 8}}}};
  if (kind == "solver-validate")
    return {{"M_grid", 256}, {"dt", 1e-3}, {"T", 1.0}, {"picard_T", 0.05}, {"order_dt", 0.2}};
  throw ConfigError("unknown experiment kind '" + kind + "'");
}

namespace {

bool same_type(const json& d, const json& v) {
  if (d.is_number()) return v.is_number();
  return d.type() == v.type();
}

void merge_checked(const json& defaults, const json& given, json& out, const std::string& prefix,
                   std::vector<std::string>& bad) {
  for (auto it = given.begin(); it != given.end(); ++it) {
    std::string key = prefix + it.key();
    if (!defaults.contains(it.key())) {
      bad.push_back(key + " (unknown key)");
      continue;
    }
    const json& d = defaults[it.key()];
    if (!same_type(d, it.value())) {
      bad.push_back(key + " (expected " + std::string(d.type_name()) + ")");
      continue;
    }
    if (d.is_object()) merge_checked(d, it.value(), out[it.key()], key + ".", bad);
    else out[it.key()] = it.value();
  }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string f(double x) { return format_double(x); }

std::vector<std::uint64_t> seeds_for(std::uint64_t master, int n) {
  std::vector<std::uint64_t> s(std::max(0, n));
  for (int i = 0; i < n; ++i) s[i] = member_seed(master, i);
  return s;
}

std::string verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

json ExperimentConfig::to_json() const {
  return {{"kind", kind}, {"seed", seed}, {"out", out_dir}, {"threads", threads}, {"format", format}, {"params", params}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::vector<std::string> bad;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "kind" && k != "seed" && k != "out" && k != "threads" && k != "format" && k != "params")
      bad.push_back(k + " (unknown key)");
  }
  ExperimentConfig c;
  auto get = [&](const char* key, auto& dst, auto pred, const char* type) {
    if (!j.contains(key)) return;
    if (!pred(j[key])) {
      bad.push_back(std::string(key) + " (expected " + type + ")");
      return;
    }
    dst = j[key].get<std::decay_t<decltype(dst)>>();
  };
  get("kind", c.kind, [](const json& v) { return v.is_string(); }, "string");
  get("seed", c.seed, [](const json& v) { return v.is_number_unsigned(); }, "unsigned integer");
  get("out", c.out_dir, [](const json& v) { return v.is_string(); }, "string");
  get("threads", c.threads, [](const json& v) { return v.is_number_integer(); }, "integer");
  get("format", c.format, [](const json& v) { return v.is_string(); }, "string");
  get("params", c.params, [](const json& v) { return v.is_object(); }, "object");
  if (c.kind.empty()) {
    bad.push_back("kind (missing)");
  } else if (std::find(experiment_kinds().begin(), experiment_kinds().end(), c.kind) == experiment_kinds().end()) {
    bad.push_back("kind (unknown: " + c.kind + ")");
  } else if (c.params.is_object()) {
    json d = default_params(c.kind), out = d;
    merge_checked(d, c.params, out, "params.", bad);
  }
  if (!bad.empty()) throw ConfigError("schema error: " + join(bad, ", "));
  return c;
}

json ExperimentConfig::resolved_params() const {
  json d = default_params(kind);
  json out = d;
  std::vector<std::string> bad;
  merge_checked(d, params, out, "params.", bad);
  if (!bad.empty()) throw ConfigError("schema error: " + join(bad, ", "));
  return out;
}

// Hashes only what determines the numbers: kind, seed and resolved params.
std::uint64_t config_hash(const ExperimentConfig& cfg) {
  json key{{"kind", cfg.kind}, {"seed", cfg.seed}};
  try {
    key["params"] = cfg.resolved_params();
  } catch (const ConfigError&) {
    key["params"] = cfg.params;
  }
  std::string s = key.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string Diagnostics::render() const {
  std::string out;
  for (const auto& e : errors) out += "error: " + e + "\n";
  for (const auto& w : warnings) out += "warning: " + w + "\n";
  for (const auto& i : info) out += "info: " + i + "\n";
  return out;
}

namespace {

InflationParams inflation_from(const json& p) {
  SelectOptions so;
  so.delta = p["delta"].get<double>();
  so.fixed_N = p["N"].get<double>();
  so.prefactors = {p["prefactors"]["A"].get<double>(), p["prefactors"]["R"].get<double>(),
                   p["prefactors"]["T"].get<double>()};
  return select_parameters(p["s"].get<double>(), p["p"].get<double>(), p["n"].get<int>(), so);
}

}  // namespace

Diagnostics validate(const ExperimentConfig& cfg) {
  Diagnostics d;
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end()) {
    d.errors.push_back("unknown experiment kind '" + cfg.kind + "'; expected one of " + join(kinds, ", "));
    return d;
  }
  if (cfg.threads < 1) d.errors.push_back("threads must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json") d.errors.push_back("format must be csv or json");
  json p;
  try {
    p = cfg.resolved_params();
  } catch (const ConfigError& e) {
    d.errors.push_back(e.what());
    return d;
  }
  const std::string& k = cfg.kind;
  if (k == "nz-convergence") {
    double a = p["alpha"].get<double>(), s2 = p["s2"].get<double>();
    if (a <= 0.25)
      d.warnings.push_back("alpha = " + f(a) + " <= 1/4: N(z_k) is not Cauchy in this regime (the quadratic object fails to exist)");
    else if (a <= 0.5)
      d.info.push_back("alpha = " + f(a) + " in (1/4, 1/2]: N(z_k) converges in H^{s2} for s2 < 2 alpha");
    else
      d.info.push_back("alpha = " + f(a) + " > 1/2: data already in L^2");
    if (s2 >= 2.0 * a) d.errors.push_back("precondition violated: s2 = " + f(s2) + " must be < 2 alpha = " + f(2.0 * a));
  } else if (k == "sharpness") {
    double a = p["alpha"].get<double>();
    if (a > 0.25) d.warnings.push_back("alpha = " + f(a) + " > 1/4: variance is expected to stay bounded (convergent regime)");
    else d.info.push_back("alpha = " + f(a) + " <= 1/4: variance growth N^{1-4 alpha} expected");
    if (p["test_mode"].get<int>() == 0) d.errors.push_back("test_mode must be nonzero");
  } else if (k == "gwp-energy-trace") {
    double a = p["alpha"].get<double>(), s = p["s"].get<double>();
    if (!(a > 0.25 && a <= 0.5)) d.warnings.push_back("alpha = " + f(a) + " outside (1/4, 1/2]: the energy ledger still closes but the global bound is not expected");
    if (!(s > 0.5 && s < 1.0)) d.errors.push_back("precondition violated: I-method regularity s = " + f(s) + " must lie in (1/2, 1)");
    if (p["N"].get<double>() < 1.0) d.errors.push_back("N must be >= 1");
    if (p["dt"].get<double>() <= 0.0 || p["T"].get<double>() < 0.0) d.errors.push_back("need dt > 0 and T >= 0");
  } else if (k == "inflation") {
    double s = p["s"].get<double>(), pp = p["p"].get<double>();
    if (s >= 0.0) d.errors.push_back("precondition violated: inflation needs s < 0");
    if (pp < 1.0) d.errors.push_back("precondition violated: need p >= 1");
    if (d.ok()) {
      try {
        InflationParams ip = inflation_from(p);
        d.info.push_back("case " + std::to_string(int(ip.inflation_case)) + ": N = " + f(ip.N) + ", A = " + f(ip.A) +
                         ", R = " + f(ip.R) + ", T = " + f(ip.T));
        for (const auto& c : ip.conditions())
          (c.holds ? d.info : d.warnings).push_back(c.name + ": " + f(c.lhs) + " vs " + f(c.rhs) + (c.holds ? " holds" : " fails"));
      } catch (const std::exception& e) {
        d.errors.push_back(e.what());
      }
    }
  } else if (k == "regularity-scan") {
    double a = p["alpha"].get<double>();
    for (const auto& off : p["s_offsets"]) {
      double s = a - 0.5 + off.get<double>();
      d.info.push_back("s = " + f(s) + (s < a - 0.5 ? ": below alpha - 1/2, bounded second moment expected"
                                                     : ": at or above alpha - 1/2, divergence expected"));
    }
  } else if (k == "tails") {
    if (p["T"].get<double>() <= 0.0) d.errors.push_back("T must be positive");
    if (p["n_samples"].get<int>() < 20) d.errors.push_back("n_samples must be >= 20");
    if (p["grr_q"].get<double>() * p["grr_beta"].get<double>() <= 1.0) d.errors.push_back("GRR needs q beta > 1");
  } else if (k == "ck-divergence") {
    for (const auto& a : p["alphas"])
      if (a.get<double>() <= 0.0 || a.get<double>() > 0.5) d.warnings.push_back("alpha = " + f(a.get<double>()) + " outside (0, 1/2]: C_k stays bounded");
  } else if (k == "chaos-moments") {
    for (const auto& fam : p["families"]) {
      try {
        family_from_string(fam.get<std::string>());
      } catch (const std::exception& e) {
        d.errors.push_back(e.what());
      }
    }
  }
  return d;
}

namespace {

ExperimentResult run_regularity(const json& p, std::uint64_t seed, int threads) {
  ExperimentResult r;
  r.claim = "E||u0||_{H^s}^2 stays bounded under truncation doubling for s < alpha - 1/2 and diverges above";
  double a = p["alpha"].get<double>();
  Family fam = family_from_string(p["family"].get<std::string>());
  auto Ms = p["M_list"].get<std::vector<int>>();
  int n = p["n_samples"].get<int>();
  r.header = {"s", "M", "estimate", "stderr", "exact"};
  r.pass = true;
  for (double off : p["s_offsets"].get<std::vector<double>>()) {
    double s = a - 0.5 + off;
    std::vector<double> est;
    for (int M : Ms) {
      RandomDataSpec spec{fam, a, M, seed, {}};
      MeanErr m = estimate_moment(spec, {NormDescriptor::Space::sobolev, s}, 2.0, n, threads);
      est.push_back(m.mean);
      r.rows.push_back({f(s), std::to_string(M), f(m.mean), f(m.stderr_), f(sobolev_second_moment(spec, s))});
    }
    bool all_below = true, all_above = true;
    std::string ratios;
    for (std::size_t i = 1; i < est.size(); ++i) {
      double q = est[i] / est[i - 1];
      all_below = all_below && q < 1.1;
      all_above = all_above && q > 1.1;
      ratios += (i > 1 ? " " : "") + f(std::round(q * 1e4) / 1e4);
    }
    std::string cls = all_below ? "bounded" : all_above ? "divergent" : "mixed";
    bool ok = off < 0 ? all_below : off > 0 ? all_above : true;
    r.pass = r.pass && ok;
    r.summary_lines.push_back("s = " + f(s) + ": doubling ratios [" + ratios + "] -> " + cls + " " + verdict(ok));
  }
  r.member_seeds = seeds_for(seed, n);
  return r;
}

void add_report_rows(ExperimentResult& r, const std::string& tag, const NonlinearityReport& rep) {
  for (const auto& row : rep.rows)
    r.rows.push_back({tag, row.parameter, f(row.level), f(row.estimate), f(row.stderr_), f(row.oracle)});
}

ExperimentResult run_ck(const json& p, std::uint64_t seed, int threads) {
  ExperimentResult r;
  r.claim = "the zero-mode constant C_k diverges like k^{1-2alpha} (log k at alpha = 1/2)";
  r.header = {"alpha", "quantity", "k", "value", "stderr", "oracle"};
  MollifierKernel ker = kernel_from_string(p["kernel"].get<std::string>());
  auto ks = p["k_list"].get<std::vector<double>>();
  r.pass = true;
  for (double a : p["alphas"].get<std::vector<double>>()) {
    NonlinearityReport rep = ck_divergence(a, ker, ks);
    add_report_rows(r, f(a), rep);
    r.pass = r.pass && rep.pass;
    r.summary_lines.push_back("alpha = " + f(a) + ": fitted slope " + f(rep.fitted_slope) + " expected " +
                              f(rep.expected_slope) + " (" + rep.note + ") " + verdict(rep.pass));
  }
  int n = p["mc_samples"].get<int>();
  CkOptions opt;
  opt.n_samples = n;
  opt.seed = seed;
  opt.t = p["mc_t"].get<double>();
  opt.threads = threads;
  double a = p["mc_alpha"].get<double>(), k = p["mc_k"].get<double>();
  ValueErr mc = zero_mode_constant(a, k, ker, CkMode::monte_carlo, opt);
  ValueErr an = zero_mode_constant(a, k, ker, CkMode::analytic, opt);
  bool ok = std::abs(mc.value - an.value) <= 3.0 * mc.stderr_;
  r.rows.push_back({f(a), "C_k monte-carlo", f(k), f(mc.value), f(mc.stderr_), f(an.value)});
  r.pass = r.pass && ok;
  r.summary_lines.push_back("monte-carlo C_k at alpha = " + f(a) + ", k = " + f(k) + ": " + f(mc.value) + " +- " +
                            f(mc.stderr_) + " vs analytic " + f(an.value) + " " + verdict(ok));
  r.member_seeds = seeds_for(seed, n);
  return r;
}

ExperimentResult run_nz(const json& p, std::uint64_t seed, int threads) {
  ExperimentResult r;
  r.claim = "N(z_k) is Cauchy in H^{s2} (s2 < 2 alpha, alpha > 1/4) and its limit does not depend on the mollifier";
  r.header = {"test", "quantity", "k", "estimate", "stderr", "oracle"};
  NzOptions o;
  o.n_samples = p["n_samples"].get<int>();
  o.seed = seed;
  o.family = family_from_string(p["family"].get<std::string>());
  o.threads = threads;
  o.ratio = p["ratio"].get<double>();
  double a = p["alpha"].get<double>(), s2 = p["s2"].get<double>();
  auto ks = p["k_list"].get<std::vector<double>>();
  MollifierKernel k1 = kernel_from_string(p["kernel"].get<std::string>());
  NonlinearityReport c = nz_convergence(a, s2, k1, ks, o);
  add_report_rows(r, "cauchy", c);
  r.pass = c.pass;
  r.summary_lines.push_back("Cauchy differences: fitted slope " + f(c.fitted_slope) + c.note + " " + verdict(c.pass));
  std::string k2name = p["kernel2"].get<std::string>();
  if (!k2name.empty()) {
    NonlinearityReport ki = kernel_independence(a, s2, k1, kernel_from_string(k2name), ks, o);
    add_report_rows(r, "kernel-independence", ki);
    r.pass = r.pass && ki.pass;
    r.summary_lines.push_back(p["kernel"].get<std::string>() + " vs " + k2name + ": fitted slope " +
                              f(ki.fitted_slope) + ki.note + " " + verdict(ki.pass));
  }
  r.member_seeds = seeds_for(seed, o.n_samples);
  return r;
}

ExperimentResult run_sharpness(const json& p, std::uint64_t seed, int threads) {
  ExperimentResult r;
  r.claim = "for alpha <= 1/4 the tested increment of N(f_N) has variance growing like N^{1-4alpha}";
  r.header = {"quantity", "N", "estimate", "stderr", "oracle"};
  int n = p["n_samples"].get<int>();
  auto Ns = p["N_list"].get<std::vector<long>>();
  NonlinearityReport rep =
      sharpness_divergence(p["alpha"].get<double>(), p["test_mode"].get<int>(), Ns, n, seed, threads);
  for (const auto& row : rep.rows)
    r.rows.push_back({row.parameter, f(row.level), f(row.estimate), f(row.stderr_), f(row.oracle)});
  r.pass = rep.pass;
  r.summary_lines.push_back("fitted slope " + f(rep.fitted_slope) + " expected " + f(rep.expected_slope) + " " +
                            rep.note + " " + verdict(rep.pass));
  r.member_seeds = seeds_for(seed, n);
  return r;
}

ExperimentResult run_gwp(const json& p, std::uint64_t seed, int threads) {
  ExperimentResult r;
  r.claim = "E(Iv)(t) - E(Iv)(0) equals the sum of the commutator, forcing and cross terms; Gronwall bounds the growth";
  double a = p["alpha"].get<double>();
  IParams ip{p["N"].get<double>(), p["s"].get<double>()};
  SolverConfig c;
  c.M_grid = p["M_grid"].get<int>();
  c.dt = p["dt"].get<double>();
  c.T_final = p["T"].get<double>();
  std::string kname = p["kernel"].get<std::string>();
  ZSource src = kname == "exact" ? ZSource::exact() : ZSource::mollified(kernel_from_string(kname), p["k"].get<double>());
  SpectralField u0 = sample_initial_data({family_from_string(p["family"].get<std::string>()), a, c.M_grid, seed, {}});
  Trajectory tr = integrate_perturbed(src, u0, c);
  EnergyTrace et = energy_growth_decomposition(tr, src, ip);
  r.rows = energy_trace_table(et, &r.header);
  double res = et.max_relative_residual(), tol = p["tolerance"].get<double>();
  bool ok = res < tol && !tr.blowup;
  r.pass = ok;
  r.summary_lines.push_back("ledger closure: max |residual| / max(1, E) = " + f(res) + " (tolerance " + f(tol) + ") " +
                            verdict(ok));
  r.details["ledger_max_relative_residual"] = res;
  if (p["gronwall"].get<bool>()) {
    int np = p["probe_samples"].get<int>();
    ProbeScan v2 = commutator_v2_scan({ip.N}, ip.s, np, seed, threads);
    ProbeScan vz = commutator_vz_scan({ip.N}, ip.s, a, np, seed, threads);
    GronwallCheck g = gronwall_trajectory_check(tr, et, ip, a, v2.rows[0].max_ratio, vz.rows[0].max_ratio);
    r.details["gronwall"] = {{"a", g.a},   {"b", g.b},   {"ceiling", g.ceiling}, {"C2", g.C2},
                             {"C4", g.C4}, {"K2", g.K2}, {"observed_time", g.observed_time},
                             {"predicted_time", g.predicted_time}, {"pass", g.pass}};
    r.pass = r.pass && g.pass;
    r.summary_lines.push_back("ceiling " + f(g.ceiling) + " reached at t = " + f(g.observed_time) +
                              ", Gronwall prediction " + f(g.predicted_time) + " " + verdict(g.pass));
  }
  r.member_seeds = {seed};
  return r;
}

ExperimentResult run_inflation(const json& p) {
  ExperimentResult r;
  r.claim = "a perturbation small in FL^{s,p} drives a large FL^{s,p} norm after a short time (norm inflation at zero)";
  InflationParams ip = inflation_from(p);
  int M = p["M_grid"].get<int>();
  if (M <= 0) M = 2 * (static_cast<int>(std::lround(ip.N)) + 2 * static_cast<int>(std::floor(ip.A))) + 16;
  SolverConfig c;
  c.M_grid = M;
  c.dt = ip.T / p["steps"].get<int>();
  InflationReport rep = run_inflation_experiment(SpectralField(M), ip, c);
  r.header = {"quantity", "value"};
  auto add = [&](const std::string& k, double v) {
    r.rows.push_back({k, f(v)});
    r.details[k] = v;
  };
  add("N", ip.N);
  add("A", ip.A);
  add("R", ip.R);
  add("T", ip.T);
  add("M_grid", M);
  for (const auto& cnd : rep.conditions) {
    r.rows.push_back({"condition " + cnd.name, f(cnd.lhs) + (cnd.holds ? " (holds)" : " (fails)")});
    r.details["conditions"].push_back({{"name", cnd.name}, {"lhs", cnd.lhs}, {"rhs", cnd.rhs}, {"holds", cnd.holds}});
  }
  add("perturbation_norm", rep.perturbation_norm);
  add("final_norm", rep.final_norm);
  add("amplification", rep.amplification);
  add("xi1_norm", rep.xi1_norm);
  add("prediction", rep.prediction);
  add("prediction_ratio", rep.prediction_ratio);
  add("remainder", rep.remainder);
  add("remainder_bound", rep.remainder_bound);
  r.details["dominance"] = rep.dominance;
  r.details["blowup"] = rep.blowup;
  r.pass = rep.amplification >= 10.0 && !rep.blowup;
  r.summary_lines.push_back("case " + std::to_string(int(ip.inflation_case)) + " at N = " + f(ip.N) +
                            ": perturbation " + f(rep.perturbation_norm) + ", final " + f(rep.final_norm) +
                            ", amplification " + f(rep.amplification) + " (needs >= 10) " + verdict(r.pass));
  r.summary_lines.push_back("first-iterate prediction / measurement = " + f(rep.prediction_ratio) +
                            "; remainder " + f(rep.remainder) + " vs Xi_1 " + f(rep.xi1_norm));
  return r;
}

ExperimentResult run_tails(const json& p, std::uint64_t seed, int threads) {
  ExperimentResult r;
  r.claim = "sup_t ||z|| has Gaussian tails and sup_t ||N(z)|| has exponential tails; GRR dominates the Holder seminorm";
  r.header = {"observable", "lambda", "p_hat", "ci_low", "ci_high"};
  int n = p["n_samples"].get<int>();
  double T = p["T"].get<double>();
  r.pass = true;
  for (const auto& name : p["observables"].get<std::vector<std::string>>()) {
    TailSpec ts;
    ts.observable = tail_observable_from_string(name);
    ts.alpha = p["alpha"].get<double>();
    ts.M_grid = p["M_grid"].get<int>();
    ts.n_time = p["n_time"].get<int>();
    ts.s = ts.observable == TailObservable::z ? p["s_z"].get<double>() : p["s_nz"].get<double>();
    TailReport rep = tail_check(ts, T, p["lambda_grid"].get<std::vector<double>>(), n, seed, threads);
    for (const auto& row : rep.rows) r.rows.push_back({name, f(row.lambda), f(row.p_hat), f(row.ci_low), f(row.ci_high)});
    r.pass = r.pass && rep.pass;
    r.summary_lines.push_back(name + ": -log P vs lambda^" + std::to_string(rep.power) + " slope " + f(rep.slope) +
                              ", R^2 " + f(rep.r2) + ", tail exponent " + f(rep.kappa) + " " + verdict(rep.pass));
    r.details[name] = {{"slope", rep.slope}, {"r2", rep.r2}, {"r2_linear", rep.r2_linear},
                       {"r2_quadratic", rep.r2_quadratic}, {"kappa", rep.kappa}, {"median", rep.median}};
    int paths = std::min(n, p["grr_paths"].get<int>());
    double beta = p["grr_beta"].get<double>(), q = p["grr_q"].get<double>();
    NormDescriptor nd{NormDescriptor::Space::wsp, ts.s, kInf, 0};
    std::vector<char> ok(paths);
    parallel_for(paths, threads, [&](std::size_t i) {
      ok[i] = grr_path_check(observable_path(ts, T, member_seed(seed, i)), beta, q, nd).dominated;
    });
    long good = std::count(ok.begin(), ok.end(), 1);
    bool all = good == paths;
    r.pass = r.pass && all;
    r.summary_lines.push_back(name + ": GRR domination on " + std::to_string(good) + "/" + std::to_string(paths) +
                              " paths " + verdict(all));
  }
  r.member_seeds = seeds_for(seed, n);
  return r;
}

ExperimentResult run_chaos(const json& p, std::uint64_t seed, int threads) {
  ExperimentResult r;
  r.claim = "moment table of the randomisation and the quartic time-integrated bound for non-Gaussian families";
  r.header = {"family", "tuple", "case", "estimate_re", "estimate_im", "expected_re", "expected_im", "pass"};
  int n = p["n_samples"].get<int>();
  const json& q = p["quartic"];
  r.pass = true;
  for (const auto& fname : p["families"].get<std::vector<std::string>>()) {
    Family fam = family_from_string(fname);
    MomentReport mr = moment_table_check(fam, default_moment_tuples(), n, seed, threads);
    for (const auto& e : mr.entries) {
      std::string t;
      for (std::size_t i = 0; i < e.tuple.size(); ++i) t += (i ? " " : "") + std::to_string(e.tuple[i]);
      r.rows.push_back({fname, t, e.case_label, f(e.estimate.real()), f(e.estimate.imag()), f(e.expected.real()),
                        f(e.expected.imag()), e.pass ? "1" : "0"});
    }
    r.pass = r.pass && mr.pass;
    r.summary_lines.push_back(fname + ": moment table " + verdict(mr.pass));
    QuarticOptions qo;
    qo.n_samples = q["n_samples"].get<int>();
    qo.n_time = q["n_time"].get<int>();
    qo.seed = seed;
    qo.family = fam;
    qo.threads = threads;
    std::vector<double> vals;
    std::string ratios;
    bool bounded = true;
    for (int M : q["M_list"].get<std::vector<int>>()) {
      qo.M_grid = M;
      vals.push_back(quartic_bound_check(q["alpha"].get<double>(), q["s"].get<double>(), q["T"].get<double>(), qo).value);
      if (vals.size() > 1) {
        double ratio = vals.back() / vals[vals.size() - 2];
        bounded = bounded && ratio < 1.1;
        ratios += (vals.size() > 2 ? " " : "") + f(std::round(ratio * 1e4) / 1e4);
      }
    }
    r.pass = r.pass && bounded;
    r.summary_lines.push_back(fname + ": quartic bound doubling ratios [" + ratios + "] " + verdict(bounded));
  }
  r.member_seeds = seeds_for(seed, n);
  return r;
}

ExperimentResult run_solver_validate(const json& p, std::uint64_t seed) {
  ExperimentResult r;
  r.claim = "energy conservation, time reversal, mean invariance, fourth-order accuracy and Picard agreement";
  r.header = {"check", "value", "tolerance", "pass"};
  r.pass = true;
  auto check = [&](const std::string& name, double v, double tol, bool ok) {
    r.rows.push_back({name, f(v), f(tol), ok ? "1" : "0"});
    r.pass = r.pass && ok;
    r.summary_lines.push_back(name + ": " + f(v) + " (tolerance " + f(tol) + ") " + verdict(ok));
  };
  SolverConfig c;
  c.M_grid = p["M_grid"].get<int>();
  c.dt = p["dt"].get<double>();
  c.T_final = p["T"].get<double>();
  c.save_every = 1 << 30;
  SpectralField smooth(c.M_grid);
  smooth.set(1, 0.5);
  double e0 = energy(smooth);
  double drift = std::abs(energy(integrate_bbm(smooth, c).states.back()) - e0) / e0;
  check("energy drift", drift, 1e-8, drift < 1e-8);

  auto reflect = [](SpectralField g) {
    for (auto& x : g.mutable_coeffs()) x = std::conj(x);
    return g;
  };
  SpectralField w(c.M_grid);
  w.set(1, 0.5);
  w.set(3, cplx(0.1, 0.2));
  SpectralField back = reflect(integrate_bbm(reflect(integrate_bbm(w, c).states.back()), c).states.back());
  double rev = sobolev_norm(back - w, 0.0);
  check("time reversal", rev, 1e-6, rev < 1e-6);

  SpectralField rough = sample_initial_data({Family::gaussian, 0.5, c.M_grid, seed, {}});
  rough.set(0, 0.7);
  double mean_dev = std::abs(integrate_bbm(rough, c).states.back()[0] - rough[0]);
  check("mean invariance", mean_dev, 1e-13, mean_dev < 1e-13);

  double h = p["order_dt"].get<double>();
  SpectralField od(32);
  od.set(1, 1.0);
  od.set(2, cplx(0.5, 0.3));
  auto solve = [&](double dt) {
    SolverConfig oc = c;
    oc.M_grid = 32;
    oc.dt = dt;
    oc.T_final = 1.0;
    return integrate_bbm(od, oc).states.back();
  };
  SpectralField ref = solve(h / 8.0);
  double ratio = sobolev_norm(solve(h) - ref, 0.0) / sobolev_norm(solve(h / 2.0) - ref, 0.0);
  check("RK4 error ratio under dt halving", ratio, 3.2, std::abs(ratio - 16.0) <= 3.2);

  double pt = p["picard_T"].get<double>();
  SpectralField pd(64);
  pd.set(1, 0.5);
  pd.set(2, cplx(0.2, 0.1));
  pd.set(3, 0.1);
  SolverConfig pc = c;
  pc.M_grid = 64;
  pc.T_final = pt;
  double pdiff = sobolev_norm(integrate_bbm(pd, pc).states.back() - picard_solve(pd, pt, pc), 1.0);
  check("Picard vs RK4", pdiff, 1e-7, pdiff < 1e-7);
  r.member_seeds = {seed};
  return r;
}

}  // namespace

ExperimentResult execute(const ExperimentConfig& cfg) {
  json p = cfg.resolved_params();
  const std::string& k = cfg.kind;
  int th = std::max(1, cfg.threads);
  if (k == "regularity-scan") return run_regularity(p, cfg.seed, th);
  if (k == "ck-divergence") return run_ck(p, cfg.seed, th);
  if (k == "nz-convergence") return run_nz(p, cfg.seed, th);
  if (k == "sharpness") return run_sharpness(p, cfg.seed, th);
  if (k == "gwp-energy-trace") return run_gwp(p, cfg.seed, th);
  if (k == "inflation") return run_inflation(p);
  if (k == "tails") return run_tails(p, cfg.seed, th);
  if (k == "chaos-moments") return run_chaos(p, cfg.seed, th);
  if (k == "solver-validate") return run_solver_validate(p, cfg.seed);
  throw ConfigError("unknown experiment kind '" + k + "'");
}

json manifest(const ExperimentConfig& cfg, const ExperimentResult& res) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return {{"tool", "bbm"},
          {"version", BBM_VERSION},
          {"kind", cfg.kind},
          {"master_seed", cfg.seed},
          {"member_seed_rule", "member i uses mix64(mix64(master) ^ mix64(i + 0x632be59bd9b4e019)) with the splitmix64 finalizer mix64"},
          {"member_seeds", res.member_seeds},
          {"config_hash", hash},
          {"config", cfg.to_json()},
          {"resolved_params", cfg.resolved_params()},
          {"claim", res.claim},
          {"pass", res.pass}};
}

int run(const ExperimentConfig& cfg, std::ostream& log) {
  Diagnostics d = validate(cfg);
  if (!d.ok()) {
    log << d.render();
    return 2;
  }
  for (const auto& w : d.warnings) log << "warning: " << w << "\n";
  ExperimentResult res;
  try {
    res = execute(cfg);
  } catch (const std::exception& e) {
    log << "error in " << cfg.kind << ": " << e.what() << "\n";
    return 2;
  }
  namespace fs = std::filesystem;
  try {
    fs::create_directories(cfg.out_dir);
    fs::path base = fs::path(cfg.out_dir) / cfg.kind;
    if (cfg.format == "json") {
      json rows = json::array();
      for (const auto& row : res.rows) rows.push_back(row);
      write_text_file(base.string() + ".json",
                      json{{"header", res.header}, {"rows", rows}, {"details", res.details}}.dump(2) + "\n");
    } else {
      write_text_file(base.string() + ".csv", to_csv(res.header, res.rows));
    }
    write_text_file((fs::path(cfg.out_dir) / "manifest.json").string(), manifest(cfg, res).dump(2) + "\n");
    std::string summary = cfg.kind + "\nclaim: " + res.claim + "\n";
    for (const auto& l : res.summary_lines) summary += "  " + l + "\n";
    summary += std::string("result: ") + (res.pass ? "PASS" : "FAIL") + "\n";
    write_text_file((fs::path(cfg.out_dir) / "summary.txt").string(), summary);
    log << summary;
  } catch (const std::exception& e) {
    log << "error writing results: " << e.what() << "\n";
    return 2;
  }
  return res.pass ? 0 : 1;
}

}  // namespace bbm

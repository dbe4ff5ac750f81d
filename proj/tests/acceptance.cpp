#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bbm/experiments.hpp"
#include "bbm/imethod.hpp"
#include "bbm/inflation.hpp"
#include "bbm/io.hpp"
#include "bbm/random_data.hpp"
#include "bbm/rng.hpp"
#include "bbm/solver.hpp"
#include "bbm/spectral.hpp"

using namespace bbm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
  }
};

std::string f(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double l2(const SpectralField& u) { return sobolev_norm(u, 0.0); }

ExperimentResult run_kind(const std::string& kind, const nlohmann::json& params = nlohmann::json::object()) {
  ExperimentConfig c;
  c.kind = kind;
  c.seed = 1;
  c.params = params;
  return execute(c);
}

void absorb(Outcome& o, const ExperimentResult& r) {
  for (const auto& line : r.summary_lines) {
    bool ok = line.find("FAIL") == std::string::npos;
    o.pass = o.pass && ok;
    o.detail += (o.detail.empty() ? "" : "; ") + line;
  }
  o.pass = o.pass && r.pass;
}

Outcome energy_conservation() {
  Outcome o;
  SolverConfig c;
  c.M_grid = 256;
  c.dt = 1e-3;
  c.T_final = 1.0;
  c.save_every = 1 << 30;
  SpectralField u0(256);
  u0.set(1, 0.5);
  u0.set(2, cplx(0.2, -0.1));
  u0.set(5, 0.05);
  auto t0 = std::chrono::steady_clock::now();
  Trajectory tr = integrate_bbm(u0, c);
  double secs = seconds_since(t0);
  double drift = std::abs(energy(tr.states.back()) - energy(u0)) / energy(u0);
  o.require(drift < 1e-8, "relative energy drift " + f(drift) + " < 1e-8");
  o.require(secs < 10.0, "runtime " + f(secs) + " s < 10 s");
  return o;
}

Outcome ck_divergence_check() {
  Outcome o;
  absorb(o, run_kind("ck-divergence", {{"alphas", {0.3, 0.35, 0.45, 0.5}}}));
  return o;
}

Outcome regularity_threshold() {
  Outcome o;
  absorb(o, run_kind("regularity-scan"));
  return o;
}

Outcome nz_convergence_and_sharpness() {
  Outcome o;
  absorb(o, run_kind("nz-convergence", {{"kernel2", ""}}));
  absorb(o, run_kind("sharpness"));
  return o;
}

Outcome splitting_consistency() {
  Outcome o;
  SolverConfig c;
  c.M_grid = 256;
  c.dt = 1e-3;
  c.T_final = 0.5;
  c.save_every = 1 << 30;
  double worst = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    SpectralField u0 = sample_initial_data({Family::gaussian, 0.4, c.M_grid, seed, {}});
    ZSource src = ZSource::mollified(fejer_kernel(), 32.0);
    Trajectory v = integrate_perturbed(src, u0, c);
    SpectralField split = v.z_at(c.T_final) + v.states.back();
    SpectralField direct = integrate_bbm(make_z0(src, u0, c.M_grid), c).states.back();
    worst = std::max(worst, l2(split - direct));
  }
  o.require(worst < 1e-6, "max ||z_k + v_k - u_k||_{L^2} at T = 0.5 is " + f(worst) + " < 1e-6");

  // The remainder v_k should forget the mollifier as k grows: the gap between
  // the fejer and gaussian-symbol versions shrinks when k doubles.
  SolverConfig c2 = c;
  c2.M_grid = 512;
  const int samples = 8;
  std::vector<double> ks{16, 32, 64, 128}, gap(ks.size(), 0.0);
  for (int i = 0; i < samples; ++i) {
    SpectralField u0 = sample_initial_data({Family::gaussian, 0.4, c2.M_grid, member_seed(11, i), {}});
    for (std::size_t j = 0; j < ks.size(); ++j) {
      SpectralField va = integrate_perturbed(ZSource::mollified(fejer_kernel(), ks[j]), u0, c2).states.back();
      SpectralField vb = integrate_perturbed(ZSource::mollified(gaussian_symbol_kernel(), ks[j]), u0, c2).states.back();
      gap[j] += l2(va - vb) / samples;
    }
  }
  bool monotone = true;
  std::string list;
  for (std::size_t j = 0; j < gap.size(); ++j) {
    if (j && gap[j] >= gap[j - 1]) monotone = false;
    list += (j ? " " : "") + f(gap[j]);
  }
  o.require(monotone, "mean ||v_k(fejer) - v_k(gaussian)|| over k = 16..128: [" + list + "] decreasing");
  o.require(gap.back() <= 0.6 * gap.front(), "last / first = " + f(gap.back() / gap.front()) + " <= 0.6");
  return o;
}

Outcome imethod_ledger() {
  Outcome o;
  absorb(o, run_kind("gwp-energy-trace", {{"gronwall", false}}));
  std::vector<double> Ns{16, 32, 64, 128, 256};
  ProbeScan v2 = commutator_v2_scan(Ns, 0.75, 100, 1);
  o.require(v2.slope <= -1.4, "v^2 commutator slope " + f(v2.slope) + " <= -1.4");
  ProbeScan vz = commutator_vz_scan(Ns, 0.75, 0.5, 50, 1);
  o.require(vz.slope < 0.0, "vz commutator slope " + f(vz.slope) + " < 0");
  double worst = 0.0;
  for (double N : Ns)
    for (double p : {2.0, 4.0, 8.0})
      worst = std::max(worst, iz_moment_check(0.5, {N, 0.75}, p, 200, static_cast<int>(4 * N), 4).ratio);
  o.require(worst <= 2.0, "max Iz moment ratio " + f(worst) + " <= 2");
  return o;
}

Outcome gronwall_machinery() {
  Outcome o;
  double worst = 0.0;
  for (double gam : {0.0, 0.25, 0.5, 0.8})
    for (double a : {0.3, 1.1})
      for (double b : {0.5, 2.0}) {
        double c0 = 0.4, T = 1.5;
        int steps = 20000;
        double h = T / steps, y = c0;
        auto rhs = [&](double v) { return a * v + b * std::pow(v, gam); };
        for (int k = 0; k < steps; ++k) {
          double k1 = rhs(y), k2 = rhs(y + 0.5 * h * k1), k3 = rhs(y + 0.5 * h * k2), k4 = rhs(y + h * k3);
          y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        double bound = gronwall_bound(c0, a, b, gam, T);
        worst = std::max(worst, std::abs(y - bound) / std::max(1.0, std::abs(y)));
      }
  o.require(worst < 1e-6, "closed form vs RK4 equality ODE relative gap " + f(worst) + " < 1e-6");

  IParams ip{64.0, 0.75};
  ProbeScan v2 = commutator_v2_scan({ip.N}, ip.s, 200, 1);
  ProbeScan vz = commutator_vz_scan({ip.N}, ip.s, 0.5, 200, 1);
  SolverConfig c;
  c.M_grid = 256;
  c.dt = 1e-3;
  c.T_final = 1.0;
  c.save_every = 10;
  int good = 0;
  double min_margin = kInf;
  for (int i = 0; i < 20; ++i) {
    SpectralField u0 = sample_initial_data({Family::gaussian, 0.5, c.M_grid, member_seed(7, i), {}});
    Trajectory v = integrate_perturbed(ZSource::exact(), u0, c);
    EnergyTrace et = energy_growth_decomposition(v, ZSource::exact(), ip);
    GronwallCheck g = gronwall_trajectory_check(v, et, ip, 0.5, v2.rows[0].max_ratio, vz.rows[0].max_ratio);
    if (g.pass && g.observed_time >= g.predicted_time) ++good;
    if (g.predicted_time > 0) min_margin = std::min(min_margin, g.observed_time / g.predicted_time);
  }
  o.require(good == 20, "observed crossing >= predicted on " + std::to_string(good) +
                            "/20 trajectories (min observed / predicted " + f(min_margin) + ")");
  return o;
}

SpectralField few_modes(int M) {
  SpectralField u(M);
  u.set(1, 0.5);
  u.set(2, cplx(0.2, 0.1));
  u.set(3, cplx(-0.1, 0.05));
  return u;
}

Outcome tree_series() {
  Outcome o;
  const long catalan[] = {1, 1, 2, 5, 14, 42, 132};
  bool counts = true;
  for (int j = 0; j <= 6; ++j) counts = counts && static_cast<long>(enumerate_trees(j).size()) == catalan[j];
  o.require(counts, "tree counts 1 1 2 5 14 42 132");

  SpectralField u0 = few_modes(32);
  double t = 0.2;
  XiOptions xo;
  xo.dt_quad = 1e-3;
  auto xi = xi_series(u0, t, 4, xo);
  SpectralField sum(32);
  for (const auto& x : xi) sum += x;
  SolverConfig c;
  c.M_grid = 32;
  c.dt = 1e-3;
  double gap = l2(sum - picard_solve(u0, t, c));
  o.require(gap < 1e-6, "||sum_{j<=4} Xi_j - picard|| at t = 0.2 is " + f(gap) + " < 1e-6");

  double L = fourier_lebesgue_norm(u0, 0.0, 1.0);
  std::vector<double> C;
  for (int j = 1; j <= 4; ++j) C.push_back(std::pow(fourier_lebesgue_norm(xi[j], 0.0, 1.0) / L, 1.0 / j) / (t * L));
  double spread = *std::max_element(C.begin(), C.end()) / *std::min_element(C.begin(), C.end());
  o.require(spread <= 2.0, "geometric constant (||Xi_j||_{FL^1} / L)^{1/j} / (t L) spread " + f(spread) + " <= 2");
  return o;
}

Outcome norm_inflation() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  ExperimentResult r = run_kind("inflation");
  double secs = seconds_since(t0);
  const auto& d = r.details;
  double pert = d["perturbation_norm"].get<double>(), amp = d["amplification"].get<double>();
  double pr = d["prediction_ratio"].get<double>();
  o.require(d["N"].get<double>() == 512.0, "N = 512");
  o.require(pert <= 0.1, "perturbation FL^{-1,2} norm " + f(pert) + " <= 0.1");
  o.require(amp >= 10.0, "amplification " + f(amp) + " >= 10");
  o.require(pr >= 0.25 && pr <= 4.0, "first-iterate prediction / measurement " + f(pr) + " within a factor 4");
  o.require(d["dominance"].get<bool>(), "remainder " + f(d["remainder"].get<double>()) + " <= Xi_1 / 2 = " +
                                            f(d["xi1_norm"].get<double>() / 2));
  o.require(secs < 120.0, "runtime " + f(secs) + " s < 120 s");
  return o;
}

Outcome bilinear_estimate() {
  Outcome o;
  BilinearProbeReport b = bilinear_flp_probe(0.0, 2.0, 20, false, {32, 64, 128, 256, 512});
  o.require(b.spread <= 2.0, "(s, p) = (0, 2) ratio spread over M = 32..512 is " + f(b.spread) + " <= 2");
  BilinearProbeReport adv = bilinear_flp_probe(0.0, 4.0, 1, true, {16, 32, 64, 128, 256});
  o.require(std::abs(adv.slope - 0.5) <= 0.1, "p = 4 counterexample slope " + f(adv.slope) + " vs 0.5 +- 0.1");
  return o;
}

Outcome non_gaussian() {
  Outcome o;
  absorb(o, run_kind("chaos-moments"));
  return o;
}

Outcome tails() {
  Outcome o;
  absorb(o, run_kind("tails"));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"energy conservation", energy_conservation},
      {"C_k divergence", ck_divergence_check},
      {"regularity threshold", regularity_threshold},
      {"N(z) convergence and sharpness", nz_convergence_and_sharpness},
      {"splitting consistency", splitting_consistency},
      {"I-method ledger and probes", imethod_ledger},
      {"Gronwall machinery", gronwall_machinery},
      {"tree combinatorics and series", tree_series},
      {"norm inflation", norm_inflation},
      {"FL bilinear estimate", bilinear_estimate},
      {"non-Gaussian moments", non_gaussian},
      {"tails and GRR", tails},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bbm/random_data.hpp"
#include "bbm/solver.hpp"
#include "bbm/spectral.hpp"
#include "bbm/stats.hpp"

namespace bbm {

struct IParams {
  double N = 16.0;
  double s = 0.75;
  void validate() const;  // N >= 1, 0 < s < 1
};

// m_N(n): 1 for |n| <= N, (N/|n|)^{1-s} above.
double i_multiplier(double n, const IParams& p);
SpectralField apply_I(const SpectralField& f, const IParams& p);
// E(Iv) = 1/2 ||Iv||_{H^1}^2
double modified_energy(const SpectralField& v, const IParams& p);

// Symmetrization of i n3 m3 (m3 - m1 m2) over permutations of (n1, n2, n3)
// on n1 + n2 + n3 = 0: closed form (i/3) sum_j n_j m_j^2 and brute force.
cplx symmetrized_multiplier(long n1, long n2, long n3, const IParams& p);
cplx symmetrized_multiplier_numeric(long n1, long n2, long n3, const IParams& p);

// Instantaneous growth rates of E(Iv) for v_t = -i phi v - (i/2) N(v + z):
//   I   = 1/2 <d_x Iv, I(v^2) - (Iv)^2>
//   II  = 1/2 <d_x Iv, I(P_{!=0} z^2)>
//   III =     <d_x Iv, I(vz)>
// with <f, g> = (1/2pi) int f g. Their sum is dE(Iv)/dt exactly for the
// Galerkin system integrated by the solver.
std::array<double, 3> growth_integrands(const SpectralField& v, const SpectralField& z, const IParams& p);

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> E_values;
  std::vector<double> term_I, term_II, term_III;
  std::vector<double> residual;  // E(t) - E(0) - (I + II + III)
  double max_relative_residual() const;  // max |residual| / max(1, E)
};

// Throws std::invalid_argument when the trajectory was not produced with src.
EnergyTrace energy_growth_decomposition(const Trajectory& v_traj, const ZSource& src, const IParams& p);

// |<d_x Iw, I(w^2) - (Iw)^2>| / ||Iw||_{H^1}^3
double commutator_v2_probe(const SpectralField& w, const IParams& p);
// ||I(wz) - (Iw)(Iz)||_{L^2} / (||Iw||_{H^1} ||z||_{W^{alpha - 1/2 - eps, p_int}})
double commutator_vz_probe(const SpectralField& w, const SpectralField& z, const IParams& p, double alpha,
                           double p_int, double eps = 0.01);
// p_int = 1/s for s <= 1/2 and 1/(1-s) above.
double default_p_int(double s);

// Random field with coefficients g_n <n>^{-s-1/2} on 1 <= n <= M, unit H^s norm.
SpectralField random_probe_field(int M, double s, std::uint64_t seed);
// Coherent sine-phase field concentrated on the frequency block where the
// commutator estimate is sharp, plus a low mode; variant selects the block.
SpectralField adversarial_probe_field(double N, int M, int variant, std::uint64_t seed);

struct ProbeScanRow {
  double N = 0.0;
  double max_ratio = 0.0;
  double max_random = 0.0;
  double max_adversarial = 0.0;
};

struct ProbeScan {
  std::vector<ProbeScanRow> rows;
  double slope = 0.0;
};

// Max of commutator_v2_probe over random and adversarial fields at M = 4N.
ProbeScan commutator_v2_scan(const std::vector<double>& N_list, double s, int n_random, std::uint64_t seed,
                             int threads = 1);
// Max of commutator_vz_probe with gaussian z of regularity alpha at M = 4N.
ProbeScan commutator_vz_scan(const std::vector<double>& N_list, double s, double alpha, int n_samples,
                             std::uint64_t seed, int threads = 1);

struct IzMomentReport {
  double N = 0.0;
  double p_int = 2.0;
  double moment = 0.0;    // E ||Iz||_{L^p}^p
  double stderr_ = 0.0;
  double norm = 0.0;      // (E ||Iz||_{L^p}^p)^{1/p}
  double ratio = 0.0;     // norm / (p^{1/2} phi_{2 alpha}(N)^{1/2})
  double exact_l2 = 0.0;  // sum m^2 <n>^{-2 alpha} E|g_n|^2 (the p = 2 moment)
};

IzMomentReport iz_moment_check(double alpha, const IParams& p, double p_int, int n_samples, int M_grid,
                               std::uint64_t seed, Family family = Family::gaussian, int threads = 1);

// Bound on f(t) from f' <= a f + b f^gamma, f(0) = c:
//   f^{1-gamma}(t) <= c^{1-gamma} e^{(1-gamma) a t} + (b/a)(e^{(1-gamma) a t} - 1)
double gronwall_bound(double c, double a, double b, double gamma, double t);
// Time at which the bound reaches the ceiling (0 if c already exceeds it).
double gronwall_crossing_time(double c, double a, double b, double gamma, double ceiling);

struct PredictorConstants {
  double C_energy = 1.0;   // a = C_energy * phi_{2 alpha}(N)^{1/2} * Lambda
  double C_forcing = 1.0;  // b = C_forcing * K * N^{1 - 2 alpha}
  double C_ceiling = 1.0;  // energy ceiling C_ceiling * N^2
};

// Lower bound on the time for E(Iv) to reach the ceiling, in the form
// 2 log(1 + a E*^{1/2} / b) / a.
double blowup_time_predictor(double K, double Lambda, double N, double alpha, double s,
                             const PredictorConstants& c = {});

struct GronwallCheck {
  double a = 0.0, b = 0.0, ceiling = 0.0;
  double C2 = 0.0, C4 = 0.0, z_w_sup = 0.0, iz_l2 = 0.0, K2 = 0.0;
  double observed_time = 0.0;
  double predicted_time = 0.0;
  bool reached = false;
  bool pass = false;
};

// Calibrates a, b from the probe constants (raised to the values measured
// along the trajectory itself) and compares the observed ceiling crossing of
// E(Iv) with the Gronwall prediction. ceiling <= 0 uses half the trace max.
GronwallCheck gronwall_trajectory_check(const Trajectory& v_traj, const EnergyTrace& trace, const IParams& p,
                                        double alpha, double C2_probe, double C4_probe, double ceiling = 0.0);

}  // namespace bbm

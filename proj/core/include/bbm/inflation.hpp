#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bbm/solver.hpp"
#include "bbm/spectral.hpp"

namespace bbm {

struct TreeNode {
  std::shared_ptr<const TreeNode> left, right;  // both null for a terminal node

  bool terminal() const { return !left; }
  int internal_count() const;
  int terminal_count() const;
  // "*" for a terminal node, "(LR)" for an internal node
  std::string serialize() const;
};

using Tree = std::shared_ptr<const TreeNode>;

inline constexpr int kMaxTreeOrder = 10;

// All ordered binary trees with j internal nodes; throws for j > kMaxTreeOrder.
std::vector<Tree> enumerate_trees(int j);

// I[u1, u2](t) = -(i/2) int_0^t S(t - t') phi(D)(u1 u2)(t') dt' by Simpson
// quadrature on the shared time grid; t must be a grid node. Products are
// truncated to the band of the trajectories.
SpectralField duhamel_bilinear(const Trajectory& u1, const Trajectory& u2, double t);

struct XiOptions {
  double dt_quad = 1e-3;  // rounded down so that t is an even number of steps
  int M_band = -1;        // Galerkin band; < 0 keeps u0.M()
  bool use_tree_sum = false;
};

// Xi_0 .. Xi_{j_max} at time t through the recursion
// Xi_j = sum_{j1 + j2 = j - 1} I[Xi_{j1}, Xi_{j2}], or through the explicit
// sum over trees when opt.use_tree_sum is set.
std::vector<SpectralField> xi_series(const SpectralField& u0, double t, int j_max, const XiOptions& opt = {});
// Same, returning each Xi_j on the whole quadrature grid (index [j][k]).
std::vector<std::vector<SpectralField>> xi_series_nodes(const SpectralField& u0, double t, int j_max,
                                                        const XiOptions& opt, std::vector<double>* times = nullptr);
// true when t * ||u0||_{FL^1} lies inside the contraction regime.
bool xi_series_converges(const SpectralField& u0, double t);

// theta(xi, xi1) = phi(xi1) + phi(xi - xi1) - phi(xi) in closed rational form.
double phase_theta(long xi, long xi1);
double phase_theta_definition(long xi, long xi1);
// (e^{-it theta} - 1) / theta with the continuous extension at theta = 0.
cplx phase_kernel(double theta, double t);

// Xi_1(phi)(t) from the frequency double sum; out_M < 0 keeps 2 * phi.M().
SpectralField xi1_exact(const SpectralField& phi_data, double t, int out_M = -1);

enum class InflationCase { one = 1, two = 2, three = 3 };

struct Prefactors {
  double A = 1.0, R = 1.0, T = 1.0;
};

struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct InflationParams {
  double N = 0, A = 0, R = 0, T = 0;
  double s = -1.0, p = 2.0;
  int n_target = 2;
  InflationCase inflation_case = InflationCase::one;
  double delta = 0.0, theta = 0.0;
  Prefactors prefactors;

  // (i) R A^{1/p} N^s < 1/n; (ii) T R A < 0.1; (iii) T R^2 A > n;
  // (iv) T R A f_p(A) < 0.1; (v) ||u0||_{FL^p} < 0.1 R f_p(A); (vi) T < A/10 and A < N/8
  std::vector<Condition> conditions(double u0_flp = 0.0) const;
  bool feasible(double u0_flp = 0.0) const;
};

double f_p_of_A(double A, double s, double p);

InflationCase classify_case(double s, double p);

struct SelectOptions {
  double delta = 0.0;        // 0 picks the case default
  double fixed_N = 0.0;      // > 0 skips the search and reports the conditions at this N
  Prefactors prefactors;
  int max_log2_N = 200;
};

// Case recipe for (A, R, T) as functions of N.
InflationParams inflation_params_at(double s, double p, int n, double N, double delta, double theta,
                                    const Prefactors& pre);

// Throws std::runtime_error naming the binding condition when no power of two
// up to 2^max_log2_N satisfies all conditions.
InflationParams select_parameters(double s, double p, int n, const SelectOptions& opt = {});

// Amplitude R on the integers of +-N + [-2 floor(A), 2 floor(A)].
SpectralField build_inflation_data(const InflationParams& params, int M_grid);

struct InflationReport {
  InflationParams params;
  std::vector<Condition> conditions;
  double perturbation_norm = 0.0;  // ||phi_n||_{FL^{s,p}}
  double initial_norm = 0.0;       // ||u0 + phi_n||_{FL^{s,p}}
  double final_norm = 0.0;         // ||u(T)||_{FL^{s,p}}
  double xi1_norm = 0.0;           // ||Xi_1(u0 + phi_n)(T)||
  double prediction = 0.0;         // ||Xi_0 + Xi_1||
  double remainder = 0.0;          // ||u(T) - Xi_0 - Xi_1||
  double remainder_bound = 0.0;    // T^2 R^3 A^2 f_p(A)
  double amplification = 0.0;      // final_norm / perturbation_norm
  double prediction_ratio = 0.0;   // prediction / final_norm
  bool dominance = false;          // remainder <= xi1_norm / 2
  bool blowup = false;
};

InflationReport run_inflation_experiment(const SpectralField& u0, const InflationParams& params,
                                         const SolverConfig& cfg);

double bilinear_flp_ratio(const SpectralField& u, const SpectralField& v, double s, double p);

struct BilinearProbeRow {
  double level = 0.0;  // M_grid (random) or A (adversarial)
  double ratio = 0.0;
};

struct BilinearProbeReport {
  std::vector<BilinearProbeRow> rows;
  double slope = 0.0;
  double spread = 0.0;  // max / min ratio over the rows
};

// Random mode: max ratio over `trials` random pairs at each M in levels.
// Adversarial mode: u = v = indicator of [-A, A] for each A in levels.
BilinearProbeReport bilinear_flp_probe(double s, double p, int trials, bool adversarial,
                                       const std::vector<double>& levels, std::uint64_t seed = 1);

}  // namespace bbm

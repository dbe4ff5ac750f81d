#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bbm/random_data.hpp"
#include "bbm/spectral.hpp"

namespace bbm {

enum class Scheme { if_rk4, picard };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct SolverConfig {
  double dt = 1e-3;
  double T_final = 1.0;
  int M_grid = 256;
  Scheme scheme = Scheme::if_rk4;
  double picard_tol = 1e-12;
  int picard_max_iter = 200;
  int save_every = 1;  // keep every k-th step (the final state is always kept)

  void validate() const;  // throws std::invalid_argument
};

// Source of the rough linear part z(t) = S(t) z0 in the splitting u = z + v.
struct ZSource {
  bool exact_linear = true;  // z0 = u0z itself
  MollifierKernel kernel;    // otherwise z0 = mollify(u0z, kernel, k)
  double k = 0.0;

  static ZSource exact() { return {}; }
  static ZSource mollified(MollifierKernel kernel, double k) { return {false, std::move(kernel), k}; }
  std::string describe() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  SolverConfig config;
  bool blowup = false;
  // Present for trajectories of v from integrate_perturbed.
  bool has_z = false;
  ZSource z_source;
  SpectralField z0;

  SpectralField z_at(double t) const;
};

class PicardDivergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

SpectralField linear_propagator(const SpectralField& f, double t);

// Right-hand side of u_t = -i phi(D) u - (i/2) N(u) minus its linear part.
SpectralField bbm_nonlinear_rhs(const SpectralField& u);

Trajectory integrate_bbm(const SpectralField& u0, const SolverConfig& cfg);

SpectralField make_z0(const ZSource& src, const SpectralField& u0z, int M_grid);
Trajectory integrate_perturbed(const ZSource& src, const SpectralField& u0z, const SolverConfig& cfg);

// Largest time for which the Duhamel map is guaranteed to contract on the
// ball of radius 2||u0||_{FL^1}: T * ||u0||_{FL^1} <= kPicardContraction.
inline constexpr double kPicardContraction = 0.5;

// Fixed point of the Duhamel map on [0, T] with Simpson-rule time quadrature
// on cfg.dt (rounded to an even number of intervals). Throws PicardDivergence.
SpectralField picard_solve(const SpectralField& u0, double T, const SolverConfig& cfg);
// The first n_iter + 1 Picard iterates evaluated at time T (iterate 0 = S(T)u0).
std::vector<SpectralField> picard_iterates(const SpectralField& u0, double T, int n_iter, const SolverConfig& cfg);

double energy(const SpectralField& u);

}  // namespace bbm

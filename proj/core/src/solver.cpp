#include "bbm/solver.hpp"

#include <algorithm>
#include <cmath>

#include "bbm/nonlinearity.hpp"
#include "bbm/quadrature.hpp"

namespace bbm {

std::string to_string(Scheme s) { return s == Scheme::if_rk4 ? "if-rk4" : "picard"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "if-rk4") return Scheme::if_rk4;
  if (name == "picard") return Scheme::picard;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
  if (!(T_final >= 0.0)) throw std::invalid_argument("solver: T_final must be nonnegative");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("solver: picard_tol must be positive");
  if (M_grid < 1) throw std::invalid_argument("solver: M_grid must be positive");
  if (save_every < 1) throw std::invalid_argument("solver: save_every must be positive");
  if (picard_max_iter < 1) throw std::invalid_argument("solver: picard_max_iter must be positive");
}

std::string ZSource::describe() const {
  return exact_linear ? std::string("exact-linear") : kernel.name + ":" + std::to_string(k);
}

SpectralField Trajectory::z_at(double t) const { return linear_propagator(z0, t); }

SpectralField linear_propagator(const SpectralField& f, double t) {
  if (t == 0.0) return f;
  return apply_real_symbol(f, [t](int n) { return std::polar(1.0, -t * phi(n)); });
}

SpectralField bbm_nonlinear_rhs(const SpectralField& u) {
  SpectralField r = renormalized_nonlinearity(u, u.M());
  for (auto& c : r.mutable_coeffs()) c *= cplx(0.0, -0.5);
  return r;
}

namespace {

bool finite(const SpectralField& f) {
  for (const auto& c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// w(tau) = S(-tau) u(t0 + tau); dw/dtau = S(-tau) Nrhs(S(tau) w + z(t0 + tau)).
SpectralField if_rk4_step(const SpectralField& u, double h, const SpectralField* z0, double t0) {
  auto F = [&](double tau, const SpectralField& w) {
    SpectralField arg = linear_propagator(w, tau);
    if (z0) arg += linear_propagator(*z0, t0 + tau);
    return linear_propagator(bbm_nonlinear_rhs(arg), -tau);
  };
  SpectralField k1 = F(0.0, u);
  SpectralField k2 = F(0.5 * h, u + (0.5 * h) * k1);
  SpectralField k3 = F(0.5 * h, u + (0.5 * h) * k2);
  SpectralField k4 = F(h, u + h * k3);
  SpectralField w = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return linear_propagator(w, h);
}

// Duhamel fixed point on [0, T] for the forced equation, returning all node values.
std::vector<SpectralField> picard_nodes(const SpectralField& u0, double T, const SolverConfig& cfg,
                                        const SpectralField* z0, double t0, int fixed_iter,
                                        std::vector<SpectralField>* iterates_at_T) {
  int n = std::max(2, static_cast<int>(std::ceil(T / cfg.dt - 1e-9)));
  if (n % 2) ++n;
  double h = T / n;
  std::vector<SpectralField> U(n + 1);
  for (int k = 0; k <= n; ++k) U[k] = linear_propagator(u0, k * h);
  if (iterates_at_T) iterates_at_T->push_back(U[n]);
  if (T == 0.0) return U;
  double first_diff = 0.0;
  int max_iter = fixed_iter >= 0 ? fixed_iter : cfg.picard_max_iter;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<SpectralField> G(n + 1);
    for (int k = 0; k <= n; ++k) {
      SpectralField arg = U[k];
      if (z0) arg += linear_propagator(*z0, t0 + k * h);
      G[k] = linear_propagator(bbm_nonlinear_rhs(arg), -k * h);
    }
    std::vector<SpectralField> Q = cumulative_integral(G, h);
    double diff = 0.0, scale = 1.0;
    for (int k = 0; k <= n; ++k) {
      SpectralField next = linear_propagator(u0 + Q[k], k * h);
      if (!finite(next)) throw PicardDivergence("picard: non-finite iterate (time interval too long)");
      diff = std::max(diff, sobolev_norm(next - U[k], 1.0));
      scale = std::max(scale, sobolev_norm(next, 1.0));
      U[k] = std::move(next);
    }
    if (iterates_at_T) iterates_at_T->push_back(U[n]);
    if (fixed_iter >= 0) continue;
    if (diff < cfg.picard_tol * scale) return U;
    if (it == 0) first_diff = diff;
    if (diff > 1e6 * first_diff) throw PicardDivergence("picard: iterates diverge (time interval too long)");
  }
  if (fixed_iter >= 0) return U;
  throw PicardDivergence("picard: no convergence within " + std::to_string(cfg.picard_max_iter) +
                         " iterations (time interval too long)");
}

Trajectory evolve(const SpectralField& start, const SolverConfig& cfg, const SpectralField* z0) {
  cfg.validate();
  Trajectory tr;
  tr.config = cfg;
  SpectralField u = start.resized(cfg.M_grid);
  tr.times.push_back(0.0);
  tr.states.push_back(u);
  long n_steps = static_cast<long>(std::ceil(cfg.T_final / cfg.dt - 1e-9));
  double t = 0.0;
  for (long step = 1; step <= n_steps; ++step) {
    double t_next = step == n_steps ? cfg.T_final : step * cfg.dt;
    double h = t_next - t;
    if (cfg.scheme == Scheme::if_rk4) {
      u = if_rk4_step(u, h, z0, t);
    } else {
      SolverConfig inner = cfg;
      inner.dt = h / 4.0;
      try {
        u = picard_nodes(u, h, inner, z0, t, -1, nullptr).back();
      } catch (const PicardDivergence&) {
        tr.blowup = true;
        return tr;
      }
    }
    t = t_next;
    if (!finite(u)) {
      tr.blowup = true;
      return tr;
    }
    if (step % cfg.save_every == 0 || step == n_steps) {
      tr.times.push_back(t);
      tr.states.push_back(u);
    }
  }
  return tr;
}

}  // namespace

Trajectory integrate_bbm(const SpectralField& u0, const SolverConfig& cfg) { return evolve(u0, cfg, nullptr); }

SpectralField make_z0(const ZSource& src, const SpectralField& u0z, int M_grid) {
  SpectralField z = src.exact_linear ? u0z : mollify(u0z, src.kernel, src.k);
  return z.resized(M_grid);
}

Trajectory integrate_perturbed(const ZSource& src, const SpectralField& u0z, const SolverConfig& cfg) {
  SpectralField z0 = make_z0(src, u0z, cfg.M_grid);
  Trajectory tr = evolve(SpectralField(cfg.M_grid), cfg, &z0);
  tr.has_z = true;
  tr.z_source = src;
  tr.z0 = std::move(z0);
  return tr;
}

SpectralField picard_solve(const SpectralField& u0, double T, const SolverConfig& cfg) {
  cfg.validate();
  if (u0.is_zero()) return u0;
  return picard_nodes(u0, T, cfg, nullptr, 0.0, -1, nullptr).back();
}

std::vector<SpectralField> picard_iterates(const SpectralField& u0, double T, int n_iter, const SolverConfig& cfg) {
  cfg.validate();
  std::vector<SpectralField> out;
  picard_nodes(u0, T, cfg, nullptr, 0.0, n_iter, &out);
  return out;
}

double energy(const SpectralField& u) {
  double s = sobolev_norm(u, 1.0);
  return 0.5 * s * s;
}

}  // namespace bbm

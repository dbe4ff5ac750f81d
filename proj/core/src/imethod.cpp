#include "bbm/imethod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bbm/parallel.hpp"
#include "bbm/quadrature.hpp"
#include "bbm/rng.hpp"

namespace bbm {

void IParams::validate() const {
  if (!(N >= 1.0)) throw std::invalid_argument("IParams: N must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("IParams: s must lie in (0, 1)");
}

double i_multiplier(double n, const IParams& p) {
  double a = std::abs(n);
  if (a <= p.N) return 1.0;
  return std::pow(p.N / a, 1.0 - p.s);
}

SpectralField apply_I(const SpectralField& f, const IParams& p) {
  return apply_real_symbol(f, [&p](int n) { return i_multiplier(n, p); });
}

double modified_energy(const SpectralField& v, const IParams& p) { return energy(apply_I(v, p)); }

cplx symmetrized_multiplier(long n1, long n2, long n3, const IParams& p) {
  if (n1 + n2 + n3 != 0) throw std::invalid_argument("symmetrized_multiplier: need n1 + n2 + n3 = 0");
  double s = 0.0;
  for (long n : {n1, n2, n3}) {
    double m = i_multiplier(n, p);
    s += n * m * m;
  }
  return cplx(0.0, s / 3.0);
}

cplx symmetrized_multiplier_numeric(long n1, long n2, long n3, const IParams& p) {
  if (n1 + n2 + n3 != 0) throw std::invalid_argument("symmetrized_multiplier: need n1 + n2 + n3 = 0");
  long n[3] = {n1, n2, n3};
  int perm[3] = {0, 1, 2};
  cplx acc(0.0, 0.0);
  do {
    double m1 = i_multiplier(n[perm[0]], p), m2 = i_multiplier(n[perm[1]], p), m3 = i_multiplier(n[perm[2]], p);
    acc += cplx(0.0, double(n[perm[2]]) * m3 * (m3 - m1 * m2));
  } while (std::next_permutation(perm, perm + 3));
  return acc / 6.0;
}

namespace {

SpectralField dx(const SpectralField& f) {
  return apply_real_symbol(f, [](int n) { return cplx(0.0, double(n)); });
}

}  // namespace

std::array<double, 3> growth_integrands(const SpectralField& v, const SpectralField& z, const IParams& p) {
  int M = v.M();
  SpectralField Iv = apply_I(v, p);
  SpectralField dIv = dx(Iv);
  SpectralField c1 = apply_I(product(v, v, M), p) - product(Iv, Iv, M);
  SpectralField zz = product(z, z, M);
  zz.set(0, 0.0);
  SpectralField vz = product(v, z, M);
  return {0.5 * inner(dIv, c1), 0.5 * inner(dIv, apply_I(zz, p)), inner(dIv, apply_I(vz, p))};
}

double EnergyTrace::max_relative_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i)
    r = std::max(r, std::abs(residual[i]) / std::max(1.0, E_values[i]));
  return r;
}

EnergyTrace energy_growth_decomposition(const Trajectory& v_traj, const ZSource& src, const IParams& p) {
  p.validate();
  if (!v_traj.has_z || v_traj.z_source.describe() != src.describe())
    throw std::invalid_argument("energy_growth_decomposition: trajectory was not produced with z_source " +
                                src.describe());
  EnergyTrace tr;
  tr.times = v_traj.times;
  std::size_t n = v_traj.states.size();
  std::vector<double> r1(n), r2(n), r3(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SpectralField& v = v_traj.states[k];
    tr.E_values.push_back(modified_energy(v, p));
    auto r = growth_integrands(v, v_traj.z_at(v_traj.times[k]), p);
    r1[k] = r[0];
    r2[k] = r[1];
    r3[k] = r[2];
  }
  tr.term_I = cumulative_integral_on_grid(r1, tr.times);
  tr.term_II = cumulative_integral_on_grid(r2, tr.times);
  tr.term_III = cumulative_integral_on_grid(r3, tr.times);
  for (std::size_t k = 0; k < n; ++k)
    tr.residual.push_back(tr.E_values[k] - tr.E_values[0] - (tr.term_I[k] + tr.term_II[k] + tr.term_III[k]));
  return tr;
}

double commutator_v2_probe(const SpectralField& w, const IParams& p) {
  if (w.is_zero()) throw std::invalid_argument("commutator_v2_probe: w must be nonzero");
  int M = w.M();
  SpectralField Iw = apply_I(w, p);
  SpectralField c = apply_I(product(w, w, M), p) - product(Iw, Iw, M);
  double den = sobolev_norm(Iw, 1.0);
  return std::abs(inner(dx(Iw), c)) / (den * den * den);
}

double commutator_vz_probe(const SpectralField& w, const SpectralField& z, const IParams& p, double alpha,
                           double p_int, double eps) {
  SpectralField Iw = apply_I(w, p);
  SpectralField Iz = apply_I(z, p);
  SpectralField c = apply_I(product(w, z), p) - product(Iw, Iz);
  double zw = wsp_norm(z, alpha - 0.5 - eps, p_int, nice_fft_size(4 * z.M() + 4));
  return sobolev_norm(c, 0.0) / (sobolev_norm(Iw, 1.0) * zw);
}

double default_p_int(double s) { return s <= 0.5 ? 1.0 / s : 1.0 / (1.0 - s); }

SpectralField random_probe_field(int M, double s, std::uint64_t seed) {
  SpectralField f(M);
  for (int n = 1; n <= M; ++n) f.set(n, draw_g(Family::gaussian, seed, n) * std::pow(japanese(n), -s - 0.5));
  double nrm = sobolev_norm(f, s);
  return nrm > 0.0 ? f * (1.0 / nrm) : f;
}

SpectralField adversarial_probe_field(double N, int M, int variant, std::uint64_t seed) {
  static const double lo_f[4] = {0.5, 1.0, 0.25, 1.0};
  static const double hi_f[4] = {2.0, 4.0, 2.0, 2.0};
  int v = ((variant % 4) + 4) % 4;
  long lo = std::max<long>(2, std::lround(lo_f[v] * N));
  long hi = std::min<long>(M, std::lround(hi_f[v] * N));
  SpectralField f(M);
  for (long n = lo; n <= hi; ++n) f.set(n, cplx(0.0, -1.0));
  double low = counter_uniform(seed, 0, 11) * double(hi - lo + 1);
  f.set(1, cplx(0.0, -low));
  return f;
}

namespace {

ProbeScanRow scan_row(double N, int n_random, int n_adv, const std::function<double(int, bool)>& probe,
                      int threads) {
  std::vector<double> r(n_random), a(n_adv);
  parallel_for(n_random + n_adv, threads, [&](std::size_t i) {
    if (int(i) < n_random) r[i] = probe(int(i), false);
    else a[i - n_random] = probe(int(i) - n_random, true);
  });
  ProbeScanRow row;
  row.N = N;
  row.max_random = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  row.max_adversarial = a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
  row.max_ratio = std::max(row.max_random, row.max_adversarial);
  return row;
}

void fit_scan(ProbeScan& scan) {
  std::vector<double> x, y;
  for (const auto& r : scan.rows) {
    x.push_back(r.N);
    y.push_back(r.max_ratio);
  }
  if (x.size() >= 2) scan.slope = fit_loglog(x, y).slope;
}

constexpr int kAdversarialPerVariant = 8;

}  // namespace

ProbeScan commutator_v2_scan(const std::vector<double>& N_list, double s, int n_random, std::uint64_t seed,
                             int threads) {
  ProbeScan scan;
  for (double N : N_list) {
    IParams p{N, s};
    int M = static_cast<int>(4 * N);
    std::uint64_t sN = member_seed(seed, static_cast<std::uint64_t>(N));
    scan.rows.push_back(scan_row(
        N, n_random, 4 * kAdversarialPerVariant,
        [&](int i, bool adv) {
          SpectralField w = adv ? adversarial_probe_field(N, M, i % 4, member_seed(sN ^ 0xadull, i))
                                : random_probe_field(M, s, member_seed(sN, i));
          return commutator_v2_probe(w, p);
        },
        threads));
  }
  fit_scan(scan);
  return scan;
}

ProbeScan commutator_vz_scan(const std::vector<double>& N_list, double s, double alpha, int n_samples,
                             std::uint64_t seed, int threads) {
  ProbeScan scan;
  double p_int = default_p_int(s);
  for (double N : N_list) {
    IParams p{N, s};
    int M = static_cast<int>(4 * N);
    std::uint64_t sN = member_seed(seed, static_cast<std::uint64_t>(N));
    scan.rows.push_back(scan_row(
        N, n_samples, 4 * kAdversarialPerVariant,
        [&](int i, bool adv) {
          std::uint64_t si = member_seed(adv ? sN ^ 0xadull : sN, i);
          SpectralField w = adv ? adversarial_probe_field(N, M, i % 4, si) : random_probe_field(M, s, si);
          SpectralField z = sample_initial_data({Family::gaussian, alpha, M, member_seed(si, 7), {}});
          return commutator_vz_probe(w, z, p, alpha, p_int);
        },
        threads));
  }
  fit_scan(scan);
  return scan;
}

IzMomentReport iz_moment_check(double alpha, const IParams& p, double p_int, int n_samples, int M_grid,
                               std::uint64_t seed, Family family, int threads) {
  p.validate();
  if (p_int < 2.0) throw std::invalid_argument("iz_moment_check: p_int must be >= 2");
  IzMomentReport rep;
  rep.N = p.N;
  rep.p_int = p_int;
  std::vector<double> terms(M_grid + 1);
  for (int n = 0; n <= M_grid; ++n) {
    double m = i_multiplier(n, p);
    terms[n] = (n == 0 ? 1.0 : 2.0) * m * m * std::pow(japanese(n), -2.0 * alpha) * variance_weight(family, n);
  }
  rep.exact_l2 = pairwise_sum(terms);
  int L = nice_fft_size(4 * M_grid + 4);
  std::vector<double> vals(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    SpectralField z = sample_initial_data({family, alpha, M_grid, member_seed(seed, i), {}});
    std::vector<double> g = to_grid(apply_I(z, p), L);
    for (auto& x : g) x = std::pow(std::abs(x), p_int);
    vals[i] = pairwise_sum(g) / L;
  });
  MeanErr m = mean_stderr(vals);
  rep.moment = m.mean;
  rep.stderr_ = m.stderr_;
  rep.norm = std::pow(m.mean, 1.0 / p_int);
  rep.ratio = rep.norm / (std::sqrt(p_int) * std::sqrt(phi_beta(static_cast<long>(p.N), 2.0 * alpha)));
  return rep;
}

double gronwall_bound(double c, double a, double b, double gamma, double t) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gronwall_bound: gamma must lie in [0, 1)");
  double q = 1.0 - gamma;
  double x = q * a * t;
  double forcing = a < 1e-8 ? b * q * t * (1.0 + x / 2.0 + x * x / 6.0) : (b / a) * std::expm1(x);
  double g = std::pow(c, q) * std::exp(x) + forcing;
  return std::pow(g, 1.0 / q);
}

double gronwall_crossing_time(double c, double a, double b, double gamma, double ceiling) {
  double q = 1.0 - gamma;
  double g0 = std::pow(c, q), gs = std::pow(ceiling, q);
  if (g0 >= gs) return 0.0;
  if (a < 1e-8) {
    double rate = q * (a * g0 + b);
    return rate > 0.0 ? (gs - g0) / rate : kInf;
  }
  return std::log1p((gs - g0) / (g0 + b / a)) / (q * a);
}

double blowup_time_predictor(double K, double Lambda, double N, double alpha, double s,
                             const PredictorConstants& c) {
  if (!(K > 0 && Lambda > 0 && N > 0 && alpha > 0 && s > 0))
    throw std::invalid_argument("blowup_time_predictor: inputs must be positive");
  double a = c.C_energy * std::sqrt(phi_beta(static_cast<long>(N), 2.0 * alpha)) * Lambda;
  double b = c.C_forcing * K * std::pow(N, 1.0 - 2.0 * alpha);
  double ceiling = c.C_ceiling * N * N;
  return gronwall_crossing_time(0.0, a, b, 0.5, ceiling);
}

GronwallCheck gronwall_trajectory_check(const Trajectory& v_traj, const EnergyTrace& trace, const IParams& p,
                                        double alpha, double C2_probe, double C4_probe, double ceiling) {
  GronwallCheck g;
  double p_int = default_p_int(p.s);
  double emax = *std::max_element(trace.E_values.begin(), trace.E_values.end());
  g.ceiling = ceiling > 0.0 ? ceiling : 0.5 * emax;
  g.C2 = C2_probe;
  g.C4 = C4_probe;
  for (std::size_t k = 0; k < v_traj.states.size(); ++k) {
    const SpectralField& v = v_traj.states[k];
    SpectralField z = v_traj.z_at(v_traj.times[k]);
    if (!v.is_zero()) {
      g.C2 = std::max(g.C2, commutator_v2_probe(v, p));
      g.C4 = std::max(g.C4, commutator_vz_probe(v, z, p, alpha, p_int));
    }
    g.z_w_sup = std::max(g.z_w_sup, wsp_norm(z, alpha - 0.51, p_int, nice_fft_size(4 * z.M() + 4)));
    g.iz_l2 = std::max(g.iz_l2, sobolev_norm(apply_I(z, p), 0.0));
    SpectralField zz = product(z, z, z.M());
    zz.set(0, 0.0);
    g.K2 = std::max(g.K2, sobolev_norm(apply_I(zz, p), 0.0));
  }
  const double C_alg = 2.0 * std::sqrt(M_PI / std::tanh(M_PI));
  g.a = std::sqrt(2.0) * g.C2 * std::sqrt(g.ceiling) + 2.0 * g.C4 * g.z_w_sup + C_alg * g.iz_l2;
  g.b = g.K2 / std::sqrt(2.0);
  g.predicted_time = gronwall_crossing_time(trace.E_values[0], g.a, g.b, 0.5, g.ceiling);
  for (std::size_t k = 1; k < trace.E_values.size(); ++k) {
    if (trace.E_values[k] >= g.ceiling) {
      double e0 = trace.E_values[k - 1], e1 = trace.E_values[k];
      double f = e1 > e0 ? (g.ceiling - e0) / (e1 - e0) : 1.0;
      g.observed_time = trace.times[k - 1] + f * (trace.times[k] - trace.times[k - 1]);
      g.reached = true;
      break;
    }
  }
  g.pass = g.reached && g.observed_time >= g.predicted_time;
  return g;
}

}  // namespace bbm

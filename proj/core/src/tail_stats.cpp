#include "bbm/tail_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bbm/nonlinearity.hpp"
#include "bbm/parallel.hpp"
#include "bbm/rng.hpp"
#include "bbm/solver.hpp"
#include "bbm/stats.hpp"

namespace bbm {

namespace {

void check_grid(const std::vector<double>& t, std::size_t n_values) {
  if (t.size() < 3) throw std::invalid_argument("holder_seminorm: need at least 3 time points");
  if (t.size() != n_values) throw std::invalid_argument("holder_seminorm: size mismatch");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("holder_seminorm: degenerate time grid");
}

template <class D>
double holder_from_distance(const std::vector<double>& t, double gamma, D&& d) {
  double best = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) best = std::max(best, d(i, j) / std::pow(t[j] - t[i], gamma));
  return best;
}

std::vector<std::vector<double>> distance_matrix(const FieldPath& path, const NormDescriptor& norm) {
  std::size_t n = path.times.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = evaluate_norm(path.fields[j] - path.fields[i], norm);
  return d;
}

}  // namespace

double holder_seminorm(const PathSample& path, double gamma) {
  check_grid(path.times, path.values.size());
  return holder_from_distance(path.times, gamma,
                              [&](std::size_t i, std::size_t j) { return std::abs(path.values[j] - path.values[i]); });
}

double holder_seminorm(const FieldPath& path, double gamma, const NormDescriptor& norm) {
  check_grid(path.times, path.fields.size());
  auto d = distance_matrix(path, norm);
  return holder_from_distance(path.times, gamma, [&](std::size_t i, std::size_t j) { return d[i][j]; });
}

double grr_constant(double beta, double q) {
  if (!(q * beta > 1.0)) throw std::invalid_argument("grr_constant: need q beta > 1");
  return std::pow(32.0 * (q * beta + 1.0) / (q * beta - 1.0), q);
}

double kolmogorov_moment_bound(double K, double eta, double beta, double q, double T) {
  double e = q * beta - eta;
  if (!(e < 1.0)) return kInf;
  return K * grr_constant(beta, q) * 2.0 * std::pow(T, 2.0 - e) / ((1.0 - e) * (2.0 - e));
}

GrrCheck grr_path_check(const FieldPath& path, double beta, double q, const NormDescriptor& norm) {
  check_grid(path.times, path.fields.size());
  const auto& t = path.times;
  std::size_t n = t.size();
  auto d = distance_matrix(path, norm);
  // trapezoid cell weights for the double integral over [0, T]^2
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w[i] += 0.5 * (t[i + 1] - t[i]);
    w[i + 1] += 0.5 * (t[i + 1] - t[i]);
  }
  std::vector<double> terms;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) terms.push_back(std::pow(d[i][j], q) / std::pow(std::abs(t[j] - t[i]), q * beta + 1.0) * w[i] * w[j]);
  GrrCheck g;
  double gamma = beta - 1.0 / q;
  g.seminorm = holder_from_distance(t, gamma, [&](std::size_t i, std::size_t j) { return d[i][j]; });
  g.bound = std::pow(grr_constant(beta, q), 1.0 / q) * std::pow(pairwise_sum(terms), 1.0 / q);
  g.dominated = g.seminorm <= g.bound;
  return g;
}

std::string to_string(TailObservable o) { return o == TailObservable::z ? "z" : "nz"; }

TailObservable tail_observable_from_string(const std::string& name) {
  if (name == "z") return TailObservable::z;
  if (name == "nz" || name == "N(z)") return TailObservable::nz;
  throw std::invalid_argument("unknown tail observable '" + name + "'");
}

FieldPath observable_path(const TailSpec& spec, double T, std::uint64_t seed) {
  FieldPath path;
  path.seed = seed;
  SpectralField u0 = sample_initial_data({spec.family, spec.alpha, spec.M_grid, seed, {}});
  for (int k = 0; k <= spec.n_time; ++k) {
    double t = T * k / spec.n_time;
    SpectralField z = linear_propagator(u0, t);
    path.times.push_back(t);
    path.fields.push_back(spec.observable == TailObservable::z ? z : renormalized_nonlinearity_real(z, 2 * spec.M_grid));
  }
  return path;
}

double tail_observable_value(const TailSpec& spec, double T, std::uint64_t seed) {
  FieldPath path = observable_path(spec, T, seed);
  double best = 0.0;
  for (const auto& f : path.fields) best = std::max(best, wsp_norm(f, spec.s, kInf, nice_fft_size(4 * f.M() + 4)));
  return best;
}

TailReport tail_report_from_values(std::vector<double> values, int power, std::vector<double> lambda_grid) {
  std::size_t n = values.size();
  if (n < 20) throw std::invalid_argument("tail_check: need at least 20 samples");
  std::sort(values.begin(), values.end());
  TailReport rep;
  rep.power = power;
  rep.median = values[n / 2];
  auto exceed = [&](double lam) {
    return static_cast<std::size_t>(values.end() - std::upper_bound(values.begin(), values.end(), lam));
  };
  if (lambda_grid.empty()) {
    double hi = values[n - 11];
    for (int i = 0; i < 12; ++i) lambda_grid.push_back(rep.median + (hi - rep.median) * i / 11.0);
  } else {
    std::sort(lambda_grid.begin(), lambda_grid.end());
    if (exceed(lambda_grid.back()) < 10)
      throw std::runtime_error("tail_check: fewer than 10 exceedances at the largest lambda; increase n_samples");
  }
  std::vector<double> x1, x2, lx, y, ly;
  for (double lam : lambda_grid) {
    std::size_t k = exceed(lam);
    auto [lo, hi] = wilson_interval(k, n);
    rep.rows.push_back({lam, double(k) / n, lo, hi, k});
    if (k == 0 || k == n || lam <= 0.0) continue;
    double nl = -std::log(double(k) / n);
    x1.push_back(lam);
    x2.push_back(lam * lam);
    y.push_back(nl);
    lx.push_back(std::log(lam));
    ly.push_back(std::log(nl));
  }
  if (y.size() < 3) throw std::runtime_error("tail_check: too few usable lambda levels");
  LinearFit f1 = fit_line(x1, y), f2 = fit_line(x2, y);
  rep.r2_linear = f1.r2;
  rep.r2_quadratic = f2.r2;
  const LinearFit& f = power == 2 ? f2 : f1;
  rep.slope = f.slope;
  rep.r2 = f.r2;
  rep.kappa = fit_line(lx, ly).slope;
  rep.pass = rep.slope > 0.0 && rep.r2 > 0.9 && rep.kappa >= 0.8 * power;
  return rep;
}

TailReport tail_check(const TailSpec& spec, double T, std::vector<double> lambda_grid, int n_samples,
                      std::uint64_t seed, int threads) {
  std::vector<double> vals(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) { vals[i] = tail_observable_value(spec, T, member_seed(seed, i)); });
  return tail_report_from_values(std::move(vals), spec.observable == TailObservable::z ? 2 : 1, std::move(lambda_grid));
}

}  // namespace bbm

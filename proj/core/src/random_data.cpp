#include "bbm/random_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "bbm/parallel.hpp"
#include "bbm/rng.hpp"

namespace bbm {

std::string to_string(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::uniform_phase: return "uniform-phase";
    case Family::custom: return "custom-verified";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "uniform-phase") return Family::uniform_phase;
  if (name == "custom-verified") return Family::custom;
  throw std::invalid_argument("unknown random data family '" + name + "'");
}

cplx draw_g(Family family, std::uint64_t seed, long n) {
  if (n < 0) return std::conj(draw_g(family, seed, -n));
  auto un = static_cast<std::uint64_t>(n);
  switch (family) {
    case Family::gaussian: {
      auto [x, y] = counter_normal_pair(seed, un);
      if (n == 0) return {x, 0.0};
      return {x * std::numbers::sqrt2 / 2.0, y * std::numbers::sqrt2 / 2.0};
    }
    case Family::uniform_phase: {
      if (n == 0) return {0.0, 0.0};
      return std::polar(1.0, 2.0 * std::numbers::pi * counter_uniform(seed, un, 3));
    }
    case Family::custom: break;
  }
  throw std::invalid_argument("draw_g: custom family needs a sampler (use the RandomDataSpec overload)");
}

cplx draw_g(const RandomDataSpec& spec, long n) {
  if (spec.family != Family::custom) return draw_g(spec.family, spec.seed, n);
  if (!spec.custom) throw std::invalid_argument("custom-verified family without a sampler");
  if (n < 0) return std::conj(spec.custom(spec.seed, -n));
  cplx g = spec.custom(spec.seed, n);
  return n == 0 ? cplx(g.real(), 0.0) : g;
}

SpectralField sample_initial_data(const RandomDataSpec& spec) {
  if (spec.M_grid < 1) throw std::invalid_argument("sample_initial_data: M_grid must be >= 1");
  std::vector<cplx> c(static_cast<std::size_t>(spec.M_grid) + 1);
  for (int n = 0; n <= spec.M_grid; ++n) c[n] = draw_g(spec, n) * std::pow(japanese(n), -spec.alpha);
  return SpectralField(std::move(c));
}

double variance_weight(Family family, long n) {
  if (family == Family::uniform_phase && n == 0) return 0.0;
  return 1.0;
}

double abs_moment(Family family, int k) {
  if (family == Family::uniform_phase) return 1.0;
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

MollifierKernel fejer_kernel() {
  return {"fejer", [](double x) { return std::max(0.0, 1.0 - std::abs(x)); }, 1.0};
}

MollifierKernel gaussian_symbol_kernel() {
  return {"gaussian-symbol", [](double x) { return std::exp(-x * x); }, kInf};
}

MollifierKernel dirichlet_kernel() {
  return {"dirichlet", [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; }, 1.0};
}

MollifierKernel kernel_from_string(const std::string& name) {
  if (name == "fejer") return fejer_kernel();
  if (name == "gaussian-symbol") return gaussian_symbol_kernel();
  if (name == "dirichlet") return dirichlet_kernel();
  throw std::invalid_argument("unknown mollifier kernel '" + name + "'");
}

SpectralField mollify(const SpectralField& f, const MollifierKernel& kernel, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("mollify: k must be positive");
  return apply_real_symbol(f, [&](int n) { return kernel.symbol(n / k); });
}

int kernel_extent(const MollifierKernel& kernel, double k) {
  if (std::isfinite(kernel.support)) return static_cast<int>(std::floor(kernel.support * k + 1e-12));
  double xi = 1.0;
  while (std::pow(kernel.symbol(xi), 2) >= 1e-30) xi += 0.25;
  return static_cast<int>(std::ceil(xi * k));
}

double evaluate_norm(const SpectralField& f, const NormDescriptor& norm) {
  switch (norm.space) {
    case NormDescriptor::Space::sobolev: return sobolev_norm(f, norm.s);
    case NormDescriptor::Space::fourier_lebesgue: return fourier_lebesgue_norm(f, norm.s, norm.p);
    case NormDescriptor::Space::wsp: {
      int L = norm.grid_points > 0 ? norm.grid_points : nice_fft_size(8 * f.M() + 8);
      return wsp_norm(f, norm.s, norm.p, L);
    }
  }
  return 0.0;
}

MeanErr estimate_moment(const RandomDataSpec& spec, const NormDescriptor& norm, double q, int n_samples,
                        int threads) {
  if (n_samples < 10) throw std::invalid_argument("estimate_moment: n_samples must be >= 10");
  std::vector<double> vals(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    RandomDataSpec s = spec;
    s.seed = member_seed(spec.seed, i);
    vals[i] = std::pow(evaluate_norm(sample_initial_data(s), norm), q);
  });
  return mean_stderr(vals);
}

double sobolev_second_moment(const RandomDataSpec& spec, double s) {
  std::vector<double> t(static_cast<std::size_t>(spec.M_grid) + 1);
  for (int n = 0; n <= spec.M_grid; ++n)
    t[n] = (n == 0 ? 1.0 : 2.0) * std::pow(japanese(n), 2.0 * s - 2.0 * spec.alpha) * variance_weight(spec.family, n);
  return pairwise_sum(t);
}

MeanErr chaos_ratio(Family family, const std::vector<double>& a, double q, int n_samples, std::uint64_t seed,
                    int threads) {
  long K = static_cast<long>(a.size() / 2);
  std::vector<double> a2(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) a2[i] = a[i] * a[i];
  double l2 = std::sqrt(pairwise_sum(a2));
  std::vector<double> vals(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    std::uint64_t si = member_seed(seed, i);
    cplx x(0.0, 0.0);
    for (long n = -K; n <= K; ++n) x += a[n + K] * draw_g(family, si, n);
    vals[i] = std::pow(std::abs(x), q);
  });
  MeanErr m = mean_stderr(vals);
  double norm_q = std::pow(m.mean, 1.0 / q);
  double denom = std::sqrt(q) * l2;
  return {norm_q / denom, norm_q * m.stderr_ / (q * m.mean) / denom};
}

namespace {

// counts[m] = {#(n = m), #(n = -m)} for m >= 0 (zero mode stored in first)
std::map<long, std::pair<int, int>> group_counts(const std::vector<long>& tuple) {
  std::map<long, std::pair<int, int>> g;
  for (long n : tuple) {
    auto& e = g[n < 0 ? -n : n];
    if (n >= 0) ++e.first;
    else ++e.second;
  }
  return g;
}

double double_factorial_odd(int c) {  // (c-1)!! for even c
  double r = 1.0;
  for (int i = c - 1; i > 1; i -= 2) r *= i;
  return r;
}

}  // namespace

cplx exact_moment(Family family, const std::vector<long>& tuple) {
  double r = 1.0;
  for (const auto& [m, kl] : group_counts(tuple)) {
    if (m == 0) {
      int c = kl.first;
      if (family == Family::uniform_phase) return 0.0;
      if (c % 2) return 0.0;
      r *= double_factorial_odd(c);
      continue;
    }
    if (kl.first != kl.second) return 0.0;
    r *= abs_moment(family, kl.first);
  }
  return r;
}

std::string moment_case(Family family, const std::vector<long>& tuple) {
  (void)family;
  if (tuple.size() % 2) return "odd";
  std::vector<std::string> parts;
  for (const auto& [m, kl] : group_counts(tuple)) {
    if (m == 0) {
      parts.push_back("E[g0^" + std::to_string(kl.first) + "]");
      continue;
    }
    if (kl.first != kl.second) return "unpaired";
    parts.push_back("E|g|^" + std::to_string(2 * kl.first));
  }
  std::sort(parts.begin(), parts.end());
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "*") + p;
  return s;
}

MomentReport moment_table_check(Family family, const std::vector<std::vector<long>>& tuples, int n_samples,
                                std::uint64_t seed, int threads) {
  MomentReport rep;
  rep.family = family;
  rep.n_samples = n_samples;
  std::vector<std::vector<double>> re(tuples.size(), std::vector<double>(n_samples)),
      im(tuples.size(), std::vector<double>(n_samples));
  parallel_for(n_samples, threads, [&](std::size_t i) {
    std::uint64_t si = member_seed(seed, i);
    std::map<long, cplx> cache;
    for (std::size_t t = 0; t < tuples.size(); ++t) {
      cplx p(1.0, 0.0);
      for (long n : tuples[t]) {
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, draw_g(family, si, n)).first;
        p *= it->second;
      }
      re[t][i] = p.real();
      im[t][i] = p.imag();
    }
  });
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    MomentEntry e;
    e.tuple = tuples[t];
    MeanErr r = mean_stderr(re[t]), m = mean_stderr(im[t]);
    e.estimate = {r.mean, m.mean};
    e.stderr_re = r.stderr_;
    e.stderr_im = m.stderr_;
    e.expected = exact_moment(family, tuples[t]);
    e.case_label = moment_case(family, tuples[t]);
    double se = std::hypot(e.stderr_re, e.stderr_im);
    e.pass = std::abs(e.estimate - e.expected) <= 3.0 * se + 1e-12;
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

std::vector<std::vector<long>> default_moment_tuples() {
  return {
      {3, -3},
      {1, 2},
      {1},
      {1, 2, 3},
      {2, -2, 2},
      {1, -1, 1, -1},
      {1, -1, 2, -2},
      {1, 2, 3, 4},
      {1, 1, -1, 2},
      {1, -1, 2, -2, 3},
      {1, 1, 1, -1, -1, -1},
      {1, -1, 1, -1, 2, -2, 5},
      {1, -1, 1, -1, 1, -1, 1, -1},
      {1, 1, 1, -1, -1, -1, 2, -2},
      {1, 1, -1, -1, 2, 2, -2, -2},
      {1, -1, 2, -2, 3, -3, 4, -4},
      {1, 2, 3, 4, 5, 6, 7, 8},
      {1, 1, 1, 1, -1, -1, -1, 2},
  };
}

}  // namespace bbm

#include "bbm/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "bbm/quadrature.hpp"
#include "bbm/random_data.hpp"
#include "bbm/rng.hpp"
#include "bbm/stats.hpp"

namespace bbm {

int TreeNode::internal_count() const { return terminal() ? 0 : 1 + left->internal_count() + right->internal_count(); }

int TreeNode::terminal_count() const { return terminal() ? 1 : left->terminal_count() + right->terminal_count(); }

std::string TreeNode::serialize() const {
  return terminal() ? std::string("*") : "(" + left->serialize() + right->serialize() + ")";
}

std::vector<Tree> enumerate_trees(int j) {
  if (j < 0) throw std::invalid_argument("enumerate_trees: j must be nonnegative");
  if (j > kMaxTreeOrder) throw std::invalid_argument("enumerate_trees: j exceeds the combinatorial guard");
  static std::mutex mu;
  static std::vector<std::vector<Tree>> memo;
  std::lock_guard<std::mutex> lock(mu);
  if (memo.empty()) memo.push_back({std::make_shared<const TreeNode>()});
  while (static_cast<int>(memo.size()) <= j) {
    int k = static_cast<int>(memo.size());
    std::vector<Tree> level;
    for (int j1 = 0; j1 < k; ++j1)
      for (const Tree& l : memo[j1])
        for (const Tree& r : memo[k - 1 - j1]) {
          auto t = std::make_shared<TreeNode>();
          t->left = l;
          t->right = r;
          level.push_back(std::move(t));
        }
    memo.push_back(std::move(level));
  }
  return memo[j];
}

namespace {

SpectralField bilinear_rate(const SpectralField& u1, const SpectralField& u2, int M) {
  SpectralField w = product(u1, u2, M);
  auto& c = w.mutable_coeffs();
  c[0] = 0.0;
  for (int n = 1; n <= M; ++n) c[n] *= cplx(0.0, -0.5 * phi(n));
  return w;
}

// I[U1, U2] at every node of the grid.
std::vector<SpectralField> duhamel_nodes(const std::vector<SpectralField>& U1, const std::vector<SpectralField>& U2,
                                         const std::vector<double>& times, int M) {
  std::size_t n = times.size();
  std::vector<SpectralField> G(n);
  for (std::size_t k = 0; k < n; ++k) G[k] = linear_propagator(bilinear_rate(U1[k], U2[k], M), -times[k]);
  std::vector<SpectralField> Q = cumulative_integral_on_grid(G, times);
  for (std::size_t k = 0; k < n; ++k) Q[k] = linear_propagator(Q[k], times[k]);
  return Q;
}

}  // namespace

SpectralField duhamel_bilinear(const Trajectory& u1, const Trajectory& u2, double t) {
  if (u1.times.size() != u2.times.size()) throw std::invalid_argument("duhamel_bilinear: grid mismatch");
  for (std::size_t k = 0; k < u1.times.size(); ++k)
    if (std::abs(u1.times[k] - u2.times[k]) > 1e-12 * std::max(1.0, std::abs(u1.times[k])))
      throw std::invalid_argument("duhamel_bilinear: grid mismatch");
  std::size_t idx = u1.times.size();
  for (std::size_t k = 0; k < u1.times.size(); ++k)
    if (std::abs(u1.times[k] - t) <= 1e-9 * std::max(1.0, std::abs(t))) idx = k;
  if (idx == u1.times.size()) throw std::invalid_argument("duhamel_bilinear: t is not a node of the time grid");
  int M = std::max(u1.states[0].M(), u2.states[0].M());
  if (idx == 0) return SpectralField(M);
  std::vector<double> times(u1.times.begin(), u1.times.begin() + idx + 1);
  std::vector<SpectralField> a(u1.states.begin(), u1.states.begin() + idx + 1);
  std::vector<SpectralField> b(u2.states.begin(), u2.states.begin() + idx + 1);
  return duhamel_nodes(a, b, times, M).back();
}

std::vector<std::vector<SpectralField>> xi_series_nodes(const SpectralField& u0, double t, int j_max,
                                                        const XiOptions& opt, std::vector<double>* times_out) {
  if (j_max < 0) throw std::invalid_argument("xi_series: j_max must be nonnegative");
  if (!(opt.dt_quad > 0.0)) throw std::invalid_argument("xi_series: dt_quad must be positive");
  int M = opt.M_band < 0 ? u0.M() : opt.M_band;
  int n = std::max(2, static_cast<int>(std::ceil(t / opt.dt_quad - 1e-9)));
  if (n % 2) ++n;
  std::vector<double> times(n + 1);
  for (int k = 0; k <= n; ++k) times[k] = t * k / n;
  std::vector<std::vector<SpectralField>> X(j_max + 1);
  SpectralField base = u0.resized(M);
  for (int k = 0; k <= n; ++k) X[0].push_back(linear_propagator(base, times[k]));
  if (!opt.use_tree_sum) {
    for (int j = 1; j <= j_max; ++j) {
      X[j].assign(n + 1, SpectralField(M));
      for (int j1 = 0; j1 <= (j - 1) / 2; ++j1) {
        int j2 = j - 1 - j1;
        std::vector<SpectralField> B = duhamel_nodes(X[j1], X[j2], times, M);
        double w = j1 == j2 ? 1.0 : 2.0;
        for (int k = 0; k <= n; ++k) X[j][k] += w * B[k];
      }
    }
  } else {
    std::map<std::string, std::vector<SpectralField>> psi;
    psi["*"] = X[0];
    for (int j = 1; j <= j_max; ++j) {
      X[j].assign(n + 1, SpectralField(M));
      for (const Tree& tree : enumerate_trees(j)) {
        const auto& L = psi.at(tree->left->serialize());
        const auto& R = psi.at(tree->right->serialize());
        auto B = duhamel_nodes(L, R, times, M);
        for (int k = 0; k <= n; ++k) X[j][k] += B[k];
        psi[tree->serialize()] = std::move(B);
      }
    }
  }
  if (times_out) *times_out = times;
  return X;
}

std::vector<SpectralField> xi_series(const SpectralField& u0, double t, int j_max, const XiOptions& opt) {
  auto X = xi_series_nodes(u0, t, j_max, opt);
  std::vector<SpectralField> out;
  for (auto& row : X) out.push_back(row.back());
  return out;
}

bool xi_series_converges(const SpectralField& u0, double t) {
  return t * fourier_lebesgue_norm(u0, 0.0, 1.0) < kPicardContraction;
}

double phase_theta(long xi, long xi1) {
  double a = double(xi1), b = double(xi - xi1), x = double(xi);
  return x * a * b * (3.0 + a * a + a * b + b * b) / ((1.0 + a * a) * (1.0 + b * b) * (1.0 + x * x));
}

double phase_theta_definition(long xi, long xi1) { return phi(xi1) + phi(xi - xi1) - phi(xi); }

cplx phase_kernel(double theta, double t) {
  if (std::abs(theta) < 1e-12) return cplx(-0.5 * t * t * theta, -t);
  double h = std::sin(0.5 * t * theta);
  return cplx(-2.0 * h * h, -std::sin(t * theta)) / theta;
}

SpectralField xi1_exact(const SpectralField& phi_data, double t, int out_M) {
  int M = out_M < 0 ? 2 * phi_data.M() : out_M;
  SpectralField out(M);
  if (t == 0.0) return out;
  std::vector<std::pair<long, cplx>> modes;
  for (long n = -phi_data.M(); n <= phi_data.M(); ++n) {
    cplx c = phi_data[n];
    if (c != cplx(0.0, 0.0)) modes.emplace_back(n, c);
  }
  std::vector<cplx> acc(M + 1, cplx(0.0, 0.0));
  for (const auto& [n1, c1] : modes)
    for (const auto& [n2, c2] : modes) {
      long xi = n1 + n2;
      if (xi < 1 || xi > M) continue;
      acc[xi] += c1 * c2 * phase_kernel(phase_theta(xi, n1), t);
    }
  for (long xi = 1; xi <= M; ++xi) out.set(xi, 0.5 * std::polar(1.0, -t * phi(xi)) * phi(xi) * acc[xi]);
  return out;
}

double f_p_of_A(double A, double s, double p) {
  double edge = -1.0 / p;
  if (std::abs(s - edge) < 1e-12) return std::pow(std::log(A), 1.0 / p);
  if (s < edge) return 1.0;
  return std::pow(A, 1.0 / p + s);
}

InflationCase classify_case(double s, double p) {
  double edge = -1.0 / p;
  if (std::abs(s - edge) < 1e-12) return InflationCase::two;
  return s < edge ? InflationCase::one : InflationCase::three;
}

std::vector<Condition> InflationParams::conditions(double u0_flp) const {
  double fp = f_p_of_A(A, s, p);
  std::vector<Condition> c;
  auto less = [&](std::string name, double lhs, double rhs) { c.push_back({std::move(name), lhs, rhs, lhs < rhs}); };
  less("(i) R A^{1/p} N^s < 1/n", R * std::pow(A, 1.0 / p) * std::pow(N, s), 1.0 / n_target);
  less("(ii) T R A < 0.1", T * R * A, 0.1);
  c.push_back({"(iii) T R^2 A > n", T * R * R * A, double(n_target), T * R * R * A > n_target});
  less("(iv) T R A f_p(A) < 0.1", T * R * A * fp, 0.1);
  less("(v) ||u0||_{FL^p} < 0.1 R f_p(A)", u0_flp, 0.1 * R * fp);
  double r = std::max(T / (A / 10.0), A / (N / 8.0));
  less("(vi) T < A/10 and A < N/8", r, 1.0);
  return c;
}

bool InflationParams::feasible(double u0_flp) const {
  for (const auto& c : conditions(u0_flp))
    if (!c.holds) return false;
  return true;
}

namespace {

bool case3_ok(double s, double p, double delta, double theta) {
  return -s > std::max(2.0 * (theta + delta) / (1.0 + delta * p), 1.5 * theta - (p - 1.0) * delta);
}

}  // namespace

InflationParams inflation_params_at(double s, double p, int n, double N, double delta, double theta,
                                    const Prefactors& pre) {
  InflationParams q;
  q.N = N;
  q.s = s;
  q.p = p;
  q.n_target = n;
  q.inflation_case = classify_case(s, p);
  q.delta = delta;
  q.theta = theta;
  q.prefactors = pre;
  switch (q.inflation_case) {
    case InflationCase::one:
      q.A = pre.A * std::pow(N, 1.0 - delta);
      q.R = pre.R * std::pow(N, 2.0 * delta);
      q.T = pre.T * std::pow(N, -1.0 - 2.0 * delta);
      break;
    case InflationCase::two: {
      double L = N / std::log(N);
      q.A = pre.A * std::sqrt(L);
      q.R = pre.R * std::pow(L, 1.0 / (2.0 * p));
      q.T = pre.T / (std::pow(N, (1.0 + p) / (2.0 * p)) * std::pow(std::log(N), (3.0 - p) / (2.0 * p)));
      break;
    }
    case InflationCase::three:
      q.A = pre.A * std::pow(N, delta * p);
      q.R = pre.R * std::pow(N, -s - delta - theta);
      q.T = pre.T * std::pow(N, 2.0 * s + 3.0 * theta + (2.0 - p) * delta);
      break;
  }
  return q;
}

InflationParams select_parameters(double s, double p, int n, const SelectOptions& opt) {
  if (!(s < 0.0)) throw std::invalid_argument("select_parameters: s must be negative");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("select_parameters: need 1 <= p < inf");
  if (n < 1) throw std::invalid_argument("select_parameters: n must be positive");
  InflationCase c = classify_case(s, p);
  double delta = opt.delta, theta = 0.0;
  if (c == InflationCase::one) {
    double dmax = (-s - 1.0 / p) / (2.0 - 1.0 / p);
    if (delta <= 0.0) delta = 0.5 * dmax;
    if (delta >= dmax) throw std::invalid_argument("select_parameters: delta too large for case 1");
  } else if (c == InflationCase::three) {
    if (delta <= 0.0) {
      delta = 1.0 / (3.0 * p);
      while (!case3_ok(s, p, delta, delta / 10.0)) delta *= 0.5;
    }
    if (delta > 1.0 / (3.0 * p) + 1e-15) throw std::invalid_argument("select_parameters: case 3 needs delta <= 1/(3p)");
    theta = delta / 10.0;
    if (!case3_ok(s, p, delta, theta)) throw std::invalid_argument("select_parameters: delta violates the case 3 condition");
  }
  if (opt.fixed_N > 0.0) return inflation_params_at(s, p, n, opt.fixed_N, delta, theta, opt.prefactors);
  InflationParams last;
  for (int k = 1; k <= opt.max_log2_N; ++k) {
    last = inflation_params_at(s, p, n, std::ldexp(1.0, k), delta, theta, opt.prefactors);
    if (last.feasible()) return last;
  }
  std::string binding;
  for (const auto& cond : last.conditions())
    if (!cond.holds) binding += " " + cond.name + " (" + std::to_string(cond.lhs) + " vs " + std::to_string(cond.rhs) + ")";
  throw std::runtime_error("select_parameters: no N <= 2^" + std::to_string(opt.max_log2_N) +
                           " satisfies all conditions; binding:" + binding);
}

SpectralField build_inflation_data(const InflationParams& params, int M_grid) {
  if (!(params.A < params.N)) throw std::invalid_argument("build_inflation_data: need A < N");
  long N = std::lround(params.N);
  long a = static_cast<long>(std::floor(params.A));
  if (N + 2 * a > M_grid) throw std::invalid_argument("build_inflation_data: truncation too small for the data support");
  if (N - 2 * a < 1) throw std::invalid_argument("build_inflation_data: the two frequency blocks overlap");
  SpectralField f(M_grid);
  for (long xi = N - 2 * a; xi <= N + 2 * a; ++xi) f.set(xi, params.R);
  return f;
}

InflationReport run_inflation_experiment(const SpectralField& u0, const InflationParams& params,
                                         const SolverConfig& cfg) {
  InflationReport rep;
  rep.params = params;
  int M = cfg.M_grid;
  double s = params.s, p = params.p;
  SpectralField base = u0.resized(M);
  rep.conditions = params.conditions(fourier_lebesgue_norm(base, 0.0, p));
  SpectralField pert = build_inflation_data(params, M);
  SpectralField data = base + pert;
  rep.perturbation_norm = fourier_lebesgue_norm(pert, s, p);
  rep.initial_norm = fourier_lebesgue_norm(data, s, p);
  SolverConfig c = cfg;
  c.T_final = params.T;
  c.save_every = 1 << 30;
  Trajectory tr = integrate_bbm(data, c);
  rep.blowup = tr.blowup;
  const SpectralField& uT = tr.states.back();
  SpectralField xi0 = linear_propagator(data, params.T);
  SpectralField xi1 = xi1_exact(data, params.T, M);
  rep.final_norm = fourier_lebesgue_norm(uT, s, p);
  rep.xi1_norm = fourier_lebesgue_norm(xi1, s, p);
  rep.prediction = fourier_lebesgue_norm(xi0 + xi1, s, p);
  rep.remainder = fourier_lebesgue_norm(uT - xi0 - xi1, s, p);
  rep.remainder_bound = params.T * params.T * std::pow(params.R, 3) * params.A * params.A * f_p_of_A(params.A, s, p);
  rep.amplification = rep.final_norm / rep.perturbation_norm;
  rep.prediction_ratio = rep.prediction / rep.final_norm;
  rep.dominance = rep.remainder <= 0.5 * rep.xi1_norm;
  return rep;
}

double bilinear_flp_ratio(const SpectralField& u, const SpectralField& v, double s, double p) {
  SpectralField w = apply_real_symbol(product(u, v), [](int n) { return phi(n); });
  return fourier_lebesgue_norm(w, s, p) / (fourier_lebesgue_norm(u, s, p) * fourier_lebesgue_norm(v, s, p));
}

BilinearProbeReport bilinear_flp_probe(double s, double p, int trials, bool adversarial,
                                       const std::vector<double>& levels, std::uint64_t seed) {
  BilinearProbeReport rep;
  for (double level : levels) {
    int M = static_cast<int>(level);
    double best = 0.0;
    if (adversarial) {
      SpectralField u(M);
      for (int n = 0; n <= M; ++n) u.set(n, 1.0);
      best = bilinear_flp_ratio(u, u, s, p);
    } else {
      for (int t = 0; t < trials; ++t) {
        std::uint64_t su = member_seed(seed, 2 * t), sv = member_seed(seed, 2 * t + 1);
        SpectralField u(M), v(M);
        for (int n = 0; n <= M; ++n) {
          double w = std::pow(japanese(n), -s - 1.0 / p - 0.1);
          u.set(n, draw_g(Family::gaussian, su, n) * w);
          v.set(n, draw_g(Family::gaussian, sv, n) * w);
        }
        best = std::max(best, bilinear_flp_ratio(u, v, s, p));
      }
    }
    rep.rows.push_back({level, best});
  }
  std::vector<double> x, y;
  double lo = kInf, hi = 0.0;
  for (const auto& r : rep.rows) {
    x.push_back(r.level);
    y.push_back(r.ratio);
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  if (x.size() >= 2) rep.slope = fit_loglog(x, y).slope;
  rep.spread = hi / lo;
  return rep;
}

}  // namespace bbm

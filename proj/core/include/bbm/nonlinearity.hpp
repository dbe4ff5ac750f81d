#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbm/random_data.hpp"
#include "bbm/spectral.hpp"
#include "bbm/stats.hpp"

namespace bbm {

// N(u) = phi(D)(u^2) with the zero frequency removed (phi(0) = 0 removes it
// anyway). out_M < 0 keeps the input band limit, out_M = 2M keeps the full product.
//
// phi is odd, so N(u) is i times a real function and is not conjugate
// symmetric. The returned field holds the true coefficients for n >= 0 only;
// use nonlinearity_coefficient for n < 0 and renormalized_nonlinearity_real
// when the physical function is needed (grid norms, plots). Sobolev and
// Fourier-Lebesgue norms of the returned field are those of N(u).
SpectralField renormalized_nonlinearity(const SpectralField& u, int out_M = -1);
SpectralField renormalized_nonlinearity_direct(const SpectralField& u, int out_M = -1);
// Coefficient n of N(u) from the stored half: N^(-n) = -conj(N^(n)).
cplx nonlinearity_coefficient(const SpectralField& Nu, long n);
// The real function -i N(u), so that |N(u)(x)| = |result(x)| pointwise.
SpectralField renormalized_nonlinearity_real(const SpectralField& u, int out_M = -1);

struct ValueErr {
  double value = 0.0;
  double stderr_ = 0.0;
};

enum class CkMode { analytic, monte_carlo };

struct CkOptions {
  int M_grid = 0;         // 0: kernel_extent(kernel, k)
  int n_samples = 0;      // monte-carlo only
  std::uint64_t seed = 0;
  double t = 0.0;         // evaluation time of z_k(t)
  Family family = Family::gaussian;
  int threads = 1;
};

// analytic: sum_m |rho^(m/k)|^2 <m>^{-2 alpha} E|g_m|^2; monte-carlo: mean of
// the zero Fourier mode of z_k(t)^2.
ValueErr zero_mode_constant(double alpha, double k, const MollifierKernel& kernel, CkMode mode,
                            const CkOptions& opt = {});

struct ReportRow {
  std::string parameter;
  double level = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double oracle = 0.0;
};

struct NonlinearityReport {
  std::string claim;
  std::vector<ReportRow> rows;
  double fitted_slope = 0.0;
  double expected_slope = 0.0;
  bool pass = true;
  std::string note;
};

// Least-squares exponent of the divergence of values(k) over the k list.
// With increments = true the fit is on values(k_{i+1}) - values(k_i), which
// removes the additive constant that biases short-range fits of slowly
// divergent sums.
double fit_divergence_exponent(const std::vector<double>& k, const std::vector<double>& values, bool increments);

NonlinearityReport ck_divergence(double alpha, const MollifierKernel& kernel, const std::vector<double>& k_list);

// Closed-form E||N(z_{k2}) - N(z_{k1})||_{H^{s2}}^2 at t = 0 via the pairing
// expansion (Wick for gaussian, the moment table for other families).
// Kernels may differ (kernel1 at k1, kernel2 at k2). M_grid bounds |n_j|.
double nz_difference_oracle(double alpha, double s2, const MollifierKernel& kernel1, double k1,
                            const MollifierKernel& kernel2, double k2, int M_grid, Family family);

struct NzOptions {
  int n_samples = 200;
  std::uint64_t seed = 1;
  Family family = Family::gaussian;
  int threads = 1;
  double ratio = 2.0;  // k' = ratio * k
};

// Cauchy-decay diagnostics of N(z_k) in H^{s2}; throws RegimeError for alpha <= 1/4.
NonlinearityReport nz_convergence(double alpha, double s2, const MollifierKernel& kernel,
                                  const std::vector<double>& k_list, const NzOptions& opt = {});

// E||N_{kernel1}(z_k) - N_{kernel2}(z_k)||^2 by MC and by the oracle.
NonlinearityReport kernel_independence(double alpha, double s2, const MollifierKernel& kernel1,
                                       const MollifierKernel& kernel2, const std::vector<double>& k_list,
                                       const NzOptions& opt = {});

// Var <N(P_{<=N} u0) - N(P_{<=N/2} u0), phi> with phi^ supported at +-test_mode.
double sharpness_oracle(double alpha, int test_mode, long N, long M, Family family);
ValueErr sharpness_sample_variance(double alpha, int test_mode, long N, long M, int n_samples, std::uint64_t seed,
                                   Family family = Family::gaussian, int threads = 1);
NonlinearityReport sharpness_divergence(double alpha, int test_mode, const std::vector<long>& N_list, int n_samples,
                                        std::uint64_t seed = 1, int threads = 1);

struct QuarticOptions {
  int M_grid = 64;
  int n_samples = 200;
  int n_time = 8;  // Simpson intervals on [0, T]
  std::uint64_t seed = 1;
  Family family = Family::gaussian;
  int threads = 1;
};

// MC estimate of E int_0^T ||N(z(t))||_{H^s}^4 dt.
ValueErr quartic_bound_check(double alpha, double s, double T, const QuarticOptions& opt = {});

}  // namespace bbm

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbm/spectral.hpp"
#include "bbm/stats.hpp"

namespace bbm {

enum class Family { gaussian, uniform_phase, custom };

std::string to_string(Family f);
Family family_from_string(const std::string& name);  // throws std::invalid_argument

struct RandomDataSpec {
  Family family = Family::gaussian;
  double alpha = 0.5;
  int M_grid = 64;
  std::uint64_t seed = 0;
  // Sampler for Family::custom: g_n for n >= 0 given (seed, n). The caller is
  // responsible for verifying it (moment_table_check) before use.
  std::function<cplx(std::uint64_t, long)> custom;
};

// g_n for the given family; n < 0 returns conj(g_{-n}).
cplx draw_g(const RandomDataSpec& spec, long n);
// Same with an explicit seed, used by ensemble loops.
cplx draw_g(Family family, std::uint64_t seed, long n);

// u^(n) = g_n <n>^{-alpha} for |n| <= M_grid.
SpectralField sample_initial_data(const RandomDataSpec& spec);

// E|g_n|^2 for the family at frequency n (the zero mode differs per family).
double variance_weight(Family family, long n);
// E|g_n|^{2k} for n != 0.
double abs_moment(Family family, int k);

struct MollifierKernel {
  std::string name;
  std::function<double(double)> symbol;  // rho^(xi), rho^(0) = 1, |rho^| <= 1
  double support = kInf;                 // rho^(xi) = 0 for |xi| > support
};

MollifierKernel fejer_kernel();           // (1 - |xi|)_+
MollifierKernel gaussian_symbol_kernel(); // exp(-xi^2)
MollifierKernel dirichlet_kernel();       // 1_{|xi| <= 1}
MollifierKernel kernel_from_string(const std::string& name);

// u_out^(n) = rho^(n/k) u^(n).
SpectralField mollify(const SpectralField& f, const MollifierKernel& kernel, double k);

// Band limit beyond which |rho^(n/k)|^2 < 1e-30 (the exact support when finite).
int kernel_extent(const MollifierKernel& kernel, double k);

struct NormDescriptor {
  enum class Space { sobolev, fourier_lebesgue, wsp } space = Space::sobolev;
  double s = 0.0;
  double p = 2.0;
  int grid_points = 0;  // wsp only; 0 picks max(8*M+8, 2M+1)
};

double evaluate_norm(const SpectralField& f, const NormDescriptor& norm);

// Monte Carlo E||u_0||^q with member seeds member_seed(spec.seed, i).
MeanErr estimate_moment(const RandomDataSpec& spec, const NormDescriptor& norm, double q, int n_samples,
                        int threads = 1);

// Closed form E||u_0||_{H^s}^2 = sum_n <n>^{2s-2alpha} E|g_n|^2.
double sobolev_second_moment(const RandomDataSpec& spec, double s);

// Monte Carlo ||sum_n a_n g_n||_{L^q(Omega)} / (q^{1/2} ||a||_{l^2}) for a_n
// given on n = -K..K (a.size() = 2K+1).
MeanErr chaos_ratio(Family family, const std::vector<double>& a, double q, int n_samples, std::uint64_t seed,
                    int threads = 1);

struct MomentEntry {
  std::vector<long> tuple;
  cplx estimate;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  cplx expected;
  std::string case_label;
  bool pass = false;
};

struct MomentReport {
  Family family = Family::gaussian;
  int n_samples = 0;
  std::vector<MomentEntry> entries;
  bool pass = true;
};

// Exact E[prod_j g_{n_j}] from independence across |n| and E[g^k conj(g)^l] = E|g|^{2k} delta_{kl}.
cplx exact_moment(Family family, const std::vector<long>& tuple);
// Case of the moment table the tuple falls in ("odd", "unpaired", or the
// product of absolute moments, e.g. "E|g|^4*E|g|^2").
std::string moment_case(Family family, const std::vector<long>& tuple);

MomentReport moment_table_check(Family family, const std::vector<std::vector<long>>& tuples, int n_samples,
                                std::uint64_t seed, int threads = 1);

// Default tuple list covering every case of the table up to length 8.
std::vector<std::vector<long>> default_moment_tuples();

class RegimeError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace bbm

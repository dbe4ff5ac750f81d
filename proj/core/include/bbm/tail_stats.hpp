#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbm/random_data.hpp"
#include "bbm/spectral.hpp"

namespace bbm {

// Scalar observable along a time grid.
struct PathSample {
  std::vector<double> times;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

// Field-valued path; distances are norms of differences.
struct FieldPath {
  std::vector<double> times;
  std::vector<SpectralField> fields;
  std::uint64_t seed = 0;
};

// sup over grid pairs of d(f(t_i), f(t_j)) / |t_i - t_j|^gamma
double holder_seminorm(const PathSample& path, double gamma);
double holder_seminorm(const FieldPath& path, double gamma, const NormDescriptor& norm);

// C(beta, q) = 32^q ((q beta + 1)/(q beta - 1))^q; throws unless q beta > 1.
double grr_constant(double beta, double q);

// Right side of E||f||_{C^gamma}^q <= K C(beta,q) 2 T^{2+eta-q beta} / ((1+eta-q beta)(2+eta-q beta));
// infinite unless q beta - eta < 1.
double kolmogorov_moment_bound(double K, double eta, double beta, double q, double T);

struct GrrCheck {
  double seminorm = 0.0;  // grid Holder seminorm with gamma = beta - 1/q
  double bound = 0.0;     // C(beta,q)^{1/q} (grid double sum)^{1/q}
  bool dominated = false;
};

// Per-path Garsia-Rodemich-Rumsey domination on the sampling grid.
GrrCheck grr_path_check(const FieldPath& path, double beta, double q, const NormDescriptor& norm);

enum class TailObservable { z, nz };
std::string to_string(TailObservable o);
TailObservable tail_observable_from_string(const std::string& name);

struct TailSpec {
  TailObservable observable = TailObservable::z;
  double alpha = 0.5;
  int M_grid = 64;
  int n_time = 16;
  double s = -0.1;  // regularity of the W^{s,inf} norm (0.5 is used for N(z))
  Family family = Family::gaussian;
};

// sup over the time grid of ||z(t)||_{W^{s,inf}} or ||N(z(t))||_{W^{s,inf}} for one sample.
double tail_observable_value(const TailSpec& spec, double T, std::uint64_t seed);
FieldPath observable_path(const TailSpec& spec, double T, std::uint64_t seed);

struct TailRow {
  double lambda = 0.0;
  double p_hat = 0.0;
  double ci_low = 0.0, ci_high = 0.0;
  std::size_t exceedances = 0;
};

struct TailReport {
  std::vector<TailRow> rows;
  double median = 0.0;
  int power = 2;            // 2 for z (Gaussian tail), 1 for N(z) (second chaos)
  double slope = 0.0;       // -log P against lambda^power
  double r2 = 0.0;
  double r2_linear = 0.0;   // -log P against lambda
  double r2_quadratic = 0.0;// -log P against lambda^2
  double kappa = 0.0;       // slope of log(-log P) against log lambda
  bool pass = false;
};

// Empty lambda_grid picks 12 levels from the median up to the level with 10
// exceedances. Throws std::runtime_error when a supplied grid has fewer than
// 10 exceedances at its largest level.
TailReport tail_check(const TailSpec& spec, double T, std::vector<double> lambda_grid, int n_samples,
                      std::uint64_t seed, int threads = 1);
TailReport tail_report_from_values(std::vector<double> values, int power, std::vector<double> lambda_grid);

}  // namespace bbm

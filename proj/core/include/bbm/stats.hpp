#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace bbm {

// Pairwise (cascade) summation; the result depends only on the order of the
// input, not on how it was produced, which keeps ensemble reductions
// identical across thread counts.
double pairwise_sum(std::span<const double> x);

struct MeanErr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanErr mean_stderr(std::span<const double> x);

// Sample variance of x with a standard error for the variance itself.
MeanErr variance_stderr(std::span<const double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);
// Least-squares slope of log y against log x.
LinearFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Wilson score interval for k successes out of n at normal quantile z.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov law.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Pearson correlation.
double correlation(std::span<const double> x, std::span<const double> y);

}  // namespace bbm

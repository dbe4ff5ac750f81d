#include "bbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbm {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 16) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  std::size_t h = x.size() / 2;
  return pairwise_sum(x.subspan(0, h)) + pairwise_sum(x.subspan(h));
}

MeanErr mean_stderr(std::span<const double> x) {
  if (x.empty()) return {};
  double n = static_cast<double>(x.size());
  double m = pairwise_sum(x) / n;
  if (x.size() < 2) return {m, 0.0};
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - m) * (x[i] - m);
  double var = pairwise_sum(d) / (n - 1.0);
  return {m, std::sqrt(var / n)};
}

MeanErr variance_stderr(std::span<const double> x) {
  if (x.size() < 2) return {};
  MeanErr m = mean_stderr(x);
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - m.mean) * (x[i] - m.mean);
  MeanErr v = mean_stderr(d);
  double n = static_cast<double>(x.size());
  return {v.mean * n / (n - 1.0), v.stderr_ * n / (n - 1.0)};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired points");
  double n = static_cast<double>(x.size());
  double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
  std::vector<double> sxx(x.size()), sxy(x.size()), syy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx[i] = (x[i] - mx) * (x[i] - mx);
    sxy[i] = (x[i] - mx) * (y[i] - my);
    syy[i] = (y[i] - my) * (y[i] - my);
  }
  double Sxx = pairwise_sum(sxx), Sxy = pairwise_sum(sxy), Syy = pairwise_sum(syy);
  LinearFit f;
  f.slope = Sxy / Sxx;
  f.intercept = my - f.slope * mx;
  double sse = std::max(0.0, Syy - f.slope * Sxy);
  f.r2 = Syy > 0.0 ? 1.0 - sse / Syy : 1.0;
  f.slope_stderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / Sxx) : 0.0;
  return f;
}

LinearFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) lx[i] = std::log(x[i]);
  for (std::size_t i = 0; i < y.size(); ++i) ly[i] = std::log(y[i]);
  return fit_line(lx, ly);
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  double p = static_cast<double>(k) / n, nn = static_cast<double>(n);
  double denom = 1.0 + z * z / nn;
  double centre = (p + z * z / (2.0 * nn)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0, na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  double ne = na * nb / (na + nb);
  double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  if (lam < 0.2) return {d, 1.0};
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    q += term;
    if (std::abs(term) < 1e-12) break;
  }
  return {d, std::clamp(q, 0.0, 1.0)};
}

double correlation(std::span<const double> x, std::span<const double> y) {
  double n = static_cast<double>(x.size());
  double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
  std::vector<double> a(x.size()), b(x.size()), c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    a[i] = (x[i] - mx) * (y[i] - my);
    b[i] = (x[i] - mx) * (x[i] - mx);
    c[i] = (y[i] - my) * (y[i] - my);
  }
  return pairwise_sum(a) / std::sqrt(pairwise_sum(b) * pairwise_sum(c));
}

}  // namespace bbm

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bbm {

// Running integrals Q_k = int_0^{t_k} f on a uniform grid with spacing h.
// Even k use composite Simpson; odd k finish with the 3/8 rule (k >= 3) or a
// three-point end formula (k = 1), so every Q_k is fourth-order accurate.
template <class T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
  std::size_t n = f.size();
  if (n == 0) throw std::invalid_argument("cumulative_integral: empty grid");
  std::vector<T> Q(n, 0.0 * f[0]);
  if (n == 1) return Q;
  if (n == 2) {
    Q[1] = (0.5 * h) * (f[0] + f[1]);
    return Q;
  }
  for (std::size_t k = 2; k < n; k += 2) Q[k] = Q[k - 2] + (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  Q[1] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (std::size_t k = 3; k < n; k += 2)
    Q[k] = Q[k - 3] + (3.0 * h / 8.0) * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
  return Q;
}

template <class T>
T simpson(const std::vector<T>& f, double h) {
  return cumulative_integral(f, h).back();
}

}  // namespace bbm

namespace bbm {

// Running integrals on a grid that is uniform except possibly for a shorter
// final interval (the solver's time grid). The final interval is integrated
// with the quadratic through the last three nodes.
template <class T>
std::vector<T> cumulative_integral_on_grid(const std::vector<T>& f, const std::vector<double>& t) {
  std::size_t n = f.size();
  if (t.size() != n) throw std::invalid_argument("cumulative_integral_on_grid: size mismatch");
  if (n < 3) {
    std::vector<T> Q(n, 0.0 * f[0]);
    if (n == 2) Q[1] = (0.5 * (t[1] - t[0])) * (f[0] + f[1]);
    return Q;
  }
  double h = t[1] - t[0];
  double h_last = t[n - 1] - t[n - 2];
  if (std::abs(h_last - h) <= 1e-9 * h) return cumulative_integral(f, h);
  std::vector<T> head(f.begin(), f.end() - 1);
  std::vector<T> Q = cumulative_integral(head, h);
  // quadratic through (-h, f0), (0, f1), (g, f2) integrated over [0, g]
  double g = h_last;
  const T& f0 = f[n - 3];
  const T& f1 = f[n - 2];
  const T& f2 = f[n - 1];
  double w0 = -g * g * g / (6.0 * h * (h + g));
  double w1 = g * (3.0 * h + g) / (6.0 * h);
  double w2 = g * (3.0 * h + 2.0 * g) / (6.0 * (h + g));
  Q.push_back(Q.back() + (w0 * f0 + w1 * f1 + w2 * f2));
  return Q;
}

}  // namespace bbm

#pragma once

// Independent reference computations used by the tests. Everything here is
// written from the definitions (direct sums, naive quadrature, textbook RK4)
// and shares no code with the library beyond the SpectralField container.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "bbm/spectral.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

inline double phi(double n) { return n / (1.0 + n * n); }
inline double jb(double n) { return std::sqrt(1.0 + n * n); }

// u(x) = sum_{|n| <= M} u^(n) e^{inx} by direct summation.
inline double eval(const bbm::SpectralField& f, double x) {
  double v = f[0].real();
  for (int n = 1; n <= f.M(); ++n) v += 2.0 * (f[n] * std::exp(cplx(0.0, n * x))).real();
  return v;
}

inline std::vector<double> grid(const bbm::SpectralField& f, int L) {
  std::vector<double> g(L);
  for (int j = 0; j < L; ++j) g[j] = eval(f, 2.0 * pi * j / L);
  return g;
}

// (1/2pi) int |f|^2 by the trapezoid rule on L points (exact for L > 2M).
inline double l2_squared_by_quadrature(const bbm::SpectralField& f, int L) {
  double s = 0.0;
  for (double v : grid(f, L)) s += v * v;
  return s / L;
}

inline double sobolev(const bbm::SpectralField& f, double s) {
  double acc = std::norm(f[0]);
  for (int n = 1; n <= f.M(); ++n) acc += 2.0 * std::pow(1.0 + double(n) * n, s) * std::norm(f[n]);
  return std::sqrt(acc);
}

inline double flp(const bbm::SpectralField& f, double s, double p) {
  if (std::isinf(p)) {
    double m = std::abs(f[0]);
    for (int n = 1; n <= f.M(); ++n) m = std::max(m, std::pow(jb(n), s) * std::abs(f[n]));
    return m;
  }
  double acc = std::pow(std::abs(f[0]), p);
  for (int n = 1; n <= f.M(); ++n) acc += 2.0 * std::pow(std::pow(jb(n), s) * std::abs(f[n]), p);
  return std::pow(acc, 1.0 / p);
}

// Coefficient n of the product u v (two-sided convolution).
inline cplx product_coeff(const bbm::SpectralField& u, const bbm::SpectralField& v, long n) {
  cplx acc = 0.0;
  for (long m = -u.M(); m <= u.M(); ++m) acc += u[m] * v[n - m];
  return acc;
}

inline double phi_beta(long k, double beta) {
  double s = 0.0;
  for (long n = -std::abs(k); n <= std::abs(k); ++n) s += std::pow(jb(double(n)), -beta);
  return s;
}

// Catalan numbers from C_j = sum_i C_i C_{j-1-i}.
inline std::vector<long> catalan(int jmax) {
  std::vector<long> c(jmax + 1, 0);
  c[0] = 1;
  for (int j = 1; j <= jmax; ++j)
    for (int i = 0; i < j; ++i) c[j] += c[i] * c[j - 1 - i];
  return c;
}

// Classical RK4 for a scalar ODE y' = f(y).
inline double rk4(const std::function<double(double)>& f, double y0, double T, int steps) {
  double h = T / steps, y = y0;
  for (int i = 0; i < steps; ++i) {
    double k1 = f(y), k2 = f(y + 0.5 * h * k1), k3 = f(y + 0.5 * h * k2), k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// Composite Gauss-Legendre (5 points per panel) on [a, b].
template <class F>
auto gauss_legendre(F&& f, double a, double b, int panels) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                              0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  double h = (b - a) / panels;
  decltype(f(a)) acc = f(a) * 0.0;
  for (int k = 0; k < panels; ++k) {
    double c = a + (k + 0.5) * h;
    for (int i = 0; i < 5; ++i) acc += (0.5 * h * w[i]) * f(c + 0.5 * h * x[i]);
  }
  return acc;
}

// First Picard iterate of the flow at frequency xi, by quadrature of the
// Duhamel integral over t' with the free evolution written out explicitly:
//   Xi_1(t)(xi) = -(i/2) phi(xi) int_0^t e^{-i(t-t')phi(xi)} sum_{xi1} a(xi1) a(xi-xi1) e^{-it'(phi(xi1)+phi(xi-xi1))} dt'
inline cplx xi1_by_quadrature(const bbm::SpectralField& a, long xi, double t, int panels) {
  auto integrand = [&](double tp) {
    cplx s = 0.0;
    for (long m = -a.M(); m <= a.M(); ++m) {
      cplx am = a[m], bm = a[xi - m];
      if (am == 0.0 || bm == 0.0) continue;
      s += am * bm * std::exp(cplx(0.0, -tp * (phi(m) + phi(xi - m))));
    }
    return std::exp(cplx(0.0, -(t - tp) * phi(xi))) * s;
  };
  return cplx(0.0, -0.5) * phi(xi) * gauss_legendre(integrand, 0.0, t, panels);
}

// Random field with independent complex gaussian coefficients on 1..M.
inline bbm::SpectralField random_field(int M, std::uint64_t seed, double decay = 0.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  bbm::SpectralField f(M);
  f.set(0, nd(gen));
  for (int n = 1; n <= M; ++n) f.set(n, cplx(nd(gen), nd(gen)) * std::pow(jb(n), -decay));
  return f;
}

}  // namespace oracle

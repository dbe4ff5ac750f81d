#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace bbm {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// <n> = (1 + n^2)^{1/2}
inline double japanese(double n) { return std::sqrt(1.0 + n * n); }

// Dispersion symbol phi(n) = n / (1 + n^2).
inline double phi(double n) { return n / (1.0 + n * n); }

// Real field on the torus stored by its coefficients for 0 <= n <= M.
// Negative frequencies are implied by conjugate symmetry, so every field is
// real by construction. Convention: u(x) = sum_n u^(n) e^{inx} and
// ||u||_{L^2}^2 = sum_n |u^(n)|^2, i.e. physical integrals carry dx/2pi.
class SpectralField {
public:
  SpectralField() : c_(1, cplx(0.0, 0.0)) {}
  explicit SpectralField(int M);
  // c[n] for n = 0..M; the imaginary part of c[0] is dropped.
  explicit SpectralField(std::vector<cplx> c);

  int M() const { return static_cast<int>(c_.size()) - 1; }

  cplx operator[](long n) const {
    long a = n < 0 ? -n : n;
    if (a > M()) return {0.0, 0.0};
    return n < 0 ? std::conj(c_[a]) : c_[a];
  }

  // Sets u^(n) and u^(-n) = conj(u^(n)) together. n = 0 keeps the real part.
  void set(long n, cplx v);

  const std::vector<cplx>& coeffs() const { return c_; }

  // Zero-padded or truncated copy at a new band limit.
  SpectralField resized(int M) const;

  bool is_zero() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

  // Raw mutable access for kernels that fill coefficients in bulk. Callers
  // must keep c[0] real.
  std::vector<cplx>& mutable_coeffs() { return c_; }

private:
  std::vector<cplx> c_;
};

struct MultiplierSymbol {
  std::string name;
  std::function<cplx(long)> eval;
  // true when eval(-n) = conj(eval(n)) so that real fields stay real
  bool real_preserving = true;
};

MultiplierSymbol phi_symbol();
MultiplierSymbol bessel_symbol(double s);        // <n>^s
MultiplierSymbol propagator_symbol(double t);    // e^{-it phi(n)}
MultiplierSymbol derivative_symbol();            // i n

// Returns the coefficients of sym(n) u^(n) for all |n| <= M. Symbols that
// are not real-preserving produce a general complex sequence, so the result
// is returned as the full two-sided vector indexed by n + M.
std::vector<cplx> apply_symbol_two_sided(const SpectralField& f, const MultiplierSymbol& sym);

// apply_multiplier requires a real-preserving symbol.
SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& sym);

// Diagonal multiplier given directly as a function of n (fast path, no
// std::function indirection per call site).
template <class F>
SpectralField apply_real_symbol(const SpectralField& f, F&& m) {
  SpectralField out = f;
  auto& c = out.mutable_coeffs();
  for (int n = 0; n <= f.M(); ++n) c[n] *= m(n);
  return out;
}

double sobolev_norm(const SpectralField& f, double s);
double fourier_lebesgue_norm(const SpectralField& f, double s, double p);
// Grid quadrature of |<d_x>^s f|^p with dx/2pi; p = kInf gives the grid max.
double wsp_norm(const SpectralField& f, double s, double p, int grid_points);

// Normalized L^2 pairing (1/2pi) int f g dx = sum_n f^(n) conj(g^(n)).
double inner(const SpectralField& f, const SpectralField& g);

// phi_beta(k) = sum_{|n| <= |k|} <n>^{-beta}
double phi_beta(long k, double beta);

enum class PhiRegime { power, logarithmic, bounded };
// beta < 1: ~ <k>^{1-beta}; beta = 1: ~ log <k>; beta > 1: bounded
PhiRegime classify_phi_beta(double beta);
// Leading-order growth profile for the regime (used for ratios and plots).
double phi_beta_profile(long k, double beta);

// Physical values u(2 pi j / L), j = 0..L-1. Requires L >= 2M+1.
std::vector<double> to_grid(const SpectralField& f, int L);
// Coefficients n = 0..M of real grid values (exact when the data is band-limited below L/2).
SpectralField from_grid(const std::vector<double>& values, int M);

// Exact product uv truncated to out_M (out_M < 0 keeps the full band Mu+Mv).
SpectralField product(const SpectralField& u, const SpectralField& v, int out_M = -1);
// O(M^2) convolution oracle with the same contract.
SpectralField product_direct(const SpectralField& u, const SpectralField& v, int out_M = -1);

// Smallest even integer >= n whose only prime factors are 2, 3, 5.
int nice_fft_size(int n);

}  // namespace bbm

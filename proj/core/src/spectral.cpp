#include "bbm/spectral.hpp"

#include <algorithm>
#include <stdexcept>

#include "bbm/stats.hpp"
#include "fft.hpp"

namespace bbm {

SpectralField::SpectralField(int M) : c_(static_cast<std::size_t>(std::max(M, 0)) + 1, cplx(0.0, 0.0)) {
  if (M < 0) throw std::invalid_argument("SpectralField: negative band limit");
}

SpectralField::SpectralField(std::vector<cplx> c) : c_(std::move(c)) {
  if (c_.empty()) c_.assign(1, cplx(0.0, 0.0));
  c_[0] = cplx(c_[0].real(), 0.0);
}

void SpectralField::set(long n, cplx v) {
  long a = n < 0 ? -n : n;
  if (a > M()) throw std::out_of_range("SpectralField::set: frequency outside band");
  if (a == 0) {
    c_[0] = cplx(v.real(), 0.0);
    return;
  }
  c_[a] = n < 0 ? std::conj(v) : v;
}

SpectralField SpectralField::resized(int M) const {
  SpectralField out(M);
  int m = std::min(M, this->M());
  std::copy(c_.begin(), c_.begin() + m + 1, out.c_.begin());
  return out;
}

bool SpectralField::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx z) { return z == cplx(0.0, 0.0); });
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (o.M() > M()) c_.resize(o.c_.size(), cplx(0.0, 0.0));
  for (int n = 0; n <= o.M(); ++n) c_[n] += o.c_[n];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (o.M() > M()) c_.resize(o.c_.size(), cplx(0.0, 0.0));
  for (int n = 0; n <= o.M(); ++n) c_[n] -= o.c_[n];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& z : c_) z *= a;
  return *this;
}

MultiplierSymbol phi_symbol() {
  return {"phi", [](long n) { return cplx(phi(static_cast<double>(n)), 0.0); }, true};
}

MultiplierSymbol bessel_symbol(double s) {
  return {"bessel^" + std::to_string(s),
          [s](long n) { return cplx(std::pow(japanese(static_cast<double>(n)), s), 0.0); }, true};
}

MultiplierSymbol propagator_symbol(double t) {
  return {"S(" + std::to_string(t) + ")",
          [t](long n) { return std::polar(1.0, -t * phi(static_cast<double>(n))); }, true};
}

MultiplierSymbol derivative_symbol() {
  return {"d/dx", [](long n) { return cplx(0.0, static_cast<double>(n)); }, true};
}

std::vector<cplx> apply_symbol_two_sided(const SpectralField& f, const MultiplierSymbol& sym) {
  int M = f.M();
  std::vector<cplx> out(2 * static_cast<std::size_t>(M) + 1);
  for (long n = -M; n <= M; ++n) out[n + M] = sym.eval(n) * f[n];
  return out;
}

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& sym) {
  if (!sym.real_preserving)
    throw std::invalid_argument("apply_multiplier: symbol " + sym.name + " is not real-preserving");
  std::vector<cplx> c(f.coeffs());
  for (int n = 0; n <= f.M(); ++n) c[n] *= sym.eval(n);
  return SpectralField(std::move(c));
}

double sobolev_norm(const SpectralField& f, double s) {
  const auto& c = f.coeffs();
  std::vector<double> terms(c.size());
  for (int n = 0; n <= f.M(); ++n) {
    double w = s == 0.0 ? 1.0 : std::pow(1.0 + double(n) * n, s);
    terms[n] = (n == 0 ? 1.0 : 2.0) * w * std::norm(c[n]);
  }
  return std::sqrt(pairwise_sum(terms));
}

double fourier_lebesgue_norm(const SpectralField& f, double s, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("fourier_lebesgue_norm: p must be >= 1");
  const auto& c = f.coeffs();
  if (std::isinf(p)) {
    double m = 0.0;
    for (int n = 0; n <= f.M(); ++n) m = std::max(m, std::pow(japanese(n), s) * std::abs(c[n]));
    return m;
  }
  std::vector<double> terms(c.size());
  for (int n = 0; n <= f.M(); ++n) {
    double a = std::pow(japanese(n), s) * std::abs(c[n]);
    terms[n] = (n == 0 ? 1.0 : 2.0) * std::pow(a, p);
  }
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

double wsp_norm(const SpectralField& f, double s, double p, int grid_points) {
  if (grid_points < 2 * f.M() + 1)
    throw std::invalid_argument("wsp_norm: grid_points below 2*M_grid+1 (aliasing)");
  if (!(p >= 1.0)) throw std::invalid_argument("wsp_norm: p must be >= 1");
  SpectralField g = s == 0.0 ? f : apply_real_symbol(f, [s](int n) { return std::pow(japanese(n), s); });
  std::vector<double> v = to_grid(g, grid_points);
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  for (double& x : v) x = std::pow(std::abs(x), p);
  return std::pow(pairwise_sum(v) / grid_points, 1.0 / p);
}

double inner(const SpectralField& f, const SpectralField& g) {
  int M = std::min(f.M(), g.M());
  std::vector<double> terms(static_cast<std::size_t>(M) + 1);
  for (int n = 0; n <= M; ++n) {
    double re = (f.coeffs()[n] * std::conj(g.coeffs()[n])).real();
    terms[n] = n == 0 ? re : 2.0 * re;
  }
  return pairwise_sum(terms);
}

double phi_beta(long k, double beta) {
  long K = k < 0 ? -k : k;
  std::vector<double> terms(static_cast<std::size_t>(K) + 1);
  terms[0] = 1.0;
  for (long n = 1; n <= K; ++n) terms[n] = 2.0 * std::pow(1.0 + double(n) * n, -beta / 2.0);
  return pairwise_sum(terms);
}

PhiRegime classify_phi_beta(double beta) {
  if (beta < 1.0) return PhiRegime::power;
  if (beta == 1.0) return PhiRegime::logarithmic;
  return PhiRegime::bounded;
}

double phi_beta_profile(long k, double beta) {
  double jk = japanese(static_cast<double>(k));
  switch (classify_phi_beta(beta)) {
    case PhiRegime::power: return std::pow(jk, 1.0 - beta);
    case PhiRegime::logarithmic: return std::log(jk) + 1.0;
    case PhiRegime::bounded: return 1.0;
  }
  return 1.0;
}

std::vector<double> to_grid(const SpectralField& f, int L) {
  if (L < 2 * f.M() + 1) throw std::invalid_argument("to_grid: grid too coarse for band limit");
  std::vector<cplx> half(static_cast<std::size_t>(L) / 2 + 1, cplx(0.0, 0.0));
  std::copy(f.coeffs().begin(), f.coeffs().end(), half.begin());
  std::vector<double> out(L);
  detail::c2r(half.data(), L, out.data());
  return out;
}

SpectralField from_grid(const std::vector<double>& values, int M) {
  int L = static_cast<int>(values.size());
  if (L < 2 * M + 1) throw std::invalid_argument("from_grid: grid too coarse for band limit");
  std::vector<cplx> half(static_cast<std::size_t>(L) / 2 + 1);
  detail::r2c(values.data(), L, half.data());
  std::vector<cplx> c(half.begin(), half.begin() + M + 1);
  for (auto& z : c) z /= static_cast<double>(L);
  return SpectralField(std::move(c));
}

int nice_fft_size(int n) {
  int m = std::max(2, n);
  if (m % 2) ++m;
  for (;; m += 2) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

SpectralField product(const SpectralField& u, const SpectralField& v, int out_M) {
  int full = u.M() + v.M();
  int target = out_M < 0 ? full : out_M;
  int L = nice_fft_size(2 * full + 1);
  std::vector<double> a = to_grid(u, L);
  if (&u == &v) {
    for (double& x : a) x *= x;
  } else {
    std::vector<double> b = to_grid(v, L);
    for (int j = 0; j < L; ++j) a[j] *= b[j];
  }
  SpectralField w = from_grid(a, std::min(target, full));
  return target > full ? w.resized(target) : w;
}

SpectralField product_direct(const SpectralField& u, const SpectralField& v, int out_M) {
  int full = u.M() + v.M();
  if (out_M < 0) out_M = full;
  SpectralField w(out_M);
  auto& c = w.mutable_coeffs();
  for (long n = 0; n <= std::min(out_M, full); ++n) {
    cplx acc(0.0, 0.0);
    long lo = std::max<long>(-u.M(), n - v.M());
    long hi = std::min<long>(u.M(), n + v.M());
    for (long n1 = lo; n1 <= hi; ++n1) acc += u[n1] * v[n - n1];
    c[n] = acc;
  }
  c[0] = cplx(c[0].real(), 0.0);
  return w;
}

}  // namespace bbm

#include "doctest.h"
#include "oracles.hpp"

#include "bbm/spectral.hpp"
#include "bbm/stats.hpp"

using namespace bbm;
using doctest::Approx;

TEST_CASE("dispersion symbol values and oddness") {
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(1.0) == 0.5);
  for (int n = 1; n <= 16; ++n) CHECK(phi(-n) == -phi(n));
  auto sym = phi_symbol();
  CHECK(sym.eval(2) == cplx(0.4, 0.0));
}

TEST_CASE("sobolev norm") {
  SpectralField f(4);
  f.set(1, 1.0);
  CHECK(sobolev_norm(f, 1.0) == Approx(2.0).epsilon(1e-15));
  CHECK(sobolev_norm(SpectralField(8), 0.3) == 0.0);
  CHECK(sobolev_norm(SpectralField(8), -2.0) == 0.0);

  SUBCASE("plancherel against grid quadrature") {
    SpectralField g = oracle::random_field(8, 11);
    double quad = oracle::l2_squared_by_quadrature(g, 64);
    CHECK(sobolev_norm(g, 0.0) * sobolev_norm(g, 0.0) == Approx(quad).epsilon(1e-12));
  }
  SUBCASE("matches the direct weighted sum") {
    SpectralField g = oracle::random_field(40, 12, 0.7);
    for (double s : {-1.0, -0.1, 0.0, 0.5, 1.3})
      CHECK(sobolev_norm(g, s) == Approx(oracle::sobolev(g, s)).epsilon(1e-12));
  }
}

TEST_CASE("fourier-lebesgue norm") {
  for (int i = 0; i < 20; ++i) {
    SpectralField g = oracle::random_field(30, 100 + i, 0.5);
    CHECK(fourier_lebesgue_norm(g, 0.4, 2.0) == Approx(sobolev_norm(g, 0.4)).epsilon(1e-12));
    CHECK(fourier_lebesgue_norm(g, -1.0, 3.0) == Approx(oracle::flp(g, -1.0, 3.0)).epsilon(1e-12));
    CHECK(fourier_lebesgue_norm(g, 0.2, kInf) == Approx(oracle::flp(g, 0.2, kInf)).epsilon(1e-14));
  }
  SpectralField d(3);
  d.set(0, 3.0);
  CHECK(fourier_lebesgue_norm(d, 0.0, 1.0) == Approx(3.0));

  SUBCASE("indicator block counted by hand") {
    const int N = 40, A = 5;
    SpectralField blk(N + 2 * A);
    for (int n = N - 2 * A; n <= N + 2 * A; ++n) blk.set(n, 1.0);
    double acc = 0.0;
    for (int n = N - 2 * A; n <= N + 2 * A; ++n) acc += 2.0 / (1.0 + double(n) * n);
    CHECK(fourier_lebesgue_norm(blk, -1.0, 2.0) == Approx(std::sqrt(acc)).epsilon(1e-13));
    CHECK(fourier_lebesgue_norm(blk, 0.0, 1.0) == Approx(2.0 * (4 * A + 1)));
  }
}

TEST_CASE("W^{s,p} norm on the grid") {
  SpectralField c(4);
  c.set(0, -2.5);
  CHECK(wsp_norm(c, 0.7, 3.0, 64) == Approx(2.5).epsilon(1e-12));
  CHECK(wsp_norm(c, -0.3, kInf, 64) == Approx(2.5).epsilon(1e-12));
  for (int i = 0; i < 5; ++i) {
    SpectralField g = oracle::random_field(20, 200 + i, 1.0);
    CHECK(wsp_norm(g, 0.3, 2.0, 128) == Approx(sobolev_norm(g, 0.3)).epsilon(1e-10));
  }
  SpectralField cosx(4);
  cosx.set(1, 1.0);
  CHECK(wsp_norm(cosx, 0.0, kInf, 4096) == Approx(2.0).epsilon(1e-6));
}

TEST_CASE("phi_beta sums") {
  CHECK(phi_beta(0, 0.3) == 1.0);
  CHECK(phi_beta(0, 2.0) == 1.0);
  CHECK(phi_beta(2, 1.0) == Approx(1.0 + 2.0 / std::sqrt(2.0) + 2.0 / std::sqrt(5.0)).epsilon(1e-14));
  for (long k : {3L, 17L, 100L}) CHECK(phi_beta(k, 0.7) == Approx(oracle::phi_beta(k, 0.7)).epsilon(1e-12));
  std::vector<double> ks, vs;
  for (int e = 4; e <= 14; ++e) {
    ks.push_back(std::ldexp(1.0, e));
    vs.push_back(phi_beta(1L << e, 0.5));
  }
  CHECK(fit_loglog(ks, vs).slope == Approx(0.5).epsilon(0.06));
  CHECK(classify_phi_beta(0.5) == PhiRegime::power);
  CHECK(classify_phi_beta(1.0) == PhiRegime::logarithmic);
  CHECK(classify_phi_beta(1.5) == PhiRegime::bounded);
}

TEST_CASE("products against the convolution oracle") {
  SpectralField u = oracle::random_field(13, 1), v = oracle::random_field(9, 2);
  SpectralField full = product(u, v);
  REQUIRE(full.M() == 22);
  for (long n = 0; n <= 22; ++n) {
    cplx ref = oracle::product_coeff(u, v, n);
    CHECK(std::abs(full[n] - ref) < 1e-12 * (1.0 + std::abs(ref)));
  }
  SpectralField cut = product(u, v, 5);
  CHECK(cut.M() == 5);
  CHECK(std::abs(cut[5] - full[5]) < 1e-12);
  SpectralField d = product_direct(u, v, 7);
  for (long n = 0; n <= 7; ++n) CHECK(std::abs(d[n] - full[n]) < 1e-12);
}

TEST_CASE("grid transforms") {
  SpectralField g = oracle::random_field(10, 3);
  auto vals = to_grid(g, 32);
  auto ref = oracle::grid(g, 32);
  for (int j = 0; j < 32; ++j) CHECK(vals[j] == Approx(ref[j]).epsilon(1e-12));
  SpectralField back = from_grid(vals, 10);
  CHECK(sobolev_norm(back - g, 0.0) < 1e-12);
  CHECK(nice_fft_size(7) == 8);
  CHECK(nice_fft_size(31) == 32);
  CHECK(nice_fft_size(33) == 36);
}

TEST_CASE("multipliers") {
  SpectralField g = oracle::random_field(12, 4);
  SpectralField b = apply_multiplier(g, bessel_symbol(1.0));
  CHECK(sobolev_norm(b, -1.0) == Approx(sobolev_norm(g, 0.0)).epsilon(1e-13));
  auto two = apply_symbol_two_sided(g, derivative_symbol());
  REQUIRE(two.size() == 25u);
  CHECK(std::abs(two[12 + 3] - cplx(0.0, 3.0) * g[3]) < 1e-14);
  CHECK(std::abs(two[12 - 3] - cplx(0.0, -3.0) * g[-3]) < 1e-14);
}

TEST_CASE("field storage invariants") {
  SpectralField f(5);
  f.set(2, cplx(1.0, 2.0));
  CHECK(f[-2] == cplx(1.0, -2.0));
  f.set(0, cplx(3.0, 4.0));
  CHECK(f[0].imag() == 0.0);
  CHECK(f[9] == cplx(0.0, 0.0));
  CHECK(f.resized(1).M() == 1);
  CHECK(f.resized(8)[2] == f[2]);
  CHECK(SpectralField(3).is_zero());
}

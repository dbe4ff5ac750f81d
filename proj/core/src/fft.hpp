#pragma once

#include <complex>
#include <vector>

namespace bbm::detail {

// Real-to-complex transforms of length L backed by cached FFTW plans.
// Safe to call from several threads at once.
void c2r(const std::complex<double>* half, int L, double* out);  // half has L/2+1 entries
void r2c(const double* in, int L, std::complex<double>* half);   // unnormalized forward

}  // namespace bbm::detail

#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace bbm::detail {
namespace {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

const Plans& plans_for(int L) {
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find(L);
  if (it != cache.end()) return it->second;
  double* r = fftw_alloc_real(L);
  fftw_complex* c = fftw_alloc_complex(L / 2 + 1);
  Plans p;
  p.fwd = fftw_plan_dft_r2c_1d(L, r, c, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_c2r_1d(L, c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  return cache.emplace(L, p).first->second;
}

// fftw_malloc'd scratch so the new-array execute interface sees the same
// alignment the plans were created with.
struct Scratch {
  int L = 0;
  double* r = nullptr;
  fftw_complex* c = nullptr;
  ~Scratch() {
    if (r) fftw_free(r);
    if (c) fftw_free(c);
  }
  void ensure(int n) {
    if (n == L) return;
    if (r) fftw_free(r);
    if (c) fftw_free(c);
    r = fftw_alloc_real(n);
    c = fftw_alloc_complex(n / 2 + 1);
    L = n;
  }
};

thread_local Scratch scratch;

}  // namespace

void c2r(const std::complex<double>* half, int L, double* out) {
  const Plans& p = plans_for(L);
  scratch.ensure(L);
  std::memcpy(scratch.c, half, sizeof(fftw_complex) * (L / 2 + 1));
  fftw_execute_dft_c2r(p.bwd, scratch.c, scratch.r);
  std::memcpy(out, scratch.r, sizeof(double) * L);
}

void r2c(const double* in, int L, std::complex<double>* half) {
  const Plans& p = plans_for(L);
  scratch.ensure(L);
  std::memcpy(scratch.r, in, sizeof(double) * L);
  fftw_execute_dft_r2c(p.fwd, scratch.r, scratch.c);
  std::memcpy(static_cast<void*>(half), scratch.c, sizeof(fftw_complex) * (L / 2 + 1));
}

}  // namespace bbm::detail

#include "qtrace/simd.hpp"

namespace qtrace::simd {

namespace {

void cmul_scaled(const cplx* a, const cplx* b, cplx s, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i] * s;
}

void fourier_moments(const double* u, const cplx* w, std::size_t n, int n_max, cplx* out) {
  for (int m = 0; m <= n_max; ++m) out[m] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cplx p = u[k];
    for (int m = 0; m <= n_max; ++m) {
      out[m] += p;
      p *= w[k];
    }
  }
}

void schwarz_sums(const double* u, const cplx* w, std::size_t n, cplx z, cplx* kernel, cplx* deriv) {
  cplx ks = 0.0, ds = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cplx q = 1.0 / (w[k] - z);
    ks += u[k] * (w[k] + z) * q;
    ds += u[k] * w[k] * q * q;
  }
  *kernel = ks;
  *deriv = ds;
}

void blaschke_modulus_sq(const cplx* zeros, std::size_t nz, const cplx* x, std::size_t np, double* out) {
  for (std::size_t p = 0; p < np; ++p) {
    double r = 1.0;
    for (std::size_t j = 0; j < nz; ++j) r *= std::norm(zeros[j] - x[p]) / std::norm(1.0 - std::conj(zeros[j]) * x[p]);
    out[p] = r;
  }
}

} // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable t{"scalar", cmul_scaled, fourier_moments, schwarz_sums, blaschke_modulus_sq};
  return t;
}

} // namespace qtrace::simd

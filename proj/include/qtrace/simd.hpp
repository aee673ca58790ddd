#pragma once

#include <cstddef>

#include "qtrace/core.hpp"

namespace qtrace::simd {

struct KernelTable {
  const char* name;
  // out[i] = a[i]·b[i]·s
  void (*cmul_scaled)(const cplx* a, const cplx* b, cplx s, cplx* out, std::size_t n);
  // out[m] = Σ_k u[k]·w[k]^m, m = 0..n_max
  void (*fourier_moments)(const double* u, const cplx* w, std::size_t n, int n_max, cplx* out);
  // kernel = Σ u·(w+z)/(w−z), deriv = Σ u·w/(w−z)²
  void (*schwarz_sums)(const double* u, const cplx* w, std::size_t n, cplx z, cplx* kernel, cplx* deriv);
  // out[p] = Π_j |(z_j − x_p)/(1 − conj(z_j) x_p)|²
  void (*blaschke_modulus_sq)(const cplx* zeros, std::size_t nz, const cplx* x, std::size_t np, double* out);
};

const KernelTable& scalar_kernels();
const KernelTable& avx2_kernels();
bool avx2_supported();

// AVX2+FMA variant when the CPU reports both, scalar otherwise
const KernelTable& kernels();

} // namespace qtrace::simd

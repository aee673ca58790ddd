#include <immintrin.h>

#include "qtrace/simd.hpp"

namespace qtrace::simd {

namespace {

// two interleaved complex numbers per register
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d br = _mm256_movedup_pd(b);
  __m256d bi = _mm256_permute_pd(b, 0xF);
  __m256d as = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

// |q|² duplicated into both lanes of each complex slot
inline __m256d cnorm(__m256d q) {
  __m256d sq = _mm256_mul_pd(q, q);
  return _mm256_hadd_pd(sq, sq);
}

inline __m256d crecip(__m256d q) {
  const __m256d flip = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  return _mm256_div_pd(_mm256_xor_pd(q, flip), cnorm(q));
}

inline __m256d bcast(cplx c) { return _mm256_set_pd(c.imag(), c.real(), c.imag(), c.real()); }

inline cplx hsum(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return {t[0] + t[2], t[1] + t[3]};
}

void cmul_scaled(const cplx* a, const cplx* b, cplx s, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  const __m256d vs = bcast(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    _mm256_storeu_pd(po + 2 * i, cmul(cmul(va, vb), vs));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i] * s;
}

void fourier_moments(const double* u, const cplx* w, std::size_t n, int n_max, cplx* out) {
  constexpr int max_regs = 32;
  if (n_max >= max_regs) return scalar_kernels().fourier_moments(u, w, n, n_max, out);
  const double* pw = reinterpret_cast<const double*>(w);
  __m256d acc[max_regs];
  for (int m = 0; m <= n_max; ++m) acc[m] = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d vw = _mm256_loadu_pd(pw + 2 * k);
    __m256d p = _mm256_set_pd(0.0, u[k + 1], 0.0, u[k]);
    for (int m = 0; m <= n_max; ++m) {
      acc[m] = _mm256_add_pd(acc[m], p);
      p = cmul(p, vw);
    }
  }
  for (int m = 0; m <= n_max; ++m) out[m] = hsum(acc[m]);
  for (; k < n; ++k) {
    cplx p = u[k];
    for (int m = 0; m <= n_max; ++m) {
      out[m] += p;
      p *= w[k];
    }
  }
}

void schwarz_sums(const double* u, const cplx* w, std::size_t n, cplx z, cplx* kernel, cplx* deriv) {
  const double* pw = reinterpret_cast<const double*>(w);
  const __m256d vz = bcast(z);
  __m256d ks = _mm256_setzero_pd(), ds = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d vw = _mm256_loadu_pd(pw + 2 * k);
    __m256d vu = _mm256_set_pd(u[k + 1], u[k + 1], u[k], u[k]);
    __m256d q = crecip(_mm256_sub_pd(vw, vz));
    ks = _mm256_fmadd_pd(vu, cmul(_mm256_add_pd(vw, vz), q), ks);
    ds = _mm256_fmadd_pd(vu, cmul(vw, cmul(q, q)), ds);
  }
  cplx kt = hsum(ks), dt = hsum(ds);
  for (; k < n; ++k) {
    cplx q = 1.0 / (w[k] - z);
    kt += u[k] * (w[k] + z) * q;
    dt += u[k] * w[k] * q * q;
  }
  *kernel = kt;
  *deriv = dt;
}

void blaschke_modulus_sq(const cplx* zeros, std::size_t nz, const cplx* x, std::size_t np, double* out) {
  const double* px = reinterpret_cast<const double*>(x);
  const __m256d one = _mm256_set_pd(0.0, 1.0, 0.0, 1.0);
  std::size_t p = 0;
  for (; p + 2 <= np; p += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * p);
    __m256d r = _mm256_set1_pd(1.0);
    for (std::size_t j = 0; j < nz; ++j) {
      __m256d num = _mm256_sub_pd(bcast(zeros[j]), vx);
      __m256d den = _mm256_sub_pd(one, cmul(bcast(std::conj(zeros[j])), vx));
      r = _mm256_mul_pd(r, _mm256_div_pd(cnorm(num), cnorm(den)));
    }
    alignas(32) double t[4];
    _mm256_store_pd(t, r);
    out[p] = t[0];
    out[p + 1] = t[2];
  }
  for (; p < np; ++p) {
    double r = 1.0;
    for (std::size_t j = 0; j < nz; ++j) r *= std::norm(zeros[j] - x[p]) / std::norm(1.0 - std::conj(zeros[j]) * x[p]);
    out[p] = r;
  }
}

} // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable t{"avx2", cmul_scaled, fourier_moments, schwarz_sums, blaschke_modulus_sq};
  return t;
}

} // namespace qtrace::simd

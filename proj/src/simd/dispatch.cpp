#include "qtrace/simd.hpp"

namespace qtrace::simd {

bool avx2_supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const KernelTable& kernels() {
  static const KernelTable& chosen = avx2_supported() ? avx2_kernels() : scalar_kernels();
  return chosen;
}

} // namespace qtrace::simd

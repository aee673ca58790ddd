#include <cmath>

#include "qtrace/simd.hpp"
#include "qtrace/trace.hpp"

namespace qtrace {

BlaschkeProduct blaschke_build(const EigenvalueSet& eigs, int n_max) {
  BlaschkeProduct b;
  b.zeros = eigs.zs();
  b.multiplicities = eigs.multiplicities;
  b.Bn.assign(n_max + 1, 0.0);
  for (size_t j = 0; j < b.zeros.size(); ++j) {
    const cplx zj = b.zeros[j];
    const double m = b.multiplicities[j];
    if (std::abs(zj) > 1 - 1e-8) throw Error(ErrorKind::ZeroOnBoundary, "|z_j| > 1 - 1e-8");
    b.B0 += m * std::log(std::abs(zj));
    for (int n = 1; n <= n_max; ++n) b.Bn[n] += m / n * (std::pow(zj, -n) - std::pow(std::conj(zj), n));
  }
  return b;
}

cplx BlaschkeProduct::operator()(cplx z) const {
  cplx p = 1.0;
  for (size_t j = 0; j < zeros.size(); ++j) {
    const cplx zj = zeros[j];
    cplx f = std::abs(zj) / zj * (zj - z) / (1.0 - std::conj(zj) * z);
    p *= std::pow(f, multiplicities[j]);
  }
  return p;
}

double BlaschkeProduct::abs(cplx z) const { return abs_many({z})[0]; }

std::vector<double> BlaschkeProduct::abs_many(const std::vector<cplx>& z) const {
  std::vector<cplx> zz;
  for (size_t j = 0; j < zeros.size(); ++j) zz.insert(zz.end(), multiplicities[j], zeros[j]);
  std::vector<double> out(z.size());
  simd::kernels().blaschke_modulus_sq(zz.data(), zz.size(), z.data(), z.size(), out.data());
  for (auto& v : out) v = std::sqrt(v);
  return out;
}

cplx BlaschkeProduct::log_derivative(cplx z) const {
  cplx s = 0.0;
  for (size_t j = 0; j < zeros.size(); ++j) {
    const cplx zj = zeros[j];
    s += double(multiplicities[j]) * (1 - std::norm(zj)) / ((z - zj) * (1.0 - std::conj(zj) * z));
  }
  return s;
}

} // namespace qtrace

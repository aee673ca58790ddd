#include <cmath>

#include "qtrace/trace.hpp"

namespace qtrace {

T1Result trace_identity_t1(const EigenvalueSet& eigs, const BoundaryMeasure& m,
                           const std::optional<PaperConstants>& constants, const TimePeriodicPotential& V,
                           double tol) {
  T1Result r;
  for (size_t j = 0; j < eigs.lambdas.size(); ++j) r.lhs_sum += eigs.tau * eigs.multiplicities[j] * eigs.lambdas[j].imag();
  r.rhs_integral = m.mass / (2 * pi);
  r.gamma_estimate = r.rhs_integral - r.lhs_sum;
  r.residual = std::abs(r.gamma_estimate);
  r.nonnegative = r.rhs_integral >= -tol;
  if (constants) {
    double nv = mixed_norm(V, constants->p, 2.0);
    r.e1_bound = 0.5 * constants->C_bullet * constants->C_bullet * nv * nv;
    r.e1_margin = *r.e1_bound - r.rhs_integral;
  }
  if (r.gamma_estimate < -10 * tol)
    throw Error(ErrorKind::NegativeGamma, "gamma estimate " + std::to_string(r.gamma_estimate));
  return r;
}

std::vector<T2Entry> trace_identity_t2(const BlaschkeProduct& b, const TaylorCoeffs& t, const BoundaryMeasure& m,
                                       int n_max) {
  std::vector<T2Entry> out;
  for (int n = 1; n <= n_max; ++n) {
    T2Entry e;
    e.n = n;
    e.B = n < int(b.Bn.size()) ? b.Bn[n] : 0.0;
    e.psi = n <= int(t.coeffs.size()) ? t.coeffs[n - 1] : 0.0;
    e.mu = n < int(m.mu.size()) ? m.mu[n] : 0.0;
    e.residual = std::abs(e.B - (e.mu - e.psi));
    e.residual_literal = std::abs(e.B - e.psi - e.mu);
    out.push_back(e);
  }
  return out;
}

std::vector<TrREntry> resolvent_trace_formula_check(const DeterminantEvaluator& ev, const BlaschkeProduct& b,
                                                    const BoundaryMeasure& m, const std::vector<cplx>& z_samples) {
  std::vector<TrREntry> out(z_samples.size());
  const double tau = ev.tau();
  for (size_t i = 0; i < z_samples.size(); ++i) {
    TrREntry& e = out[i];
    e.z = z_samples[i];
    e.lambda = lambda_from_z(e.z, tau);
    cplx tr = ev.trivial() ? cplx(0.0) : resolvent_trace(ev.potential(), ev.laplacian(), e.lambda);
    // dλ/dz = 1/(iτz)
    e.lhs = I1 / (tau * e.z) * tr;
    e.rhs = b.log_derivative(e.z) + schwarz_derivative(m, e.z);
    e.dlog_psi = ev.dlog_psi(e.z);
    e.residual = std::abs(e.lhs - e.rhs);
    e.residual_literal = std::abs(-e.lhs - e.rhs);
  }
  return out;
}

double factorization_residual(const DeterminantEvaluator& ev, const BlaschkeProduct& b, const BoundaryMeasure& m,
                              const std::vector<cplx>& zs) {
  double worst = 0.0;
  for (cplx z : zs) {
    cplx psi = std::exp(ev.log_psi(z));
    worst = std::max(worst, std::abs(psi - b(z) * std::exp(schwarz_integral(m, z))));
  }
  return worst;
}

} // namespace qtrace

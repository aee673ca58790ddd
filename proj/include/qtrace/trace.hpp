#pragma once

#include <optional>
#include <vector>

#include "qtrace/spectra.hpp"

namespace qtrace {

struct BlaschkeProduct {
  std::vector<cplx> zeros;
  std::vector<int> multiplicities;
  double B0 = 0.0;        // log B(0) = Σ log|z_j|
  std::vector<cplx> Bn;   // index n = 1..n_max, Bn[0] unused

  cplx operator()(cplx z) const;
  double abs(cplx z) const;
  cplx log_derivative(cplx z) const; // Σ(1−|z_j|²)/((z−z_j)(1−z̄_j z))
  std::vector<double> abs_many(const std::vector<cplx>& z) const;
};

BlaschkeProduct blaschke_build(const EigenvalueSet& eigs, int n_max);

struct CircleConfig {
  std::vector<double> radii{0.99, 0.999};
  int base_samples = 2048;
  double samples_per_gap = 40.0; // at least this many samples per unit of 1/(1−ρ)
  int n_max = 4;
};

struct CircleSamples {
  double rho = 1.0;
  std::vector<double> t;
  std::vector<double> log_abs; // log|ψ(ρe^{it})|
  std::vector<cplx> w;         // e^{it}
  double offset = 0.0;         // grid shift in units of the spacing
};

struct BoundaryMeasure {
  double radius = 1.0;             // extrapolation target
  std::vector<CircleSamples> circles;
  double mass = 0.0;               // μ(𝕋) = ∫ log|ψ(e^{it})| dt
  std::vector<cplx> mu;            // μ_n = (1/π)∫ e^{−int}dμ, index n, mu[0] unused
  std::vector<double> mass_at;     // μ(𝕋) on each sampled circle
  double singular_estimate = 0.0;  // extrapolation gap of μ(𝕋)/2π
  bool zero = false;               // ψ ≡ 1
};

BoundaryMeasure boundary_measure(const DeterminantEvaluator& ev, const CircleConfig& cfg = {});

// Ψ(z) and Ψ′(z) from the sampled measure, extrapolated to ρ → 1
cplx schwarz_integral(const BoundaryMeasure& m, cplx z);
cplx schwarz_derivative(const BoundaryMeasure& m, cplx z);

struct T1Result {
  double lhs_sum = 0.0;      // τΣ Im λ_j
  double rhs_integral = 0.0; // (1/2π)∫ log|ψ(e^{it})| dt
  double gamma_estimate = 0.0;
  double residual = 0.0;
  bool nonnegative = true;
  std::optional<double> e1_bound; // (C_•²/2)‖V‖²_{p,2}
  std::optional<double> e1_margin;
};

T1Result trace_identity_t1(const EigenvalueSet& eigs, const BoundaryMeasure& m,
                           const std::optional<PaperConstants>& constants, const TimePeriodicPotential& V,
                           double tol = 1e-6);

struct T2Entry {
  int n = 0;
  cplx B, psi, mu;
  double residual = 0.0;         // |B_n − (μ_n − ψ_n)|
  double residual_literal = 0.0; // |B_n − ψ_n − μ_n|
};

std::vector<T2Entry> trace_identity_t2(const BlaschkeProduct& b, const TaylorCoeffs& t, const BoundaryMeasure& m,
                                       int n_max);

struct TrREntry {
  cplx z, lambda;
  cplx lhs;          // (i/(τz))·Tr(R − R₀ + R₀VR₀)
  cplx rhs;          // Blaschke sum + Schwarz derivative
  cplx dlog_psi;     // ψ′/ψ from the reduced evaluator
  double residual = 0.0;
  double residual_literal = 0.0; // with the opposite sign in front of the trace
};

std::vector<TrREntry> resolvent_trace_formula_check(const DeterminantEvaluator& ev, const BlaschkeProduct& b,
                                                    const BoundaryMeasure& m, const std::vector<cplx>& z_samples);

// |ψ(z) − B(z)e^{Ψ(z)}| over the given points
double factorization_residual(const DeterminantEvaluator& ev, const BlaschkeProduct& b, const BoundaryMeasure& m,
                              const std::vector<cplx>& zs);

struct TraceReport {
  std::vector<cplx> lambdas;
  std::vector<cplx> zs;
  std::vector<cplx> B_n, psi_n, mu_n;
  cplx psi1_closed, psi2_closed, psi2_literal;
  T1Result t1;
  std::vector<T2Entry> t2;
  double t3_residual = 0.0;
  std::vector<TrREntry> trR;
  double singular_estimate = 0.0;
  double factorization = 0.0;
};

} // namespace qtrace

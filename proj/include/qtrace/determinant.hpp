#pragma once

#include <vector>

#include "qtrace/floquet.hpp"

namespace qtrace {

enum class DetMethod { DirectVR0, SymmetrizedBS, RankReduced };
const char* to_string(DetMethod m);

struct Det2Value {
  cplx value = 1.0;
  double log_abs = 0.0;
  cplx trace_A = 0.0;
  DetMethod method = DetMethod::DirectVR0;
  cplx log_value = 0.0;         // log of value; arg branch from the factorization unless tracked
  cplx log_normalization = 0.0; // log of the equal-time factor divided out, 0 for plain det2
};

Det2Value det2(const CMat& A);

// |det₂(I+XY) − det₂(I+YX)| / max(1, |det₂(I+XY)|)
double det2_commutation_check(const CMat& X, const CMat& Y);

struct Lemma21Report {
  double ab2 = 0.0; // |det(e^A e^{-A-B} e^B) − 1|
  double ab4 = 0.0; // relative gap of the two sides of the factorization
};

Lemma21Report lemma21_identity_suite(const CMat& A, const CMat& B);

// Σ_{k,x} log(1 + w·ih·V_x(t_k)) − w·ih·V_x(t_k): log det₂ of the equal-time
// part of the grid kernel, which the continuum Volterra determinant lacks
cplx equal_time_log_factor(const TimePeriodicPotential& V, double diag_weight = default_diag_weight);

// V·R₀(λ) and |V|^{1/2} R₀(λ) |V|^{1/2}e^{i arg V} on the time grid
CMat assemble_VR0(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda);
CMat assemble_BS(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda);

// det₂(I + VR₀(λ)) divided by the equal-time factor
Det2Value D_of_lambda(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda,
                      DetMethod method = DetMethod::DirectVR0);

// Tr(R − R₀ + R₀VR₀) = Tr((R₀V)²R) with R = (I + R₀V)^{-1}R₀
cplx resolvent_trace(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda);

// holds Ṽ_k, G₀ = ih·ΣṼ_k and G = E·(I+F₁)^{-1}·C in the Δ-eigenbasis
class DeterminantEvaluator {
public:
  DeterminantEvaluator(const TimePeriodicPotential& V, const Laplacian& lap,
                       double diag_weight = default_diag_weight);

  Det2Value psi(cplx z) const;
  cplx log_psi(cplx z) const;
  // (log f, −ΣΓ_θ G₀_θθ): the zero-carrying factor and the zero-free exponent
  std::pair<cplx, cplx> log_psi_parts(cplx z) const;
  // log ψ continued from log ψ(0) = 0 along the segment [0, z]
  cplx log_psi_tracked(cplx z) const;
  cplx dlog_psi(cplx z) const;
  // full space-time det₂ of I + F₁ + γ(z)F₂ over the equal-time factor; small systems only
  Det2Value psi_full(cplx z) const;

  // f(z) = det(I + Γ(z)G) carries every zero of ψ; returns (log f, f′/f) from one factorization
  std::pair<cplx, cplx> zero_factor(cplx z) const;
  // f(z) = det(I − zW)/Π(1 − z a_θ), W = diag(a)(I − G)
  const CMat& W() const { return W_; }

  const CMat& G() const { return G_; }
  const CMat& G0() const { return G0_; }
  const CVec& a() const { return a_; }
  double tau() const { return V_.grid.tau; }
  const TimePeriodicPotential& potential() const { return V_; }
  const Laplacian& laplacian() const { return lap_; }
  double diag_weight() const { return w_; }
  bool trivial() const { return trivial_; }

private:
  CVec gamma(cplx z) const;

  TimePeriodicPotential V_;
  Laplacian lap_;
  double w_;
  bool trivial_;
  CVec a_;
  CMat G_, G0_, W_;
};

struct TaylorCoeffs {
  std::vector<cplx> coeffs;  // ψ_1..ψ_nmax from the trace series
  cplx psi1_closed = 0.0;    // −Tr(a·F₁(I+F₁)^{-1}F₂)
  cplx psi2_closed = 0.0;    // −Tr(a²·F₁(I+F₁)^{-1}F₂) − ½Tr((a(I+F₁)^{-1}F₂)²)
  cplx psi2_literal = 0.0;   // with +½Tr F₁((I+F₁)^{-1}aF₂)² as the second term
  std::vector<cplx> cauchy;  // Cauchy coefficients of log ψ
  double radius_hint = 0.0;  // circle used for the Cauchy integral
};

TaylorCoeffs taylor_psi(const DeterminantEvaluator& ev, int n_max);

struct LogSeries {
  cplx sum = 0.0;             // −Σ_{n=2}^{n_max}((−1)^n/n)T_n
  std::vector<cplx> terms;    // T_n = Tr(VR₀)^n, index n
  double hs_norm = 0.0;       // ‖VR₀‖_HS
  double tail_bound = 0.0;
  cplx reference = 0.0;       // log det₂(I + VR₀) on the branch nearest sum
};

LogSeries log_trace_series(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda, int n_max);

} // namespace qtrace

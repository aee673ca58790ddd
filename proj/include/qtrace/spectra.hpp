#pragma once

#include <string>
#include <vector>

#include "qtrace/determinant.hpp"

namespace qtrace {

enum class EigMethod { Floquet, Monodromy, PsiZeros };
const char* to_string(EigMethod m);

// quasienergies folded into Re λ ∈ [0, ω), Im λ > 0
struct EigenvalueSet {
  std::vector<cplx> lambdas;
  std::vector<int> multiplicities;
  EigMethod method = EigMethod::Floquet;
  double tau = 1.0;

  double omega() const { return 2 * pi / tau; }
  std::vector<cplx> zs() const; // e^{iτλ}
  int total() const;            // with multiplicity
};

// fold Re into [0, ω)
cplx fold(cplx lambda, double tau);
// λ from z = e^{iτλ}, folded
cplx lambda_from_z(cplx z, double tau);

struct FloquetFilter {
  double im_min = 1e-6;
  double edge_mass = 1e-3;
  double merge = 1e-7;
  int window_shift = 0;
};

EigenvalueSet eigenvalues_floquet(const TimePeriodicPotential& V, const Laplacian& lap, int n_t,
                                  const FloquetFilter& cfg = {});

EigenvalueSet eigenvalues_monodromy(const MonodromyResult& mon, double im_min = 1e-6, double merge = 1e-7);

struct ZeroSearchConfig {
  double r_max = 0.999;
  double r_min = 0.0;      // 0: derived from ν₀ = 2‖V‖²_{2,2}
  int base_samples = 64;   // initial points per full circle
  int max_refine = 16;     // bisection depth per segment
  double newton_tol = 1e-14;
};

struct ZeroSearchStats {
  std::vector<std::pair<double, int>> circle_counts; // (radius, winding)
  int evaluations = 0;
};

// argument principle on ψ over polar cells, then Newton
EigenvalueSet zeros_of_psi(const DeterminantEvaluator& ev, const ZeroSearchConfig& cfg = {},
                           ZeroSearchStats* stats = nullptr);

// winding number of ψ around |z| = r
int winding_on_circle(const DeterminantEvaluator& ev, double r, const ZeroSearchConfig& cfg = {});

struct BoundEntry {
  cplx lambda;
  double lhs = 0.0;    // ν(1 − e^{−τν})
  double margin = 0.0; // 2‖V‖²_{2,2} − lhs
  bool im_bound_ok = true;
  bool flagged = false;
};

struct BoundReport {
  std::vector<BoundEntry> entries;
  double rhs = 0.0;       // 2‖V‖²_{2,2}
  double nu0 = 0.0;       // search ceiling
  double im_V_norm = 0.0; // sup_t ‖Im V(t)‖
  bool holds = true;
  double min_margin() const;
};

BoundReport eigenvalue_bound_check(const EigenvalueSet& eigs, const TimePeriodicPotential& V);

struct Matching {
  std::vector<std::pair<int, int>> pairs;
  double max_distance = 0.0;
  int unmatched = 0;
};

// distance in λ with Re measured modulo ω
double strip_distance(cplx a, cplx b, double tau);
Matching match_eigenvalues(const EigenvalueSet& a, const EigenvalueSet& b);

} // namespace qtrace

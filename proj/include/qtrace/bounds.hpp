#pragma once

#include "qtrace/determinant.hpp"

namespace qtrace {

// ‖R₀(λ)V‖²_HS against 2c/(ν(1−e^{−ντ})), c = ∫‖V(t)‖²_HS dt
BoundCheck res2_check(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda);

// ‖J₁Ṽ‖²_HS against ∫‖V(t)‖²_HS(τ−t)dt
BoundCheck res2j_J1_check(const TimePeriodicPotential& V, const Laplacian& lap);
// ‖J₂Ṽ‖²_HS against τ∫‖V(t)‖²_HS dt
BoundCheck res2j_J2_check(const TimePeriodicPotential& V, const Laplacian& lap);

// log|ψ(z)| against (C_•²/2)‖V‖²_{p,2}; compared in the log domain
BoundCheck psi_hinf_check(const DeterminantEvaluator& ev, cplx z, double p);

} // namespace qtrace

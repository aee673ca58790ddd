#pragma once

#include <utility>

#include "qtrace/potential.hpp"

namespace qtrace {

enum class Repr { TimeGrid, TimeFourier };

// block index = time (or Fourier mode) × site; site fastest
struct SpaceTimeOperator {
  LatticeBox box;
  TimeGrid grid;
  Repr repr = Repr::TimeGrid;
  int n_t = 0; // retained modes |n| <= n_t in the Fourier representation
  CMat entries;

  int blocks() const { return repr == Repr::TimeGrid ? grid.M : 2 * n_t + 1; }
  auto block(int a, int b) const {
    const int S = box.site_count();
    return entries.block(a * S, b * S, S, S);
  }
};

// weight of the k = l term in J₁ (the kernel's jump convention)
inline constexpr double default_diag_weight = 0.5;

CMat op_J1(const TimeGrid& grid, double diag_weight = default_diag_weight);
CMat op_J2(const TimeGrid& grid);

// blocks e^{it_kΔ}V(t_k)e^{-it_kΔ} on the time diagonal
SpaceTimeOperator conjugated_potential(const TimePeriodicPotential& V, const Laplacian& lap);

// F₁ = J₁Ṽ, F₂ = J₂Ṽ
std::pair<SpaceTimeOperator, SpaceTimeOperator> build_F1_F2(const TimePeriodicPotential& V, const Laplacian& lap,
                                                            double diag_weight = default_diag_weight);

// R₀(λ) on the time grid, assembled from its 2M-1 distinct blocks
SpaceTimeOperator free_resolvent(cplx lambda, const Laplacian& lap, const TimeGrid& grid,
                                 double diag_weight = default_diag_weight);

// B_{nm} = (1/M)Σ_{kl} e^{-iωn t_k} K_{kl} e^{iωm t_l}, |n|,|m| <= n_t
SpaceTimeOperator to_fourier(const SpaceTimeOperator& op, int n_t);

// ⟨e^{iωt}⟩ on the time grid, tensored with the identity on sites
SpaceTimeOperator time_phase(const LatticeBox& box, const TimeGrid& grid, int n);

// smallest cutoff with max_x|V̂_j| below rel·max for every |j| > cutoff
int harmonic_cutoff(const TimePeriodicPotential& V, double rel = 1e-8);

SpaceTimeOperator build_floquet_matrix(const TimePeriodicPotential& V, const Laplacian& lap, int n_t,
                                       int window_shift = 0);

enum class Integrator { RK4, Magnus2 };

struct MonodromyResult {
  CMat U_tau;
  Integrator integrator = Integrator::RK4;
  int steps = 0;
  double tau = 1.0;
};

MonodromyResult monodromy(const TimePeriodicPotential& V, const Laplacian& lap, int steps,
                          Integrator integrator = Integrator::RK4);

} // namespace qtrace

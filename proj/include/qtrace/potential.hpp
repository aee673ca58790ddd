#pragma once

#include <cstdint>
#include <string>

#include "qtrace/lattice.hpp"

namespace qtrace {

struct TimeGrid {
  double tau = 1.0;
  int M = 64;

  TimeGrid() = default;
  TimeGrid(double tau_, int M_);
  double h() const { return tau / M; }
  double omega() const { return 2 * pi / tau; }
  double node(int k) const { return k * h(); }
  RVec weights() const { return RVec::Constant(M, h()); }
};

// V_x(t_k) stored as an M × site_count array
struct TimePeriodicPotential {
  LatticeBox box;
  TimeGrid grid;
  CMat values;

  TimePeriodicPotential() = default;
  TimePeriodicPotential(LatticeBox b, TimeGrid g);
  TimePeriodicPotential(LatticeBox b, TimeGrid g, CMat v);

  int sites() const { return static_cast<int>(values.cols()); }
  // V̂_j = (1/M)Σ_k e^{-ijωt_k}V(t_k), Nyquist mode halved, zero beyond
  CVec harmonic(int j) const;
  // trigonometric interpolant at arbitrary t
  CVec at(double t) const;
  bool is_zero() const { return values.cwiseAbs().maxCoeff() == 0.0; }
  // same trigonometric interpolant resampled on another grid
  TimePeriodicPotential resampled(int M_new) const;

  // nonzero harmonics cached for fast interpolation
  struct Harmonics {
    std::vector<int> j;
    std::vector<CVec> coef;
  };
  Harmonics harmonics(double rel_cut = 1e-15) const;
};

double mixed_norm(const TimePeriodicPotential& V, double p, double r);

// ∫₀^τ ‖V(t)‖²_HS dt
double hs_time_integral(const TimePeriodicPotential& V);

struct GeneratorSpec {
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  double localization_radius = 0.0;
  double imaginary_fraction = 0.5;
};

// V_x(t) = A·w_x·((1-f) + i f)·(1 + m_x cos(ωt + φ_x)) on sites within the
// localization radius of the origin; w, m, φ drawn from a seeded mt19937_64
TimePeriodicPotential generate_potential(const LatticeBox& box, const TimeGrid& grid, const GeneratorSpec& spec);

// file IO; format picked from the extension (.json or .csv)
TimePeriodicPotential read_potential(const std::string& path);
void write_potential(const TimePeriodicPotential& V, const std::string& path);

} // namespace qtrace

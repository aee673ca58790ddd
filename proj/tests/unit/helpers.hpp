#pragma once

#include <random>

#include "doctest.h"
#include "qtrace/trace.hpp"

namespace qtrace::test {

inline TimePeriodicPotential make_potential(const LatticeBox& box, int M, double amplitude, std::uint64_t seed,
                                            double radius = 0.0, double imag_fraction = 2.0 / 3.0, double tau = 1.0) {
  return generate_potential(box, TimeGrid(tau, M), GeneratorSpec{seed, amplitude, radius, imag_fraction});
}

// fully random complex potential on every site
inline TimePeriodicPotential random_potential(const LatticeBox& box, int M, double scale, std::mt19937_64& rng,
                                              double tau = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  TimePeriodicPotential V(box, TimeGrid(tau, M));
  // a few smooth harmonics so the grid samples a genuine periodic function
  for (int x = 0; x < box.site_count(); ++x) {
    cplx c0(n(rng), n(rng)), c1(n(rng), n(rng)), c2(n(rng), n(rng));
    for (int k = 0; k < M; ++k) {
      double t = V.grid.node(k), w = V.grid.omega();
      V.values(k, x) = c0 + c1 * std::cos(w * t) + c2 * std::sin(2 * w * t);
    }
  }
  return V;
}

inline CMat random_matrix(int r, int c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  CMat A(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) A(i, j) = {n(rng), n(rng)};
  return A;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

} // namespace qtrace::test

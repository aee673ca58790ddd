#include "qtrace/bounds.hpp"

namespace qtrace {

namespace {

// relative slack for bounds that hold with equality on the grid
BoundCheck make(double observed, double bound) {
  return {observed, bound, observed <= bound + 1e-10 * std::abs(bound)};
}

} // namespace

BoundCheck res2_check(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda) {
  const double nu = lambda.imag();
  if (!(nu > 0)) throw std::invalid_argument("res2_check: Im λ must be positive");
  const int S = lap.size(), M = V.grid.M;
  auto R0 = free_resolvent(lambda, lap, V.grid);
  double sq = 0.0;
  for (int l = 0; l < M; ++l)
    for (int x = 0; x < S; ++x) sq += R0.entries.col(l * S + x).squaredNorm() * std::norm(V.values(l, x));
  const double c = hs_time_integral(V);
  return make(sq, 2 * c / (nu * (1 - std::exp(-nu * V.grid.tau))));
}

BoundCheck res2j_J1_check(const TimePeriodicPotential& V, const Laplacian& lap) {
  auto [F1, F2] = build_F1_F2(V, lap);
  double rhs = 0.0;
  for (int k = 0; k < V.grid.M; ++k)
    rhs += V.grid.h() * V.values.row(k).squaredNorm() * (V.grid.tau - V.grid.node(k));
  return make(F1.entries.squaredNorm(), rhs);
}

BoundCheck res2j_J2_check(const TimePeriodicPotential& V, const Laplacian& lap) {
  auto [F1, F2] = build_F1_F2(V, lap);
  return make(F2.entries.squaredNorm(), V.grid.tau * hs_time_integral(V));
}

BoundCheck psi_hinf_check(const DeterminantEvaluator& ev, cplx z, double p) {
  const auto& V = ev.potential();
  auto c = paper_constants(p, V.box.d, V.grid.tau);
  const double nv = mixed_norm(V, p, 2.0);
  return make(ev.log_psi(z).real(), 0.5 * c.C_bullet * c.C_bullet * nv * nv);
}

} // namespace qtrace

#include <unsupported/Eigen/MatrixFunctions>

#include "qtrace/floquet.hpp"

namespace qtrace {

MonodromyResult monodromy(const TimePeriodicPotential& V, const Laplacian& lap, int steps, Integrator integrator) {
  if (steps < 16) throw std::invalid_argument("monodromy: steps >= 16");
  const int S = lap.size();
  const double tau = V.grid.tau, dt = tau / steps, w = V.grid.omega();
  auto hm = V.harmonics();
  CMat D = lap.matrix.cast<cplx>();
  auto vdiag = [&](double t) {
    CVec v = CVec::Zero(S);
    for (size_t i = 0; i < hm.j.size(); ++i) v += std::polar(1.0, hm.j[i] * w * t) * hm.coef[i];
    return v;
  };
  // -i(Δ + V(t))U
  auto rhs = [&](const CVec& v, const CMat& U) -> CMat { return -I1 * (D * U + v.asDiagonal() * U); };

  CMat U = CMat::Identity(S, S);
  CVec v0 = vdiag(0.0);
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    CVec vm = vdiag(t + dt / 2);
    if (integrator == Integrator::RK4) {
      CVec v1 = vdiag(t + dt);
      CMat k1 = rhs(v0, U);
      CMat k2 = rhs(vm, U + (dt / 2) * k1);
      CMat k3 = rhs(vm, U + (dt / 2) * k2);
      CMat k4 = rhs(v1, U + dt * k3);
      U += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
      v0 = v1;
    } else {
      CMat H = D;
      H.diagonal() += vm;
      CMat step = (-I1 * dt * H).exp();
      U = step * U;
    }
  }
  return {U, integrator, steps, tau};
}

} // namespace qtrace

#include "helpers.hpp"

using namespace qtrace;

TEST_SUITE("taylor") {

TEST_CASE("two-site toy: closed form, series and Cauchy agree") {
  Laplacian lap(LatticeBox({2}));
  auto V = test::make_potential(lap.box, 64, 1.5, 3, 1.0);
  DeterminantEvaluator ev(V, lap);
  auto t = taylor_psi(ev, 4);
  CHECK(test::rel(t.psi1_closed, t.cauchy[0]) < 1e-5);
  CHECK(test::rel(t.psi2_closed, t.cauchy[1]) < 1e-5);
  CHECK(test::rel(t.psi1_closed, t.coeffs[0]) < 1e-12);
  CHECK(test::rel(t.psi2_closed, t.coeffs[1]) < 1e-12);
  for (int n = 2; n < 4; ++n) CHECK(test::rel(t.coeffs[n], t.cauchy[n]) < 1e-5);
  CHECK(t.radius_hint >= 0.05);
}

TEST_CASE("closed forms against derivatives of log ψ at the origin") {
  Laplacian lap(LatticeBox({3}));
  auto V = test::make_potential(lap.box, 32, 1.0, 9, 1.0);
  DeterminantEvaluator ev(V, lap);
  auto t = taylor_psi(ev, 2);
  // log ψ(z) = ψ₁z + ψ₂z² + …
  CHECK(test::rel(ev.dlog_psi(0.0), t.psi1_closed) < 1e-12);
  const double h = 1e-3;
  cplx d2 = (8.0 * (ev.dlog_psi(h) - ev.dlog_psi(-h)) - (ev.dlog_psi(2 * h) - ev.dlog_psi(-2 * h))) / (12 * h);
  CHECK(test::rel(d2, 2.0 * t.psi2_closed) < 1e-8);
  // the literal second-order form differs
  CHECK(std::abs(t.psi2_literal - t.psi2_closed) > 1e-3 * std::abs(t.psi2_closed));
}

TEST_CASE("zero potential") {
  Laplacian lap(LatticeBox({2}));
  TimePeriodicPotential Z(lap.box, TimeGrid(1.0, 8));
  DeterminantEvaluator ev(Z, lap);
  auto t = taylor_psi(ev, 3);
  for (auto c : t.coeffs) CHECK(c == cplx(0.0));
  CHECK(t.psi1_closed == cplx(0.0));
  CHECK_THROWS(taylor_psi(ev, 9));
}

}

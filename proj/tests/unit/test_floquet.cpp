#include "helpers.hpp"
#include "qtrace/linalg.hpp"

using namespace qtrace;

TEST_SUITE("floquet") {

TEST_CASE("J1 and J2 on constants") {
  TimeGrid g(2.0, 32);
  CMat J1 = op_J1(g), J2 = op_J2(g);
  CVec one = CVec::Ones(32);
  CVec a = J2 * one, b = J1 * one;
  for (int k = 0; k < 32; ++k) {
    CHECK(std::abs(a(k) - cplx(0, 2.0)) < 1e-13);
    // left-endpoint rule with half diagonal: i(t_k + h/2)
    CHECK(std::abs(b(k) - I1 * (g.node(k) + g.h() / 2)) < 1e-13);
    CHECK(std::abs(b(k) - I1 * g.node(k)) <= g.h());
  }
  // strictly lower triangular part is nilpotent
  CMat L = J1.triangularView<Eigen::StrictlyLower>();
  CMat P = CMat::Identity(32, 32);
  for (int i = 0; i < 32; ++i) P = P * L;
  CHECK(P.norm() == 0.0);
}

TEST_CASE("conjugated potential blocks") {
  Laplacian lap(LatticeBox({3, 3}));
  auto V = test::make_potential(lap.box, 8, 1.0, 3, 1.5);
  auto Vt = conjugated_potential(V, lap);
  const int S = 9;
  CHECK((CMat(Vt.block(0, 0)) - CMat(V.values.row(0).transpose().asDiagonal())).norm() < 1e-13);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(Vt.block(k, k).trace() - V.values.row(k).sum()) < 1e-12);
  TimePeriodicPotential C(lap.box, V.grid);
  C.values.setConstant(cplx(0.3, 0.7));
  auto Ct = conjugated_potential(C, lap);
  CHECK((Ct.entries - cplx(0.3, 0.7) * CMat::Identity(8 * S, 8 * S)).norm() < 1e-12);
}

TEST_CASE("F1, F2 structure and HS bounds") {
  std::mt19937_64 rng(11);
  Laplacian lap(LatticeBox({2, 2}));
  auto V = test::random_potential(lap.box, 12, 0.7, rng);
  auto [F1, F2] = build_F1_F2(V, lap);
  const int S = 4, M = 12;
  // rank(F₂) <= S
  Eigen::JacobiSVD<CMat> svd(F2.entries);
  auto sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-10 * sv(0);
  CHECK(rank <= S);
  // Volterra: strictly block-lower part nilpotent
  CMat L = F1.entries;
  for (int k = 0; k < M; ++k) L.block(k * S, k * S, S, S).setZero();
  for (int k = 0; k < M; ++k)
    for (int l = k + 1; l < M; ++l) CHECK(L.block(k * S, l * S, S, S).norm() == 0.0);
  CMat P = CMat::Identity(M * S, M * S);
  for (int i = 0; i < M; ++i) P = P * L;
  CHECK(P.norm() < 1e-12);
  double sup = 0.0;
  for (int k = 0; k < M; ++k) sup = std::max(sup, V.values.row(k).squaredNorm());
  CHECK(F1.entries.squaredNorm() <= V.grid.tau * V.grid.tau / 2 * sup);
  CHECK(F2.entries.squaredNorm() <= V.grid.tau * hs_time_integral(V) * (1 + 1e-12));
}

TEST_CASE("scalar free resolvent reduces to the resolvent of ∂") {
  // one Dirichlet site: Δ = 2, so φ = λ − 2
  LatticeBox box({1}, Boundary::Dirichlet);
  Laplacian lap(box);
  TimeGrid g(1.0, 16);
  cplx lam(0.7, 0.4);
  auto R = free_resolvent(lam, lap, g);
  const cplx phi = lam - lap.eigenvalues(0), z = std::exp(I1 * g.tau * phi);
  for (int k = 0; k < 16; ++k)
    for (int l = 0; l < 16; ++l) {
      double w = k > l ? 1.0 : k == l ? 0.5 : 0.0;
      cplx expect = I1 * g.h() * std::exp(I1 * phi * (g.node(k) - g.node(l))) * (w + z / (1.0 - z));
      CHECK(std::abs(R.entries(k, l) - expect) < 1e-13);
    }
}

TEST_CASE("free resolvent in the Fourier representation is diag(ωn + e − λ)^{-1} to O(h²)") {
  Laplacian lap(LatticeBox({3}));
  const cplx lam(1.1, 0.6);
  const int nt = 2;
  double prev = 0.0;
  for (int M : {32, 64}) {
    TimeGrid g(1.0, M);
    auto B = to_fourier(free_resolvent(lam, lap, g), nt);
    CMat U = lap.eigenvectors.cast<cplx>();
    double err = 0.0;
    for (int n = -nt; n <= nt; ++n) {
      CVec d(3);
      for (int th = 0; th < 3; ++th) d(th) = 1.0 / (g.omega() * n + lap.eigenvalues(th) - lam);
      CMat expect = U * d.asDiagonal() * U.transpose();
      err = std::max(err, (CMat(B.block(n + nt, n + nt)) - expect).norm() / expect.norm());
      for (int m = -nt; m <= nt; ++m)
        if (m != n) err = std::max(err, CMat(B.block(n + nt, m + nt)).norm() / expect.norm());
    }
    if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.15));
    prev = err;
    CHECK(err < 20.0 / (M * M));
  }
}

TEST_CASE("free resolvent periodicity and resonance") {
  Laplacian lap(LatticeBox({3}));
  TimeGrid g(1.0, 16);
  cplx lam(0.9, 0.3);
  auto R = free_resolvent(lam, lap, g);
  auto Rw = free_resolvent(lam + g.omega(), lap, g);
  auto P = time_phase(lap.box, g, 1), Pm = time_phase(lap.box, g, -1);
  CHECK((P.entries * R.entries * Pm.entries - Rw.entries).norm() < 1e-10 * R.entries.norm());
  CHECK_THROWS_AS(free_resolvent(cplx(lap.eigenvalues(1), 0.0), lap, g), Error);
  try {
    free_resolvent(cplx(lap.eigenvalues(1) + g.omega(), 0.0), lap, g);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FloquetResonance);
    CHECK(is_degeneracy(e.kind()));
  }
}

TEST_CASE("Floquet matrix") {
  Laplacian lap(LatticeBox({3}));
  TimePeriodicPotential Z(lap.box, TimeGrid(1.0, 16));
  auto F0 = build_floquet_matrix(Z, lap, 2);
  auto ev = linalg::eig(F0.entries, false).values;
  std::vector<double> got, expect;
  for (int i = 0; i < ev.size(); ++i) {
    CHECK(std::abs(ev(i).imag()) < 1e-12);
    got.push_back(ev(i).real());
  }
  for (int n = -2; n <= 2; ++n)
    for (int th = 0; th < 3; ++th) expect.push_back(2 * pi * n + lap.eigenvalues(th));
  std::sort(got.begin(), got.end());
  std::sort(expect.begin(), expect.end());
  for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));

  auto Vr = test::make_potential(lap.box, 16, 1.0, 4, 1.0, 0.0);
  auto Fr = build_floquet_matrix(Vr, lap, 3);
  CHECK((Fr.entries - Fr.entries.adjoint()).norm() < 1e-12);
}

TEST_CASE("window shift moves Floquet eigenvalues by ω in the interior") {
  Laplacian lap(LatticeBox({3}));
  auto V = test::make_potential(lap.box, 32, 0.5, 8, 1.0);
  auto A = eigenvalues_floquet(V, lap, 6);
  FloquetFilter f;
  f.window_shift = 1;
  auto B = eigenvalues_floquet(V, lap, 6, f);
  // folded sets agree
  auto m = match_eigenvalues(A, B);
  CHECK(m.unmatched == 0);
  CHECK(m.max_distance < 1e-6);
}

TEST_CASE("monodromy") {
  Laplacian lap(LatticeBox({3}));
  TimePeriodicPotential Z(lap.box, TimeGrid(1.0, 16));
  auto U0 = monodromy(Z, lap, 64);
  CMat expect = lap.function((-I1 * lap.eigenvalues.cast<cplx>()).array().exp().matrix());
  CHECK((U0.U_tau - expect).norm() < 1e-7);

  auto Vr = test::make_potential(lap.box, 16, 1.0, 4, 1.0, 0.0);
  for (auto integ : {Integrator::RK4, Integrator::Magnus2}) {
    auto U = monodromy(Vr, lap, 256, integ);
    CHECK((U.U_tau.adjoint() * U.U_tau - CMat::Identity(3, 3)).norm() < 1e-6);
  }
  // Liouville: det U = exp(−i∫Tr(Δ + V))
  auto V = test::make_potential(lap.box, 16, 1.0, 6, 1.0);
  auto U = monodromy(V, lap, 512);
  cplx integral = lap.matrix.trace() * V.grid.tau;
  for (int k = 0; k < 16; ++k) integral += V.grid.h() * V.values.row(k).sum();
  CHECK(std::abs(U.U_tau.determinant() - std::exp(-I1 * integral)) < 1e-9);
  CHECK_THROWS(monodromy(V, lap, 8));
}

}

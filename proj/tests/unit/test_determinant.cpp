#include "helpers.hpp"
#include "qtrace/linalg.hpp"

using namespace qtrace;

TEST_SUITE("determinant") {

TEST_CASE("det2 of small matrices") {
  CMat Z = CMat::Zero(4, 4);
  CHECK(std::abs(det2(Z).value - 1.0) < 1e-15);
  // rank one: c·eeᵀ with |e| = 1
  CVec e = CVec::Ones(5) / std::sqrt(5.0);
  const cplx c(0.4, -1.3);
  CMat A = c * e * e.transpose();
  CHECK(test::rel(det2(A).value, (1.0 + c) * std::exp(-c)) < 1e-13);
  // diagonal: Π(1+d)e^{−d}
  CVec d(3);
  d << 0.2, cplx(-0.5, 0.3), cplx(1.0, 2.0);
  cplx expect = 1.0;
  for (int i = 0; i < 3; ++i) expect *= (1.0 + d(i)) * std::exp(-d(i));
  CHECK(test::rel(det2(CMat(d.asDiagonal())).value, expect) < 1e-13);
  CHECK(det2(CMat(-CMat::Identity(2, 2))).value == cplx(0.0));
}

TEST_CASE("commutation and the exponential bound") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    CMat X = test::random_matrix(8, 5, rng, 0.4), Y = test::random_matrix(5, 8, rng, 0.4);
    CHECK(det2_commutation_check(X, Y) < 1e-10);
    CMat A = test::random_matrix(6, 6, rng, 0.5);
    CHECK(det2(A).log_abs <= 0.5 * A.squaredNorm() + 1e-12);
  }
}

TEST_CASE("exponential product identities") {
  std::mt19937_64 rng(2);
  CMat A = test::random_matrix(10, 10, rng, 0.2), B = test::random_matrix(10, 10, rng, 0.2);
  auto r = lemma21_identity_suite(A, B);
  CHECK(r.ab2 < 1e-8);
  CHECK(r.ab4 < 1e-8);
  CMat Da = CMat(test::random_matrix(10, 1, rng).col(0).asDiagonal());
  CMat Db = CMat(test::random_matrix(10, 1, rng, 0.3).col(0).asDiagonal());
  CHECK(lemma21_identity_suite(Da, Db).ab2 < 1e-12);
  CHECK(lemma21_identity_suite(A, CMat::Zero(10, 10)).ab4 < 1e-13);
  CHECK_THROWS_AS(lemma21_identity_suite(-CMat::Identity(3, 3), CMat::Zero(3, 3)), Error);
}

TEST_CASE("D of lambda: trivial, periodic, two assemblies") {
  Laplacian lap(LatticeBox({3}));
  TimePeriodicPotential Z(lap.box, TimeGrid(1.0, 16));
  CHECK(std::abs(D_of_lambda(Z, lap, {0.3, 0.7}).value - 1.0) < 1e-15);
  auto V = test::make_potential(lap.box, 32, 2.0, 5, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 5; ++i) {
    cplx lam(2 * pi * u(rng), 0.3 + u(rng));
    auto a = D_of_lambda(V, lap, lam), b = D_of_lambda(V, lap, lam + 2 * pi);
    CHECK(std::abs(a.value - b.value) < 1e-10);
    CHECK(test::rel(D_of_lambda(V, lap, lam, DetMethod::SymmetrizedBS).value, a.value) < 1e-10);
  }
}

TEST_CASE("D tends to 1 along the imaginary axis") {
  Laplacian lap(LatticeBox({3}));
  auto V = test::make_potential(lap.box, 256, 1.0, 5, 1.0);
  double prev = 1e300;
  for (double nu : {5.0, 10.0, 20.0, 40.0}) {
    double g = std::abs(D_of_lambda(V, lap, {0.0, nu}).value - 1.0);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("rank-reduced ψ against the full-matrix determinant and 𝒟") {
  Laplacian lap(LatticeBox({3, 2}));
  auto V = test::make_potential(lap.box, 16, 2.5, 7, 1.0);
  DeterminantEvaluator ev(V, lap);
  CHECK(std::abs(ev.psi(0.0).value - 1.0) < 1e-14);
  CHECK(std::abs(ev.psi_full(0.0).value - 1.0) < 1e-12);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 6; ++i) {
    cplx z = std::polar(0.95 * u(rng), 2 * pi * u(rng));
    CHECK(test::rel(ev.psi(z).value, ev.psi_full(z).value) < 1e-10);
    cplx lam(2 * pi * u(rng), 0.5 + 2.5 * u(rng));
    CHECK(test::rel(ev.psi(std::exp(I1 * lam)).value, D_of_lambda(V, lap, lam).value) < 1e-10);
  }
}

TEST_CASE("ψ′/ψ against finite differences and tracked logarithm") {
  Laplacian lap(LatticeBox({3}));
  auto V = test::make_potential(lap.box, 32, 2.0, 5, 1.0);
  DeterminantEvaluator ev(V, lap);
  for (cplx z : {cplx(0.2, 0.1), cplx(-0.5, 0.4), cplx(0.1, -0.8)}) {
    const double h = 1e-5;
    cplx fd = (ev.log_psi(z + h) - ev.log_psi(z - h)) / (2 * h);
    CHECK(test::rel(ev.dlog_psi(z), fd) < 1e-7);
    cplx a = ev.log_psi_tracked(z), b = ev.log_psi(z);
    CHECK(std::abs(a.real() - b.real()) < 1e-12);
    CHECK(std::abs(std::remainder(a.imag() - b.imag(), 2 * pi)) < 1e-10);
  }
}

TEST_CASE("zero potential is trivial everywhere") {
  Laplacian lap(LatticeBox({3, 3}));
  TimePeriodicPotential Z(lap.box, TimeGrid(1.0, 8));
  DeterminantEvaluator ev(Z, lap);
  CHECK(ev.trivial());
  CHECK(ev.psi(cplx(0.3, 0.9)).value == cplx(1.0));
  CHECK(ev.dlog_psi(0.5) == cplx(0.0));
}

TEST_CASE("log-trace series") {
  Laplacian lap(LatticeBox({3}));
  auto V = test::make_potential(lap.box, 32, 0.3, 5, 1.0);
  const cplx lam(1.0, 1.5);
  auto s = log_trace_series(V, lap, lam, 12);
  CHECK(s.hs_norm < 0.9);
  CHECK(std::abs(s.sum - s.reference) <= s.tail_bound + 1e-12);
  const double c = hs_time_integral(V), nu = lam.imag();
  for (int n = 2; n <= 12; ++n) CHECK(std::abs(s.terms[n]) <= std::pow(4 * c / nu, n / 2.0) * (1 + 1e-12));
  auto big = test::make_potential(lap.box, 32, 6.0, 5, 1.0);
  CHECK_THROWS_AS(log_trace_series(big, lap, {1.0, 0.3}, 4), Error);
}

TEST_CASE("𝒟′/𝒟 = −Tr((R₀V)²R) to second order in the step") {
  Laplacian lap(LatticeBox({3}));
  const cplx lam(0.8, 0.9);
  double prev = 0.0;
  for (int M : {32, 64}) {
    auto V = test::make_potential(lap.box, M, 1.0, 5, 1.0);
    const double h = 1e-4;
    cplx fd = (D_of_lambda(V, lap, lam + h).log_value - D_of_lambda(V, lap, lam - h).log_value) / (2 * h);
    cplx tr = -resolvent_trace(V, lap, lam);
    double gap = std::abs(fd - tr) / std::abs(tr);
    CHECK(gap < 5e-3);
    if (prev > 0) CHECK(prev / gap > 3.0);
    prev = gap;
  }
}

}

TEST_SUITE("linalg") {

TEST_CASE("log det, solve, eig, rcond") {
  std::mt19937_64 rng(6);
  for (int n : {5, 60}) {
    CMat A = test::random_matrix(n, n, rng);
    cplx lg = linalg::log_det(A);
    cplx ref = A.partialPivLu().determinant();
    CHECK(std::abs(lg.real() - std::log(std::abs(ref))) < 1e-10);
    CHECK(std::abs(std::remainder(lg.imag() - std::arg(ref), 2 * pi)) < 1e-9);
    CMat B = test::random_matrix(n, 3, rng);
    CHECK((A * linalg::solve(A, B) - B).norm() < 1e-10 * B.norm() * n);
    auto e = linalg::eig(A, true);
    for (int i = 0; i < n; ++i) CHECK((A * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() < 1e-10 * n);
    CHECK(linalg::rcond(A) > 0);
  }
  CHECK(std::isinf(linalg::log_det(CMat::Zero(3, 3)).real()));
  CHECK(linalg::rcond(CMat::Zero(3, 3)) == 0.0);
}

TEST_CASE("hungarian matches brute force") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    RMat c(4, 5);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 5; ++j) c(i, j) = u(rng);
    auto as = linalg::hungarian(c);
    double got = 0.0;
    for (int i = 0; i < 4; ++i) got += c(i, as[i]);
    std::vector<int> p{0, 1, 2, 3, 4};
    double best = 1e300;
    do {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += c(i, p[i]);
      best = std::min(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
  }
}

}

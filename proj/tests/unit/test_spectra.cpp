#include "helpers.hpp"
#include "qtrace/linalg.hpp"

using namespace qtrace;

namespace {

// zeros of ψ in the disk from the eigenvalues of W: z = 1/μ with |μ| > 1
std::vector<cplx> oracle_zeros(const DeterminantEvaluator& ev) {
  std::vector<cplx> z;
  auto e = linalg::eig(ev.W(), false).values;
  for (int i = 0; i < e.size(); ++i)
    if (std::abs(e(i)) > 1 + 1e-9) z.push_back(1.0 / e(i));
  return z;
}

double worst_match(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (cplx x : a) {
    double best = 1e300;
    for (cplx y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

} // namespace

TEST_SUITE("spectra") {

TEST_CASE("folding into the strip") {
  const double tau = 2.0, w = pi;
  cplx l = fold({3.5 * w, 0.2}, tau);
  CHECK(l.real() == doctest::Approx(0.5 * w));
  CHECK(fold({-0.25 * w, 0.2}, tau).real() == doctest::Approx(0.75 * w));
  cplx lam(1.2, 0.4);
  CHECK(std::abs(lambda_from_z(std::exp(I1 * tau * lam), tau) - lam) < 1e-14);
  CHECK(strip_distance({0.01, 0.3}, {w - 0.01, 0.3}, tau) == doctest::Approx(0.02));
}

TEST_CASE("ψ zeros coincide with the W oracle") {
  Laplacian lap(LatticeBox({3, 3}));
  auto V = test::make_potential(lap.box, 64, 3.0, 1, 0.0);
  DeterminantEvaluator ev(V, lap);
  ZeroSearchStats st;
  auto zs = zeros_of_psi(ev, {}, &st);
  auto oracle = oracle_zeros(ev);
  CHECK(zs.total() == int(oracle.size()));
  CHECK(zs.total() >= 1);
  CHECK(worst_match(zs.zs(), oracle) < 1e-10);
  CHECK(worst_match(oracle, zs.zs()) < 1e-10);
  for (cplx z : zs.zs()) CHECK(std::abs(ev.psi(z).value) < 1e-8);
  // nested circle counts are monotone
  for (size_t i = 1; i < st.circle_counts.size(); ++i)
    CHECK(st.circle_counts[i].second >= st.circle_counts[i - 1].second);
  for (double r : {0.5, 0.9}) {
    int inside = 0;
    for (cplx z : oracle) inside += std::abs(z) < r;
    CHECK(winding_on_circle(ev, r) == inside);
  }
}

TEST_CASE("each oracle zero is found once over several seeds and boxes") {
  for (auto sides : {std::vector<int>{4, 4}, std::vector<int>{3, 3}, std::vector<int>{5}})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Laplacian lap{LatticeBox(sides)};
      auto V = generate_potential(lap.box, TimeGrid(1.0, 64), {seed, 3.0, 0.0, 2.0 / 3});
      DeterminantEvaluator ev(V, lap);
      auto zs = zeros_of_psi(ev);
      auto oracle = oracle_zeros(ev);
      CAPTURE(seed);
      CHECK(zs.total() == int(oracle.size()));
      CHECK(worst_match(zs.zs(), oracle) < 1e-9);
      CHECK(worst_match(oracle, zs.zs()) < 1e-9);
    }
}

TEST_CASE("three routes agree on a small box") {
  Laplacian lap(LatticeBox({3}));
  auto V = test::make_potential(lap.box, 64, 4.0, 2, 0.0);
  auto fl = eigenvalues_floquet(V, lap, 10);
  auto mo = eigenvalues_monodromy(monodromy(V, lap, 4096));
  DeterminantEvaluator ev(V.resampled(2048), lap);
  auto ps = zeros_of_psi(ev);
  CHECK(fl.total() >= 1);
  CHECK(fl.total() == mo.total());
  CHECK(fl.total() == ps.total());
  CHECK(match_eigenvalues(fl, mo).max_distance < 1e-7);
  CHECK(match_eigenvalues(fl, ps).max_distance < 1e-5);
  auto rep = eigenvalue_bound_check(fl, V);
  CHECK(rep.holds);
  CHECK(rep.min_margin() > 0);
  for (auto& e : rep.entries) CHECK(e.im_bound_ok);
}

TEST_CASE("zero and real potentials have no strip eigenvalues") {
  Laplacian lap(LatticeBox({3, 3}));
  TimePeriodicPotential Z(lap.box, TimeGrid(1.0, 16));
  CHECK(eigenvalues_floquet(Z, lap, 4).total() == 0);
  CHECK(eigenvalues_monodromy(monodromy(Z, lap, 64)).total() == 0);
  CHECK(zeros_of_psi(DeterminantEvaluator(Z, lap)).total() == 0);
  auto R = test::make_potential(lap.box, 32, 2.0, 3, 1.0, 0.0);
  CHECK(eigenvalues_floquet(R, lap, 4).total() == 0);
  CHECK(eigenvalues_monodromy(monodromy(R, lap, 512)).total() == 0);
  CHECK(zeros_of_psi(DeterminantEvaluator(R, lap)).total() == 0);
}

TEST_CASE("matching handles permutations, wrap-around and count mismatch") {
  EigenvalueSet a, b;
  a.lambdas = {{0.01, 0.5}, {3.0, 0.2}, {1.0, 1.0}};
  a.multiplicities = {1, 1, 1};
  b.lambdas = {{1.0, 1.0 + 1e-9}, {2 * pi - 0.01, 0.5}, {3.0, 0.2}};
  b.multiplicities = {1, 1, 1};
  auto m = match_eigenvalues(a, b);
  CHECK(m.unmatched == 0);
  CHECK(m.max_distance == doctest::Approx(0.02).epsilon(1e-6));
  b.lambdas.pop_back();
  b.multiplicities.pop_back();
  CHECK(match_eigenvalues(a, b).unmatched == 1);
}

}

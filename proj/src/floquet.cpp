#include <cmath>

#include "qtrace/floquet.hpp"

namespace qtrace {

CMat op_J1(const TimeGrid& grid, double diag_weight) {
  const int M = grid.M;
  CMat J = CMat::Zero(M, M);
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < k; ++l) J(k, l) = I1 * grid.h();
    J(k, k) = I1 * grid.h() * diag_weight;
  }
  return J;
}

CMat op_J2(const TimeGrid& grid) { return CMat::Constant(grid.M, grid.M, I1 * grid.h()); }

SpaceTimeOperator conjugated_potential(const TimePeriodicPotential& V, const Laplacian& lap) {
  const int S = lap.size(), M = V.grid.M;
  SpaceTimeOperator op{V.box, V.grid, Repr::TimeGrid, 0, CMat::Zero(M * S, M * S)};
  CMat U = lap.eigenvectors.cast<cplx>();
  for (int k = 0; k < M; ++k) {
    const double t = V.grid.node(k);
    CVec ph = (I1 * t * lap.eigenvalues.cast<cplx>()).array().exp();
    // e^{itΔ} = U e^{ite} Uᵀ
    CMat W = U * ph.asDiagonal() * U.transpose();
    op.entries.block(k * S, k * S, S, S) = W * V.values.row(k).transpose().asDiagonal() * W.adjoint();
  }
  return op;
}

std::pair<SpaceTimeOperator, SpaceTimeOperator> build_F1_F2(const TimePeriodicPotential& V, const Laplacian& lap,
                                                            double diag_weight) {
  const int S = lap.size(), M = V.grid.M;
  auto Vt = conjugated_potential(V, lap);
  CMat J1 = op_J1(V.grid, diag_weight);
  SpaceTimeOperator F1 = Vt, F2 = Vt;
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < M; ++l) {
      auto Vl = Vt.entries.block(l * S, l * S, S, S);
      F1.entries.block(k * S, l * S, S, S) = J1(k, l) * Vl;
      F2.entries.block(k * S, l * S, S, S) = I1 * V.grid.h() * Vl;
    }
  }
  return {F1, F2};
}

SpaceTimeOperator free_resolvent(cplx lambda, const Laplacian& lap, const TimeGrid& grid, double diag_weight) {
  const int S = lap.size(), M = grid.M;
  const double h = grid.h(), tau = grid.tau;
  const cplx z = std::exp(I1 * tau * lambda);
  CMat U = lap.eigenvectors.cast<cplx>();
  std::vector<cplx> denom(S);
  for (int th = 0; th < S; ++th) {
    denom[th] = 1.0 - z * std::exp(-I1 * tau * lap.eigenvalues(th));
    if (std::abs(denom[th]) < 1e-8) throw Error(ErrorKind::FloquetResonance, "|1 - z a| below 1e-8");
  }
  std::vector<CMat> blocks(2 * M - 1);
  CVec f(S);
  for (int m = -(M - 1); m < M; ++m) {
    for (int th = 0; th < S; ++th) {
      const cplx phi = lambda - lap.eigenvalues(th);
      const cplx gamma = 1.0 / denom[th] - 1.0; // za/(1-za)
      if (m < 0) {
        // e^{imhφ}·γ = e^{i(τ+mh)φ}/(1-za) keeps exponents bounded
        f(th) = std::exp(I1 * (tau + m * h) * phi) / denom[th];
      } else {
        double w = m > 0 ? 1.0 : diag_weight;
        f(th) = std::exp(I1 * (m * h) * phi) * (w + gamma);
      }
    }
    blocks[m + M - 1] = (I1 * h) * (U * f.asDiagonal() * U.transpose());
  }
  SpaceTimeOperator op{lap.box, grid, Repr::TimeGrid, 0, CMat(M * S, M * S)};
  for (int k = 0; k < M; ++k)
    for (int l = 0; l < M; ++l) op.entries.block(k * S, l * S, S, S) = blocks[k - l + M - 1];
  return op;
}

SpaceTimeOperator to_fourier(const SpaceTimeOperator& op, int n_t) {
  if (op.repr != Repr::TimeGrid) throw std::invalid_argument("to_fourier: expects time-grid operator");
  const int S = op.box.site_count(), M = op.grid.M, K = 2 * n_t + 1;
  CMat P = CMat::Zero(K * S, M * S), Q = CMat::Zero(M * S, K * S);
  for (int a = 0; a < K; ++a) {
    const int n = a - n_t;
    for (int k = 0; k < M; ++k) {
      cplx e = std::polar(1.0, op.grid.omega() * n * op.grid.node(k));
      for (int x = 0; x < S; ++x) {
        P(a * S + x, k * S + x) = std::conj(e) / double(M);
        Q(k * S + x, a * S + x) = e;
      }
    }
  }
  return {op.box, op.grid, Repr::TimeFourier, n_t, P * op.entries * Q};
}

SpaceTimeOperator time_phase(const LatticeBox& box, const TimeGrid& grid, int n) {
  const int S = box.site_count(), M = grid.M;
  CVec d(M * S);
  for (int k = 0; k < M; ++k) d.segment(k * S, S).setConstant(std::polar(1.0, grid.omega() * n * grid.node(k)));
  return {box, grid, Repr::TimeGrid, 0, CMat(d.asDiagonal())};
}

int harmonic_cutoff(const TimePeriodicPotential& V, double rel) {
  const int M = V.grid.M;
  std::vector<double> mag(M / 2 + 1, 0.0);
  double mx = 0.0;
  for (int j = -M / 2; j <= M / 2; ++j) {
    double m = V.harmonic(j).cwiseAbs().maxCoeff();
    mag[std::abs(j)] = std::max(mag[std::abs(j)], m);
    mx = std::max(mx, m);
  }
  int cut = 0;
  for (int j = 0; j <= M / 2; ++j)
    if (mag[j] > rel * mx) cut = j;
  return cut;
}

SpaceTimeOperator build_floquet_matrix(const TimePeriodicPotential& V, const Laplacian& lap, int n_t,
                                       int window_shift) {
  if (n_t < 1) throw std::invalid_argument("build_floquet_matrix: N_t >= 1");
  const int S = lap.size(), K = 2 * n_t + 1;
  std::vector<CVec> vh(2 * K - 1);
  for (int j = -(K - 1); j <= K - 1; ++j) vh[j + K - 1] = V.harmonic(j);
  SpaceTimeOperator op{V.box, V.grid, Repr::TimeFourier, n_t, CMat::Zero(K * S, K * S)};
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      auto blk = op.entries.block(a * S, b * S, S, S);
      blk.diagonal() = vh[a - b + K - 1];
      if (a == b) {
        const int n = a - n_t + window_shift;
        blk += lap.matrix.cast<cplx>();
        blk.diagonal().array() += V.grid.omega() * n;
      }
    }
  }
  return op;
}

} // namespace qtrace

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "qtrace/determinant.hpp"
#include "qtrace/linalg.hpp"
#include "qtrace/simd.hpp"

namespace qtrace {

const char* to_string(DetMethod m) {
  switch (m) {
  case DetMethod::DirectVR0: return "DirectVR0";
  case DetMethod::SymmetrizedBS: return "SymmetrizedBS";
  case DetMethod::RankReduced: return "RankReduced";
  }
  return "?";
}

namespace {

Det2Value from_log(cplx lg, cplx trace, DetMethod m) {
  Det2Value v;
  v.log_value = lg;
  v.log_abs = lg.real();
  v.value = std::exp(lg);
  v.trace_A = trace;
  v.method = m;
  return v;
}

cplx log_det2(const CMat& A) {
  CMat B = A;
  B.diagonal().array() += 1.0;
  return linalg::log_det(std::move(B)) - A.trace();
}

double rel_gap_logs(cplx l1, cplx l2) {
  if (std::isinf(l1.real()) && std::isinf(l2.real())) return 0.0;
  if (std::isinf(l1.real()) || std::isinf(l2.real())) return 1.0;
  return std::abs(std::exp(l1 - l2) - 1.0);
}

CVec flat_values(const TimePeriodicPotential& V) {
  const int M = V.grid.M, S = V.sites();
  CVec v(M * S);
  for (int k = 0; k < M; ++k) v.segment(k * S, S) = V.values.row(k).transpose();
  return v;
}

} // namespace

Det2Value det2(const CMat& A) { return from_log(log_det2(A), A.trace(), DetMethod::DirectVR0); }

double det2_commutation_check(const CMat& X, const CMat& Y) {
  return rel_gap_logs(log_det2(X * Y), log_det2(Y * X));
}

Lemma21Report lemma21_identity_suite(const CMat& A, const CMat& B) {
  const int n = static_cast<int>(A.rows());
  CMat Id = CMat::Identity(n, n);
  if (linalg::rcond(Id + A) < 1e-14) throw Error(ErrorKind::SingularIplusA, "I + A numerically singular");
  Lemma21Report r;
  CMat mA = -A, mB = -B, mAB = -(A + B);
  CMat eA = A.exp(), eB = B.exp(), eAB = mAB.exp(), emA = mA.exp(), emB = mB.exp();
  r.ab2 = std::abs(std::exp(linalg::log_det(eA * eAB * eB)) - 1.0);
  CMat Rr = linalg::solve(Id + A, Id);
  cplx lhs = linalg::log_det((Id + A + B) * eAB);
  cplx rhs = linalg::log_det((Id + A) * emA) + linalg::log_det((Id + Rr * B) * emB);
  r.ab4 = rel_gap_logs(lhs, rhs);
  return r;
}

cplx equal_time_log_factor(const TimePeriodicPotential& V, double diag_weight) {
  cplx s = 0.0;
  const cplx c = diag_weight * I1 * V.grid.h();
  for (int k = 0; k < V.grid.M; ++k)
    for (int x = 0; x < V.sites(); ++x) s += std::log(1.0 + c * V.values(k, x)) - c * V.values(k, x);
  return s;
}

CMat assemble_VR0(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda) {
  CMat R = free_resolvent(lambda, lap, V.grid).entries;
  CVec v = flat_values(V);
  const auto& K = simd::kernels();
  const std::size_t n = static_cast<std::size_t>(R.rows());
  for (Eigen::Index j = 0; j < R.cols(); ++j) K.cmul_scaled(v.data(), R.col(j).data(), 1.0, R.col(j).data(), n);
  return R;
}

CMat assemble_BS(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda) {
  CMat R = free_resolvent(lambda, lap, V.grid).entries;
  CVec v = flat_values(V);
  CVec q(v.size()), w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    q(i) = std::sqrt(std::abs(v(i)));
    w(i) = q(i) * (v(i) == 0.0 ? cplx(1.0) : v(i) / std::abs(v(i)));
  }
  const auto& K = simd::kernels();
  const std::size_t n = static_cast<std::size_t>(R.rows());
  for (Eigen::Index j = 0; j < R.cols(); ++j) K.cmul_scaled(q.data(), R.col(j).data(), w(j), R.col(j).data(), n);
  return R;
}

Det2Value D_of_lambda(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda, DetMethod method) {
  if (method == DetMethod::RankReduced)
    throw std::invalid_argument("D_of_lambda: use DeterminantEvaluator for the rank-reduced form");
  CMat A = method == DetMethod::DirectVR0 ? assemble_VR0(V, lap, lambda) : assemble_BS(V, lap, lambda);
  cplx norm = equal_time_log_factor(V);
  Det2Value d = from_log(log_det2(A) - norm, A.trace(), method);
  d.log_normalization = norm;
  return d;
}

cplx resolvent_trace(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda) {
  CMat R0 = free_resolvent(lambda, lap, V.grid).entries;
  CVec v = flat_values(V);
  CMat X = R0 * v.asDiagonal(); // R₀V
  CMat IX = X;
  IX.diagonal().array() += 1.0;
  CMat R = linalg::solve(std::move(IX), R0);
  CMat XR = X * R;
  // Tr(X·XR)
  return (X.transpose().array() * XR.array()).sum();
}

LogSeries log_trace_series(const TimePeriodicPotential& V, const Laplacian& lap, cplx lambda, int n_max) {
  if (n_max < 2) throw std::invalid_argument("log_trace_series: n_max >= 2");
  CMat A = assemble_VR0(V, lap, lambda);
  LogSeries s;
  s.hs_norm = A.norm();
  if (s.hs_norm >= 0.9) throw Error(ErrorKind::SeriesDiverges, "‖VR₀‖_HS = " + std::to_string(s.hs_norm));
  s.terms.assign(n_max + 1, 0.0);
  CMat P = A;
  for (int n = 2; n <= n_max; ++n) {
    P = P * A;
    s.terms[n] = P.trace();
    s.sum -= (n % 2 == 0 ? 1.0 : -1.0) / n * s.terms[n];
  }
  const double q = s.hs_norm;
  s.tail_bound = std::pow(q, n_max + 1) / ((n_max + 1) * (1 - q));
  cplx ref = log_det2(A);
  ref.imag(ref.imag() - 2 * pi * std::round((ref.imag() - s.sum.imag()) / (2 * pi)));
  s.reference = ref;
  return s;
}

} // namespace qtrace

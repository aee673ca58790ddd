#include <cmath>

#include "qtrace/determinant.hpp"
#include "qtrace/linalg.hpp"

namespace qtrace {

DeterminantEvaluator::DeterminantEvaluator(const TimePeriodicPotential& V, const Laplacian& lap, double diag_weight)
    : V_(V), lap_(lap), w_(diag_weight), trivial_(V.is_zero()) {
  const int S = lap.size(), M = V.grid.M;
  const double h = V.grid.h();
  CMat U = lap.eigenvectors.cast<cplx>();
  a_ = (-I1 * V.grid.tau * lap.eigenvalues.cast<cplx>()).array().exp();
  G0_ = CMat::Zero(S, S);
  CMat run = CMat::Zero(S, S);
  const CMat Id = CMat::Identity(S, S);
  for (int k = 0; k < M; ++k) {
    CVec ph = (I1 * V.grid.node(k) * lap.eigenvalues.cast<cplx>()).array().exp();
    CMat Vt = ph.asDiagonal() * (U.transpose() * V.values.row(k).transpose().asDiagonal() * U) * ph.conjugate().asDiagonal();
    G0_ += Vt;
    CMat B = Id + (w_ * I1 * h) * Vt;
    if (linalg::rcond(B) < 1e-12) throw Error(ErrorKind::SingularF1, "equal-time block of I + F1 ill-conditioned");
    // forward substitution through the block-lower-triangular I + F₁
    CMat X = B.partialPivLu().solve(Id - (I1 * h) * run);
    run += Vt * X;
  }
  G0_ *= I1 * h;
  G_ = (I1 * h) * run;
  W_ = a_.asDiagonal() * (Id - G_);
}

CVec DeterminantEvaluator::gamma(cplx z) const {
  CVec g(a_.size());
  for (Eigen::Index i = 0; i < a_.size(); ++i) {
    cplx den = 1.0 - z * a_(i);
    if (std::abs(den) < 1e-14) throw Error(ErrorKind::FloquetResonance, "z·a_θ = 1");
    g(i) = z * a_(i) / den;
  }
  return g;
}

std::pair<cplx, cplx> DeterminantEvaluator::log_psi_parts(cplx z) const {
  if (trivial_) return {0.0, 0.0};
  CVec g = gamma(z);
  CMat B = g.asDiagonal() * G_;
  B.diagonal().array() += 1.0;
  return {linalg::log_det(std::move(B)), -(g.array() * G0_.diagonal().array()).sum()};
}

cplx DeterminantEvaluator::log_psi(cplx z) const {
  auto [f, e] = log_psi_parts(z);
  return f + e;
}

Det2Value DeterminantEvaluator::psi(cplx z) const {
  Det2Value d;
  d.method = DetMethod::RankReduced;
  d.log_value = log_psi(z);
  d.log_abs = d.log_value.real();
  d.value = std::exp(d.log_value);
  if (!trivial_) {
    CVec g = gamma(z);
    d.trace_A = (g.array() * G0_.diagonal().array()).sum() + w_ * G0_.trace();
  }
  d.log_normalization = equal_time_log_factor(V_, w_);
  return d;
}

cplx DeterminantEvaluator::log_psi_tracked(cplx z) const {
  if (trivial_) return 0.0;
  auto det_part = [&](cplx x) {
    CVec g = gamma(x);
    CMat B = g.asDiagonal() * G_;
    B.diagonal().array() += 1.0;
    return linalg::log_det(std::move(B));
  };
  for (int n = 16; n <= 65536; n *= 2) {
    double im = 0.0, prev = 0.0;
    bool ok = true;
    for (int j = 1; j <= n && ok; ++j) {
      double cur = det_part(z * (double(j) / n)).imag();
      double step = wrap_angle(cur - prev);
      if (std::abs(step) > pi / 4) ok = false;
      im += step;
      prev = cur;
    }
    if (!ok) continue;
    cplx lg = det_part(z);
    CVec g = gamma(z);
    return cplx(lg.real(), im) - (g.array() * G0_.diagonal().array()).sum();
  }
  throw Error(ErrorKind::WindingAmbiguous, "phase of psi not resolvable along the radius");
}

cplx DeterminantEvaluator::dlog_psi(cplx z) const {
  if (trivial_) return 0.0;
  CVec g = gamma(z);
  CVec gp(a_.size());
  for (Eigen::Index i = 0; i < a_.size(); ++i) gp(i) = a_(i) / ((1.0 - z * a_(i)) * (1.0 - z * a_(i)));
  CMat B = g.asDiagonal() * G_;
  B.diagonal().array() += 1.0;
  CMat T = linalg::solve(std::move(B), gp.asDiagonal() * G_);
  return T.trace() - (gp.array() * G0_.diagonal().array()).sum();
}

Det2Value DeterminantEvaluator::psi_full(cplx z) const {
  const int S = lap_.size(), M = V_.grid.M;
  auto [F1, F2] = build_F1_F2(V_, lap_, w_);
  CMat gs = lap_.function(gamma(z));
  CMat F = F1.entries;
  for (int k = 0; k < M; ++k)
    for (int l = 0; l < M; ++l) F.block(k * S, l * S, S, S) += gs * F2.entries.block(k * S, l * S, S, S);
  Det2Value d = det2(F);
  cplx norm = equal_time_log_factor(V_, w_);
  d.log_value -= norm;
  d.log_abs = d.log_value.real();
  d.value = std::exp(d.log_value);
  d.log_normalization = norm;
  return d;
}

std::pair<cplx, cplx> DeterminantEvaluator::zero_factor(cplx z) const {
  if (trivial_) return {0.0, 0.0};
  CVec g = gamma(z);
  CVec gp(a_.size());
  for (Eigen::Index i = 0; i < a_.size(); ++i) gp(i) = a_(i) / ((1.0 - z * a_(i)) * (1.0 - z * a_(i)));
  CMat B = g.asDiagonal() * G_;
  B.diagonal().array() += 1.0;
  Eigen::PartialPivLU<CMat> lu(B);
  const CMat& m = lu.matrixLU();
  cplx lg = lu.permutationP().determinant() < 0 ? cplx(0.0, pi) : cplx(0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) lg += std::log(m(i, i));
  cplx dl = lu.solve(gp.asDiagonal() * G_).trace();
  return {lg, dl};
}

TaylorCoeffs taylor_psi(const DeterminantEvaluator& ev, int n_max) {
  if (n_max < 1 || n_max > 8) throw std::invalid_argument("taylor_psi: n_max in [1, 8]");
  TaylorCoeffs t;
  t.coeffs.assign(n_max, 0.0);
  t.cauchy.assign(n_max, 0.0);
  if (ev.trivial()) {
    t.radius_hint = 0.5;
    return t;
  }
  const CVec& a = ev.a();
  const CMat& G = ev.G();
  const CMat& G0 = ev.G0();
  const int S = static_cast<int>(a.size());

  // closed forms, H = F₁-part = G₀ − G
  CMat H = G0 - G;
  CMat aG = a.asDiagonal() * G;
  CVec a2 = a.array().square();
  t.psi1_closed = -(a.array() * H.diagonal().array()).sum();
  t.psi2_closed = -(a2.array() * H.diagonal().array()).sum() - 0.5 * (aG * aG).trace();
  t.psi2_literal = -(a2.array() * H.diagonal().array()).sum() + 0.5 * (H * a.asDiagonal() * G * a.asDiagonal()).trace();

  // series: log ψ = −Tr(ΓG₀) + Σ_m ((−1)^{m+1}/m) Tr(ΓG)^m with Γ = Σ_k z^k a^k
  std::vector<CMat> P(n_max + 1, CMat::Zero(S, S)); // coefficients of ΓG
  CVec ak = CVec::Ones(S);
  for (int k = 1; k <= n_max; ++k) {
    ak = ak.cwiseProduct(a);
    P[k] = ak.asDiagonal() * G;
    t.coeffs[k - 1] -= (ak.array() * G0.diagonal().array()).sum();
  }
  std::vector<CMat> pw = P; // (ΓG)^m coefficients, starting at m = 1
  for (int m = 1; m <= n_max; ++m) {
    const double sgn = (m % 2 ? 1.0 : -1.0) / m;
    for (int k = m; k <= n_max; ++k) t.coeffs[k - 1] += sgn * pw[k].trace();
    if (m == n_max) break;
    std::vector<CMat> nx(n_max + 1, CMat::Zero(S, S));
    for (int i = m; i <= n_max; ++i)
      for (int j = 1; i + j <= n_max; ++j) nx[i + j] += pw[i] * P[j];
    pw = std::move(nx);
  }

  // Cauchy coefficients on a circle where |ψ − 1| < ½
  const int N = 128;
  double r = 0.5;
  std::vector<cplx> lg(N);
  for (;; r *= 0.8) {
    if (r < 0.05) throw Error(ErrorKind::RadiusTooSmall, "no circle with |psi - 1| < 1/2 at r >= 0.05");
    bool ok = true;
    for (int j = 0; j < N && ok; ++j) {
      cplx psi = std::exp(ev.log_psi(std::polar(r, 2 * pi * j / N)));
      if (std::abs(psi - 1.0) >= 0.5) ok = false;
      lg[j] = std::log(psi);
    }
    if (ok) break;
  }
  t.radius_hint = r;
  for (int n = 1; n <= n_max; ++n) {
    cplx s = 0.0;
    for (int j = 0; j < N; ++j) s += lg[j] * std::polar(1.0, -2 * pi * double(n) * j / N);
    t.cauchy[n - 1] = s / (double(N) * std::pow(r, n));
  }
  return t;
}

} // namespace qtrace

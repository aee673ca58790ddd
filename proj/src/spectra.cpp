#include <algorithm>
#include <cmath>

#include "qtrace/linalg.hpp"
#include "qtrace/spectra.hpp"

namespace qtrace {

const char* to_string(EigMethod m) {
  switch (m) {
  case EigMethod::Floquet: return "floquet";
  case EigMethod::Monodromy: return "monodromy";
  case EigMethod::PsiZeros: return "psi-zeros";
  }
  return "?";
}

std::vector<cplx> EigenvalueSet::zs() const {
  std::vector<cplx> z;
  for (auto l : lambdas) z.push_back(std::exp(I1 * tau * l));
  return z;
}

int EigenvalueSet::total() const {
  int n = 0;
  for (int m : multiplicities) n += m;
  return n;
}

cplx fold(cplx lambda, double tau) {
  const double w = 2 * pi / tau;
  double re = std::fmod(lambda.real(), w);
  if (re < 0) re += w;
  if (re >= w) re -= w;
  return {re, lambda.imag()};
}

cplx lambda_from_z(cplx z, double tau) { return fold(-I1 * std::log(z) / tau, tau); }

double strip_distance(cplx a, cplx b, double tau) {
  const double w = 2 * pi / tau;
  double dr = std::remainder(a.real() - b.real(), w);
  return std::hypot(dr, a.imag() - b.imag());
}

namespace {

// sort by (Re, Im) and merge clusters closer than tol
EigenvalueSet merged(std::vector<cplx> ls, std::vector<int> mult, EigMethod m, double tau, double tol) {
  std::vector<size_t> order(ls.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return ls[i].real() != ls[j].real() ? ls[i].real() < ls[j].real() : ls[i].imag() < ls[j].imag();
  });
  EigenvalueSet out;
  out.method = m;
  out.tau = tau;
  for (size_t i : order) {
    bool joined = false;
    for (size_t j = 0; j < out.lambdas.size(); ++j) {
      if (strip_distance(out.lambdas[j], ls[i], tau) < tol) {
        out.multiplicities[j] += mult[i];
        joined = true;
        break;
      }
    }
    if (!joined) {
      out.lambdas.push_back(ls[i]);
      out.multiplicities.push_back(mult[i]);
    }
  }
  return out;
}

} // namespace

EigenvalueSet eigenvalues_floquet(const TimePeriodicPotential& V, const Laplacian& lap, int n_t,
                                  const FloquetFilter& cfg) {
  const double tau = V.grid.tau, w = V.grid.omega();
  if (V.is_zero()) return merged({}, {}, EigMethod::Floquet, tau, cfg.merge);
  auto H = build_floquet_matrix(V, lap, n_t, cfg.window_shift);
  auto es = linalg::eig(H.entries, true);
  const int S = lap.size(), K = 2 * n_t + 1;
  // central window of width ω around the middle of the shell band
  const double lo = lap.box.d - w / 2 + cfg.window_shift * w;
  std::vector<cplx> keep;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    cplx l = es.values(i);
    if (l.imag() <= cfg.im_min) continue;
    if (l.real() < lo || l.real() >= lo + w) continue;
    auto v = es.vectors.col(i);
    double tot = v.squaredNorm();
    double edge = v.segment(0, S).squaredNorm() + v.segment((K - 1) * S, S).squaredNorm();
    if (edge > cfg.edge_mass * tot) continue;
    keep.push_back(fold(l, tau));
  }
  return merged(keep, std::vector<int>(keep.size(), 1), EigMethod::Floquet, tau, cfg.merge);
}

EigenvalueSet eigenvalues_monodromy(const MonodromyResult& mon, double im_min, double merge) {
  auto es = linalg::eig(mon.U_tau, false);
  std::vector<cplx> keep;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    cplx m = es.values(i);
    // |m| = e^{τ Im λ}
    if (std::log(std::abs(m)) / mon.tau <= im_min) continue;
    keep.push_back(fold(I1 * std::log(m) / mon.tau, mon.tau));
  }
  return merged(keep, std::vector<int>(keep.size(), 1), EigMethod::Monodromy, mon.tau, merge);
}

double BoundReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (auto& e : entries) m = std::min(m, e.margin);
  return m;
}

BoundReport eigenvalue_bound_check(const EigenvalueSet& eigs, const TimePeriodicPotential& V) {
  BoundReport r;
  r.rhs = 2 * hs_time_integral(V);
  r.nu0 = r.rhs;
  // sup over a refined interpolation grid
  auto fine = V.resampled(8 * V.grid.M);
  r.im_V_norm = fine.values.imag().cwiseAbs().maxCoeff();
  for (auto l : eigs.lambdas) {
    BoundEntry e;
    e.lambda = l;
    const double nu = l.imag();
    e.lhs = nu * (1 - std::exp(-eigs.tau * nu));
    e.margin = r.rhs - e.lhs;
    e.im_bound_ok = nu <= r.im_V_norm * (1 + 1e-9);
    e.flagged = e.margin < 0 || !e.im_bound_ok;
    if (e.flagged) r.holds = false;
    r.entries.push_back(e);
  }
  return r;
}

Matching match_eigenvalues(const EigenvalueSet& a, const EigenvalueSet& b) {
  std::vector<cplx> xa, xb;
  for (size_t i = 0; i < a.lambdas.size(); ++i) xa.insert(xa.end(), a.multiplicities[i], a.lambdas[i]);
  for (size_t i = 0; i < b.lambdas.size(); ++i) xb.insert(xb.end(), b.multiplicities[i], b.lambdas[i]);
  Matching m;
  const bool swap = xa.size() > xb.size();
  const auto& r = swap ? xb : xa;
  const auto& c = swap ? xa : xb;
  m.unmatched = static_cast<int>(c.size() - r.size());
  if (r.empty()) return m;
  RMat cost(r.size(), c.size());
  for (size_t i = 0; i < r.size(); ++i)
    for (size_t j = 0; j < c.size(); ++j) cost(i, j) = strip_distance(r[i], c[j], a.tau);
  auto as = linalg::hungarian(cost);
  for (size_t i = 0; i < r.size(); ++i) {
    m.max_distance = std::max(m.max_distance, cost(i, as[i]));
    m.pairs.emplace_back(swap ? as[i] : int(i), swap ? int(i) : as[i]);
  }
  return m;
}

} // namespace qtrace

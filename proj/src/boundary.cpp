#include <cmath>

#include "qtrace/simd.hpp"
#include "qtrace/trace.hpp"

namespace qtrace {

namespace {

// value at ρ = 1 from a line in log ρ through the last two circles
template <class T>
T extrapolate(const std::vector<double>& rho, const std::vector<T>& q) {
  const size_t n = q.size();
  if (n == 1) return q[0];
  const double l1 = std::log(rho[n - 2]), l2 = std::log(rho[n - 1]);
  return q[n - 1] + (q[n - 1] - q[n - 2]) * (-l2 / (l2 - l1));
}

bool sample_circle(const DeterminantEvaluator& ev, CircleSamples& c, int n) {
  c.t.resize(n);
  c.w.resize(n);
  c.log_abs.resize(n);
  const double dt = 2 * pi / n;
  for (int i = 0; i < n; ++i) {
    c.t[i] = (i + c.offset) * dt;
    c.w[i] = std::polar(1.0, c.t[i]);
  }
  std::vector<double> log_f(n);
  parallel_for(n, [&](int i) {
    auto [f, e] = ev.log_psi_parts(c.rho * c.w[i]);
    log_f[i] = f.real();
    c.log_abs[i] = (f + e).real();
  });
  // the exponent factor never vanishes; only f carries zeros
  for (double v : log_f)
    if (!(v > std::log(1e-12))) return false;
  return true;
}

} // namespace

BoundaryMeasure boundary_measure(const DeterminantEvaluator& ev, const CircleConfig& cfg) {
  BoundaryMeasure m;
  m.mu.assign(cfg.n_max + 1, 0.0);
  if (ev.trivial()) {
    m.zero = true;
    m.mass_at.assign(cfg.radii.size(), 0.0);
    for (double r : cfg.radii) m.circles.push_back({r, {}, {}, {}, 0.0});
    return m;
  }
  const auto& K = simd::kernels();
  std::vector<std::vector<cplx>> moments;
  for (double rho : cfg.radii) {
    int n = std::max(cfg.base_samples, int(std::ceil(cfg.samples_per_gap / (1 - rho))));
    n += n % 2;
    CircleSamples c;
    c.rho = rho;
    // irrational shift keeps nodes off the resonance phases of the truncated spectrum
    c.offset = 0.5 * (std::sqrt(5.0) - 1);
    if (!sample_circle(ev, c, n)) {
      c.offset = 0.5 * (3 - std::sqrt(5.0)) * 0.5;
      if (!sample_circle(ev, c, n)) throw Error(ErrorKind::LogSingularity, "|psi| < 1e-12 on the sampling circle");
    }
    std::vector<cplx> conj_w(n), mom(cfg.n_max + 1);
    for (int i = 0; i < n; ++i) conj_w[i] = std::conj(c.w[i]);
    K.fourier_moments(c.log_abs.data(), conj_w.data(), n, cfg.n_max, mom.data());
    for (auto& x : mom) x *= 2 * pi / n;
    moments.push_back(mom);
    m.mass_at.push_back(mom[0].real());
    m.circles.push_back(std::move(c));
  }
  std::vector<double> rho(cfg.radii);
  std::vector<double> mass(moments.size());
  for (size_t i = 0; i < moments.size(); ++i) mass[i] = moments[i][0].real();
  m.mass = extrapolate(rho, mass);
  for (int n = 1; n <= cfg.n_max; ++n) {
    std::vector<cplx> q;
    for (auto& mom : moments) q.push_back(mom[n] / pi);
    m.mu[n] = extrapolate(rho, q);
  }
  m.singular_estimate = std::abs(m.mass - mass.back()) / (2 * pi);
  return m;
}

namespace {

std::pair<cplx, cplx> schwarz_pair(const BoundaryMeasure& m, cplx z) {
  if (m.zero) return {0.0, 0.0};
  const auto& K = simd::kernels();
  std::vector<double> rho;
  std::vector<cplx> ker, der;
  for (auto& c : m.circles) {
    if (std::abs(z) > 0.9 * c.rho) throw std::invalid_argument("schwarz_integral: |z| must be <= 0.9 rho");
    cplx k, d;
    K.schwarz_sums(c.log_abs.data(), c.w.data(), c.w.size(), z, &k, &d);
    const double dt = 2 * pi / c.w.size();
    rho.push_back(c.rho);
    ker.push_back(k * dt / (2 * pi));
    der.push_back(d * dt / pi);
  }
  return {extrapolate(rho, ker), extrapolate(rho, der)};
}

} // namespace

cplx schwarz_integral(const BoundaryMeasure& m, cplx z) { return schwarz_pair(m, z).first; }
cplx schwarz_derivative(const BoundaryMeasure& m, cplx z) { return schwarz_pair(m, z).second; }

} // namespace qtrace

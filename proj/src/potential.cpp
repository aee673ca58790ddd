#include "qtrace/potential.hpp"

#include <cmath>
#include <random>

namespace qtrace {

TimeGrid::TimeGrid(double tau_, int M_) : tau(tau_), M(M_) {
  if (!(tau > 0)) throw std::invalid_argument("TimeGrid: tau must be positive");
  if (M < 4) throw std::invalid_argument("TimeGrid: M must be >= 4");
}

TimePeriodicPotential::TimePeriodicPotential(LatticeBox b, TimeGrid g)
    : box(std::move(b)), grid(g), values(CMat::Zero(g.M, box.site_count())) {}

TimePeriodicPotential::TimePeriodicPotential(LatticeBox b, TimeGrid g, CMat v)
    : box(std::move(b)), grid(g), values(std::move(v)) {
  if (values.rows() != grid.M || values.cols() != box.site_count())
    throw std::invalid_argument("TimePeriodicPotential: shape mismatch");
  if (!values.allFinite()) throw std::invalid_argument("TimePeriodicPotential: non-finite samples");
}

CVec TimePeriodicPotential::harmonic(int j) const {
  const int M = grid.M;
  CVec out = CVec::Zero(sites());
  if (2 * std::abs(j) > M) return out;
  for (int k = 0; k < M; ++k) {
    double ph = -2 * pi * double(j) * k / M;
    out += std::polar(1.0, ph) * values.row(k).transpose();
  }
  out /= double(M);
  if (2 * std::abs(j) == M) out *= 0.5;
  return out;
}

TimePeriodicPotential::Harmonics TimePeriodicPotential::harmonics(double rel_cut) const {
  Harmonics h;
  const int M = grid.M;
  std::vector<CVec> all;
  double mx = 0.0;
  for (int j = -M / 2; j <= M / 2; ++j) {
    all.push_back(harmonic(j));
    mx = std::max(mx, all.back().cwiseAbs().maxCoeff());
  }
  for (int j = -M / 2, i = 0; j <= M / 2; ++j, ++i) {
    if (all[i].cwiseAbs().maxCoeff() > rel_cut * mx) {
      h.j.push_back(j);
      h.coef.push_back(all[i]);
    }
  }
  return h;
}

CVec TimePeriodicPotential::at(double t) const {
  auto h = harmonics();
  CVec out = CVec::Zero(sites());
  for (size_t i = 0; i < h.j.size(); ++i) out += std::polar(1.0, h.j[i] * grid.omega() * t) * h.coef[i];
  return out;
}

TimePeriodicPotential TimePeriodicPotential::resampled(int M_new) const {
  TimeGrid g(grid.tau, M_new);
  auto h = harmonics();
  CMat v = CMat::Zero(M_new, sites());
  for (int k = 0; k < M_new; ++k)
    for (size_t i = 0; i < h.j.size(); ++i)
      v.row(k) += std::polar(1.0, h.j[i] * g.omega() * g.node(k)) * h.coef[i].transpose();
  return {box, g, v};
}

double mixed_norm(const TimePeriodicPotential& V, double p, double r) {
  if (p < 1 || r < 1) throw std::invalid_argument("mixed_norm: p, r >= 1");
  double s = 0.0;
  for (int k = 0; k < V.grid.M; ++k) s += std::pow(lp_norm(V.values.row(k).transpose(), p), r);
  return std::pow(s * V.grid.h(), 1.0 / r);
}

double hs_time_integral(const TimePeriodicPotential& V) { return V.values.squaredNorm() * V.grid.h(); }

namespace {
double uniform01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }
} // namespace

TimePeriodicPotential generate_potential(const LatticeBox& box, const TimeGrid& grid, const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  TimePeriodicPotential V(box, grid);
  const cplx shape{1 - spec.imaginary_fraction, spec.imaginary_fraction};
  for (int x = 0; x < box.site_count(); ++x) {
    // draw for every site so the stream does not depend on the radius
    double w = x == 0 ? 1.0 : 0.3 + 0.7 * uniform01(rng);
    double m = 0.2 + 0.4 * uniform01(rng);
    double phi = 2 * pi * uniform01(rng);
    if (box.distance_from_origin(x) > spec.localization_radius + 1e-12) continue;
    for (int k = 0; k < grid.M; ++k)
      V.values(k, x) = spec.amplitude * w * shape * (1 + m * std::cos(grid.omega() * grid.node(k) + phi));
  }
  return V;
}

} // namespace qtrace

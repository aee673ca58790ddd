#include "qtrace/lattice.hpp"

#include <cmath>
#include <numeric>

namespace qtrace {

LatticeBox::LatticeBox(std::vector<int> s, Boundary b)
    : d(static_cast<int>(s.size())), sides(std::move(s)), boundary(b) {
  if (d < 1) throw std::invalid_argument("LatticeBox: need d >= 1");
  for (int L : sides)
    if (L < 1) throw std::invalid_argument("LatticeBox: sides must be positive");
}

int LatticeBox::site_count() const {
  return std::accumulate(sides.begin(), sides.end(), 1, std::multiplies<>());
}

int LatticeBox::flat(const std::vector<int>& x) const {
  int idx = 0, stride = 1;
  for (int j = 0; j < d; ++j) {
    idx += x[j] * stride;
    stride *= sides[j];
  }
  return idx;
}

std::vector<int> LatticeBox::coords(int f) const {
  std::vector<int> x(d);
  for (int j = 0; j < d; ++j) {
    x[j] = f % sides[j];
    f /= sides[j];
  }
  return x;
}

double LatticeBox::distance_from_origin(int f) const {
  auto x = coords(f);
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    int c = x[j];
    if (boundary == Boundary::Periodic) c = std::min(c, sides[j] - c);
    s += double(c) * c;
  }
  return std::sqrt(s);
}

Laplacian::Laplacian(const LatticeBox& b) : box(b) {
  const int n = box.site_count();
  matrix = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    auto x = box.coords(i);
    for (int j = 0; j < box.d; ++j) {
      for (int s : {-1, 1}) {
        auto y = x;
        y[j] += s;
        if (box.boundary == Boundary::Periodic) {
          y[j] = (y[j] + box.sides[j]) % box.sides[j];
        } else if (y[j] < 0 || y[j] >= box.sides[j]) {
          // f vanishes outside the box
          matrix(i, i) += 0.5;
          continue;
        }
        // ½(f_x − f_y) per bond; a self-loop (L=1) cancels
        matrix(i, i) += 0.5;
        matrix(i, box.flat(y)) -= 0.5;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(matrix);
  eigenvalues = es.eigenvalues();
  eigenvectors = es.eigenvectors();
}

SpatialOperator Laplacian::op() const { return {box, matrix.cast<cplx>()}; }

CMat Laplacian::function(const CVec& f) const {
  CMat Uc = eigenvectors.cast<cplx>();
  return Uc * f.asDiagonal() * Uc.transpose();
}

SpatialOperator build_laplacian(const LatticeBox& box) { return Laplacian(box).op(); }

SpatialOperator lattice_resolvent(const Laplacian& lap, cplx lambda, double collision_tol) {
  const int n = lap.size();
  CVec f(n);
  for (int i = 0; i < n; ++i) {
    cplx gap = lap.eigenvalues(i) - lambda;
    if (std::abs(gap) < collision_tol)
      throw Error(ErrorKind::SpectrumCollision, "lambda within tolerance of a Laplacian eigenvalue");
    f(i) = 1.0 / gap;
  }
  return {lap.box, lap.function(f)};
}

bool check_condition_V(double p, int d) {
  if (p < 1.0) return false;
  if (d == 3) return p < 6.0 / 5.0;
  if (d >= 4) return p < 4.0 / 3.0;
  return false;
}

double lp_norm(const CVec& v, double p) {
  if (std::isinf(p)) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), p);
  return std::pow(s, 1.0 / p);
}

BoundCheck hs_norm_bound_check(const Laplacian& lap, const CVec& u, const CVec& v, cplx lambda, double p) {
  auto r0 = lattice_resolvent(lap, lambda);
  CMat f = u.asDiagonal() * r0.entries * v.asDiagonal();
  BoundCheck out;
  out.observed = f.norm();
  const int d = lap.box.d;
  double rho = 0.0;
  if (lambda.real() < 0) rho = std::abs(lambda);
  else if (lambda.real() > 2 * d) rho = std::abs(lambda - cplx(2.0 * d));
  else rho = std::abs(lambda.imag());
  auto c = paper_constants(p, d, 1.0);
  out.bound = c.C_star * lp_norm(u, 2 * p) * lp_norm(v, 2 * p) / std::max(1.0, rho);
  out.holds = out.observed <= out.bound * (1 + 1e-12);
  return out;
}

} // namespace qtrace

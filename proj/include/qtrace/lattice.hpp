#pragma once

#include <vector>

#include "qtrace/core.hpp"

namespace qtrace {

enum class Boundary { Periodic, Dirichlet };

// finite box Π[0, L_j) of Z^d; flat index has the first coordinate fastest
struct LatticeBox {
  int d = 1;
  std::vector<int> sides{1};
  Boundary boundary = Boundary::Periodic;

  LatticeBox() = default;
  explicit LatticeBox(std::vector<int> s, Boundary b = Boundary::Periodic);

  int site_count() const;
  int flat(const std::vector<int>& x) const;
  std::vector<int> coords(int flat) const;
  // minimal-image Euclidean distance from the origin site
  double distance_from_origin(int flat) const;
};

struct SpatialOperator {
  LatticeBox box;
  CMat entries;
};

// Laplacian with a cached real eigendecomposition; the workhorse type
struct Laplacian {
  LatticeBox box;
  RMat matrix;
  RVec eigenvalues;  // ascending
  RMat eigenvectors; // orthonormal columns

  explicit Laplacian(const LatticeBox& b);
  int size() const { return static_cast<int>(matrix.rows()); }
  SpatialOperator op() const;
  // U·diag(f(e))·Uᵀ
  CMat function(const CVec& diag) const;
};

SpatialOperator build_laplacian(const LatticeBox& box);

SpatialOperator lattice_resolvent(const Laplacian& lap, cplx lambda, double collision_tol = 1e-8);

bool check_condition_V(double p, int d);

struct PaperConstants {
  double p = 1.0;
  int d = 3;
  double tau = 1.0;
  double C_star = 0.0;
  double C_g = 0.0;
  double C_bullet = 0.0;
};

double C_g_closed_form();
PaperConstants paper_constants(double p, int d, double tau);

struct BoundCheck {
  double observed = 0.0;
  double bound = 0.0;
  bool holds = true;
};

// ‖u (Δ-λ)^{-1} v‖_HS against C_* ‖u‖_{2p}‖v‖_{2p} / max(1, dist(λ, [0,2d]))
BoundCheck hs_norm_bound_check(const Laplacian& lap, const CVec& u, const CVec& v, cplx lambda, double p);

cplx g_function(cplx a, double kappa);

struct GMaxReport {
  double observed_max = 0.0;
  double C_g = 0.0;
  double cap = 20.0;
  double tail_bound = 0.0; // sup of |g| above the cap, analytic
  bool holds = false;
};

// samples per axis along Re a and Im a, plus a κ grid on [-3, 1]
GMaxReport g_function_max_check(int samples, double cap = 20.0);

double lp_norm(const CVec& v, double p);

} // namespace qtrace

#include "qtrace/linalg.hpp"

#include <cmath>
#include <limits>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qtrace::linalg {

namespace {
constexpr int small_n = 48;
}

cplx log_det(CMat A) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return 0.0;
  double re = 0.0, im = 0.0;
  if (n < small_n) {
    Eigen::PartialPivLU<CMat> lu(A);
    const CMat& m = lu.matrixLU();
    for (int i = 0; i < n; ++i) {
      cplx u = m(i, i);
      if (u == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
      re += std::log(std::abs(u));
      im += std::arg(u);
    }
    if (lu.permutationP().determinant() < 0) im += pi;
  } else {
    std::vector<lapack_int> piv(n);
    lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, A.data(), n, piv.data());
    if (info < 0) throw std::runtime_error("zgetrf: bad argument");
    int swaps = 0;
    for (int i = 0; i < n; ++i) {
      cplx u = A(i, i);
      if (u == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
      re += std::log(std::abs(u));
      im += std::arg(u);
      if (piv[i] != i + 1) ++swaps;
    }
    if (swaps % 2) im += pi;
  }
  return {re, im};
}

CMat solve(CMat A, const CMat& B) {
  const int n = static_cast<int>(A.rows());
  if (n < small_n) return A.partialPivLu().solve(B);
  CMat X = B;
  std::vector<lapack_int> piv(n);
  lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, static_cast<lapack_int>(X.cols()), A.data(), n,
                                  piv.data(), X.data(), n);
  if (info > 0) throw Error(ErrorKind::SingularIplusA, "singular system in solve");
  return X;
}

EigResult eig(const CMat& A, bool want_vectors) {
  const int n = static_cast<int>(A.rows());
  EigResult r;
  r.values.resize(n);
  if (n == 0) return r;
  CMat a = A;
  CMat vr;
  if (want_vectors) vr.resize(n, n);
  cplx dummy;
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n,
                                  r.values.data(), &dummy, 1, want_vectors ? vr.data() : &dummy, n);
  if (info != 0) throw std::runtime_error("zgeev failed to converge");
  if (want_vectors) r.vectors = std::move(vr);
  return r;
}

double rcond(const CMat& A) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return 1.0;
  double anorm = A.cwiseAbs().colwise().sum().maxCoeff();
  CMat a = A;
  std::vector<lapack_int> piv(n);
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a.data(), n, piv.data());
  if (info > 0) return 0.0;
  double rc = 0.0;
  LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, a.data(), n, anorm, &rc);
  return rc;
}

std::vector<int> hungarian(const RMat& cost) {
  // shortest augmenting path with potentials, 1-based internally
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw std::invalid_argument("hungarian: rows must not exceed cols");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assign(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j]) assign[p[j] - 1] = j - 1;
  return assign;
}

} // namespace qtrace::linalg

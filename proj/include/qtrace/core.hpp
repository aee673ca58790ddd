#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qtrace {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline const cplx I1{0.0, 1.0};

enum class ErrorKind {
  Usage,
  SpectrumCollision,
  ConditionVViolated,
  FloquetResonance,
  SingularF1,
  RadiusTooSmall,
  SeriesDiverges,
  WindingAmbiguous,
  BoundViolated,
  ZeroOnBoundary,
  LogSingularity,
  NegativeGamma,
  SingularIplusA,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// resonance / singular factorization / ambiguous counting
bool is_degeneracy(ErrorKind k);

// wrap an angle difference into (-pi, pi]
double wrap_angle(double a);

// worker count from QTRACE_THREADS, default 1
int thread_count();

// f(i) for i in [0, n); chunks split across thread_count() threads
template <class F>
void parallel_for(int n, F&& f);

} // namespace qtrace

#include <thread>
#include <vector>

namespace qtrace {

template <class F>
void parallel_for(int n, F&& f) {
  int nt = std::min(thread_count(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nt);
  for (int w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += nt) f(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

} // namespace qtrace

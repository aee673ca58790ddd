#include "qtrace/core.hpp"

#include <cmath>
#include <cstdlib>

namespace qtrace {

const char* to_string(ErrorKind k) {
  switch (k) {
  case ErrorKind::Usage: return "Usage";
  case ErrorKind::SpectrumCollision: return "SpectrumCollision";
  case ErrorKind::ConditionVViolated: return "ConditionVViolated";
  case ErrorKind::FloquetResonance: return "FloquetResonance";
  case ErrorKind::SingularF1: return "SingularF1";
  case ErrorKind::RadiusTooSmall: return "RadiusTooSmall";
  case ErrorKind::SeriesDiverges: return "SeriesDiverges";
  case ErrorKind::WindingAmbiguous: return "WindingAmbiguous";
  case ErrorKind::BoundViolated: return "BoundViolated";
  case ErrorKind::ZeroOnBoundary: return "ZeroOnBoundary";
  case ErrorKind::LogSingularity: return "LogSingularity";
  case ErrorKind::NegativeGamma: return "NegativeGamma";
  case ErrorKind::SingularIplusA: return "SingularIplusA";
  }
  return "Unknown";
}

bool is_degeneracy(ErrorKind k) {
  switch (k) {
  case ErrorKind::SpectrumCollision:
  case ErrorKind::FloquetResonance:
  case ErrorKind::SingularF1:
  case ErrorKind::RadiusTooSmall:
  case ErrorKind::SeriesDiverges:
  case ErrorKind::WindingAmbiguous:
  case ErrorKind::ZeroOnBoundary:
  case ErrorKind::LogSingularity:
  case ErrorKind::SingularIplusA:
    return true;
  default:
    return false;
  }
}

double wrap_angle(double a) {
  a = std::remainder(a, 2 * pi);
  if (a <= -pi) a += 2 * pi;
  return a;
}

int thread_count() {
  static const int n = [] {
    const char* s = std::getenv("QTRACE_THREADS");
    if (!s) return 1;
    int v = std::atoi(s);
    return v > 0 ? v : 1;
  }();
  return n;
}

} // namespace qtrace

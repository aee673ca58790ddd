#include <cmath>

#include "qtrace/lattice.hpp"

namespace qtrace {

double C_g_closed_form() { return 4.0 / (3.0 * pi) + (5.0 + 3.0 * pi) / 4.0 * std::sqrt(2.0); }

namespace {

double c_d(int d) {
  if (d == 3) return 16.0;
  if (d == 4) return 4.0;
  return 14.0 * std::pow(2.0, d / 4.0) / (d - 4);
}

// log(3 + 2c) · (d − d/p), evaluated so that p → 1 stays finite
double log_factor(double p, int d) {
  const double expo = d - d / p;
  if (d == 4) {
    if (p == 1.0) return std::log(4.0); // limit of the d=4 branch
    const double base = (5 * p - 1) / (4 - 3 * p);
    const double e2 = (5 * p - 4) / (4 * (p - 1));
    const double logc = e2 * std::log(base);
    // log(3 + 2c) = logc + log(2 + 3e^{-logc}) is safe for huge c
    const double l = logc > 0 ? logc + std::log(2.0 + 3.0 * std::exp(-logc)) : std::log(3.0 + 2.0 * std::exp(logc));
    return expo * l;
  }
  double c = 0.0;
  if (d == 3) c = 6 * (p - 1) / (6 - 5 * p);
  else c = 3.0 * d * (p - 1) / (3.0 * d - (2.0 * d + 1) * p);
  return expo * std::log(3 + 2 * c);
}

} // namespace

PaperConstants paper_constants(double p, int d, double tau) {
  if (!check_condition_V(p, d))
    throw Error(ErrorKind::ConditionVViolated, "p=" + std::to_string(p) + " d=" + std::to_string(d));
  if (!(tau > 0)) throw std::invalid_argument("paper_constants: tau must be positive");
  PaperConstants c;
  c.p = p;
  c.d = d;
  c.tau = tau;
  c.C_star = std::pow(p, d * (p - 1) / (2 * p)) + c_d(d) * std::exp(log_factor(p, d));
  c.C_g = C_g_closed_form();
  c.C_bullet = 1 + (1 + tau * d / pi) * (c.C_g + 1 / std::sqrt(tau)) + c.C_star / tau;
  return c;
}

cplx g_function(cplx a, double kappa) {
  if (std::abs(a) < 1e-5) return I1 * kappa + (kappa * kappa / 2 - 1.0 / 6) * a;
  return 1.0 / a - std::exp(-I1 * kappa * a) / std::sin(a);
}

GMaxReport g_function_max_check(int samples, double cap) {
  if (samples < 100) throw std::invalid_argument("g_function_max_check: samples >= 100");
  GMaxReport r;
  r.C_g = C_g_closed_form();
  r.cap = cap;
  const int nk = std::max(41, samples / 5);
  const double xmax = 3 * pi / 4;
  std::vector<double> best(nk, 0.0);
  parallel_for(nk, [&](int ik) {
    const double kappa = -3.0 + 4.0 * ik / (nk - 1);
    for (int iy = 0; iy < samples; ++iy) {
      double s = double(iy) / (samples - 1);
      const double y = cap * s * s; // dense near the real axis
      for (int ix = 0; ix < samples; ++ix) {
        const double x = -xmax + 2 * xmax * ix / (samples - 1);
        best[ik] = std::max(best[ik], std::abs(g_function({x, y}, kappa)));
      }
    }
  });
  for (double b : best) r.observed_max = std::max(r.observed_max, b);
  // above the cap: |1/a| <= 1/y and |e^{-iκa}/sin a| <= 2e^{(κ-1)y}/(1-e^{-2y}), worst at κ=1
  r.tail_bound = 1 / cap + 2 / (1 - std::exp(-2 * cap));
  r.holds = r.observed_max <= r.C_g && r.tail_bound <= r.observed_max;
  return r;
}

} // namespace qtrace

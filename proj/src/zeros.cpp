#include <cmath>
#include <deque>

#include "qtrace/spectra.hpp"

namespace qtrace {

namespace {

struct Cell {
  double r0, r1, th0, th1;
  int count;
};

// ψ = det(I + Γ(z)G)·exp(−Tr Γ(z)G₀) and the exponential factor has no winding,
// so the phase of ψ is tracked through f(z) = det(I + Γ(z)G)
class PhaseTracker {
public:
  PhaseTracker(const DeterminantEvaluator& ev, const ZeroSearchConfig& cfg) : ev_(ev), cfg_(cfg) {}

  struct Sample {
    double s;
    cplx z;
    double arg;
    double speed; // |f′/f|
  };

  template <class Path>
  double along(Path path, int n0) {
    double total = 0.0;
    Sample a = sample(path, 0.0);
    for (int i = 1; i <= n0; ++i) {
      Sample b = sample(path, double(i) / n0);
      total += segment(path, a, b, 0);
      a = b;
    }
    return total;
  }

  double arc(double r, double th0, double th1) {
    if (r == 0.0) return 0.0;
    int n = std::max(8, int(std::ceil(cfg_.base_samples * std::abs(th1 - th0) / (2 * pi))));
    return along([&](double s) { return std::polar(r, th0 + s * (th1 - th0)); }, n);
  }

  double radial(double th, double ra, double rb) {
    return along([&](double s) { return std::polar(ra + s * (rb - ra), th); }, 8);
  }

  int winding(double r) { return to_count(arc(r, 0.0, 2 * pi)); }

  int cell_count(const Cell& c) {
    if (c.th1 - c.th0 >= 2 * pi - 1e-15) return winding(c.r1) - (c.r0 > 0 ? winding(c.r0) : 0);
    double s = arc(c.r1, c.th0, c.th1) + radial(c.th1, c.r1, c.r0) + arc(c.r0, c.th1, c.th0) +
               radial(c.th0, c.r0, c.r1);
    return to_count(s);
  }

  int evaluations = 0;

private:
  template <class Path>
  Sample sample(Path& path, double s) {
    ++evaluations;
    cplx z = path(s);
    auto [lg, dl] = ev_.zero_factor(z);
    return {s, z, lg.imag(), std::abs(dl)};
  }

  // accept a step when the sampled phase moves little and |f′/f|·|Δz| bounds the
  // excursion in between; otherwise bisect
  template <class Path>
  double segment(Path& path, const Sample& a, const Sample& b, int depth) {
    double d = wrap_angle(b.arg - a.arg);
    double reach = std::max(a.speed, b.speed) * std::abs(b.z - a.z);
    if (std::abs(d) <= pi / 4 && reach <= pi / 4) return d;
    if (depth >= cfg_.max_refine) {
      if (std::abs(d) > pi / 2 || reach > pi / 2)
        throw Error(ErrorKind::WindingAmbiguous, "phase step above pi/2 after refinement");
      return d;
    }
    Sample m = sample(path, 0.5 * (a.s + b.s));
    return segment(path, a, m, depth + 1) + segment(path, m, b, depth + 1);
  }

  static int to_count(double total) {
    double w = total / (2 * pi);
    long n = std::lround(w);
    if (std::abs(w - n) > 0.25) throw Error(ErrorKind::WindingAmbiguous, "non-integer winding");
    return static_cast<int>(n);
  }

  const DeterminantEvaluator& ev_;
  const ZeroSearchConfig& cfg_;
};

// Newton on log f with a multiplicity-aware step
bool newton(const DeterminantEvaluator& ev, cplx& z, int mult, double tol) {
  for (int it = 0; it < 80; ++it) {
    cplx dl = ev.zero_factor(z).second;
    if (!std::isfinite(dl.real()) || dl == 0.0) return false;
    cplx step = double(mult) / dl;
    z -= step;
    if (std::abs(z) >= 1.0) return false;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return true;
  }
  return false;
}

bool inside(const Cell& c, cplx z, double margin) {
  double r = std::abs(z), th = std::arg(z);
  double dr = (c.r1 - c.r0) * margin, dth = (c.th1 - c.th0) * margin;
  if (r < c.r0 - dr || r > c.r1 + dr) return false;
  if (c.th1 - c.th0 >= 2 * pi - 1e-15) return true;
  double mid = 0.5 * (c.th0 + c.th1);
  return std::abs(wrap_angle(th - mid)) <= 0.5 * (c.th1 - c.th0) + dth;
}

} // namespace

int winding_on_circle(const DeterminantEvaluator& ev, double r, const ZeroSearchConfig& cfg) {
  if (ev.trivial()) return 0;
  PhaseTracker tr(ev, cfg);
  return tr.winding(r);
}

EigenvalueSet zeros_of_psi(const DeterminantEvaluator& ev, const ZeroSearchConfig& cfg, ZeroSearchStats* stats) {
  EigenvalueSet out;
  out.method = EigMethod::PsiZeros;
  out.tau = ev.tau();
  if (ev.trivial()) return out;
  PhaseTracker tr(ev, cfg);

  double r_min = cfg.r_min;
  if (r_min <= 0) {
    const double nu0 = 2 * hs_time_integral(ev.potential());
    r_min = std::max(0.5 * std::exp(-ev.tau() * nu0), 1e-12);
  }
  std::vector<double> radii{r_min};
  for (double r : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99})
    if (r > r_min && r < cfg.r_max) radii.push_back(r);
  radii.push_back(cfg.r_max);

  // nested circles; a circle hitting a zero is nudged inward
  std::vector<int> counts;
  for (auto& r : radii) {
    for (int attempt = 0;; ++attempt) {
      try {
        counts.push_back(tr.winding(r));
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::WindingAmbiguous || attempt == 4) throw;
        r *= 1 - 1e-3 * (attempt + 1);
      }
    }
    if (stats) stats->circle_counts.emplace_back(r, counts.back());
  }

  std::deque<Cell> queue;
  if (counts[0] > 0) queue.push_back({0.0, radii[0], 0.0, 2 * pi, counts[0]});
  for (size_t i = 1; i < radii.size(); ++i)
    if (counts[i] - counts[i - 1] > 0) queue.push_back({radii[i - 1], radii[i], 0.0, 2 * pi, counts[i] - counts[i - 1]});

  std::vector<cplx> zeros;
  std::vector<int> mult;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    if (c.count <= 0) continue;
    const double rm = 0.5 * (c.r0 + c.r1);
    const double arc = c.r1 * (c.th1 - c.th0), rad = c.r1 - c.r0;
    const double diam = std::max(arc, rad);
    if (c.count == 1 || diam < 1e-7) {
      cplx z = std::polar(rm, 0.5 * (c.th0 + c.th1));
      // Newton may converge to a zero of a neighbouring cell; such a root is
      // rejected and the cell is split further
      bool ok = newton(ev, z, c.count, cfg.newton_tol) && inside(c, z, 1e-6);
      for (const cplx& w : zeros)
        if (ok && std::abs(w - z) <= 1e-9 * std::max(1.0, std::abs(z))) ok = false;
      if (ok || diam < 1e-10) {
        zeros.push_back(z);
        mult.push_back(c.count);
        continue;
      }
    }
    // split along the longer side; nudge the cut if it runs through a zero
    const bool split_theta = arc > rad;
    for (int attempt = 0;; ++attempt) {
      double f = 0.5 + 0.0137 * attempt;
      Cell a = c, b = c;
      if (split_theta) {
        double th = c.th0 + f * (c.th1 - c.th0);
        a.th1 = th;
        b.th0 = th;
      } else {
        double r = c.r0 + f * (c.r1 - c.r0);
        a.r1 = r;
        b.r0 = r;
      }
      try {
        // a full annulus cut in θ needs both halves counted as sectors
        a.count = tr.cell_count(a);
        b.count = tr.cell_count(b);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::WindingAmbiguous || attempt == 6) throw;
        continue;
      }
      if (a.count + b.count != c.count) {
        if (attempt == 6) throw Error(ErrorKind::WindingAmbiguous, "cell counts do not add up");
        continue;
      }
      queue.push_back(a);
      queue.push_back(b);
      break;
    }
  }
  if (stats) stats->evaluations = tr.evaluations;
  for (size_t i = 0; i < zeros.size(); ++i) {
    out.lambdas.push_back(lambda_from_z(zeros[i], out.tau));
    out.multiplicities.push_back(mult[i]);
  }
  return out;
}

} // namespace qtrace

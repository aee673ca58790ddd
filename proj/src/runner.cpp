#include "qtrace/runner.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "qtrace/bounds.hpp"

namespace qtrace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

fs::path prepare(const Scenario& s) {
  fs::path dir(s.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Usage, "cannot create output directory " + s.output_dir);
  return dir;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorKind::Usage, "cannot write " + p.string());
  out << j.dump(2) << "\n";
}

class Csv {
public:
  Csv(const fs::path& p, const std::string& header) : f_(std::fopen(p.string().c_str(), "w")) {
    if (!f_) throw Error(ErrorKind::Usage, "cannot write " + p.string());
    std::fprintf(f_, "%s\n", header.c_str());
  }
  ~Csv() { std::fclose(f_); }
  Csv(const Csv&) = delete;
  Csv& operator=(const Csv&) = delete;

  Csv& text(const std::string& s) {
    sep();
    std::fprintf(f_, "%s", s.c_str());
    return *this;
  }
  Csv& num(double x) {
    sep();
    std::fprintf(f_, "%.17g", x);
    return *this;
  }
  Csv& num(cplx z) { return num(z.real()).num(z.imag()); }
  Csv& integer(long long x) {
    sep();
    std::fprintf(f_, "%lld", x);
    return *this;
  }
  void end() {
    std::fprintf(f_, "\n");
    first_ = true;
  }

private:
  void sep() {
    if (!first_) std::fputc(',', f_);
    first_ = false;
  }
  std::FILE* f_;
  bool first_ = true;
};

json cj(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json cj_list(const std::vector<cplx>& v, size_t from = 0) {
  json a = json::array();
  for (size_t i = from; i < v.size(); ++i) a.push_back(cj(v[i]));
  return a;
}

json eig_json(const EigenvalueSet& e) {
  json a = json::array();
  auto zs = e.zs();
  for (size_t i = 0; i < e.lambdas.size(); ++i)
    a.push_back({{"method", to_string(e.method)},
                 {"re_lambda", e.lambdas[i].real()},
                 {"im_lambda", e.lambdas[i].imag()},
                 {"mult", e.multiplicities[i]},
                 {"re_z", zs[i].real()},
                 {"im_z", zs[i].imag()}});
  return a;
}

std::string fmt(double x, int prec = 3) {
  std::ostringstream o;
  o << std::scientific << std::setprecision(prec) << x;
  return o.str();
}

std::string fmtc(cplx z) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(6) << "(" << z.real() << ", " << z.imag() << ")";
  return o.str();
}

void check(std::vector<std::string>& failures, bool ok, const std::string& what) {
  if (!ok) failures.push_back(what);
}

int finish(const std::vector<std::string>& failures, std::ostream& log) {
  for (const auto& f : failures) log << "FAILED: " << f << "\n";
  return failures.empty() ? exit_ok : exit_check_failed;
}

json failures_json(const std::vector<std::string>& f) {
  json a = json::array();
  for (const auto& x : f) a.push_back(x);
  return a;
}

std::vector<cplx> circle_points(double r, int n, double offset) {
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::polar(r, 2 * pi * (i + offset) / n);
  return z;
}

double same_grid_gap(const Scenario& s) {
  auto V = build_potential(s);
  if (V.is_zero()) return 0.0;
  Laplacian lap(s.box);
  DeterminantEvaluator ev(V, lap);
  const cplx lam = sample_lambdas(s, 1).front();
  const cplx D = D_of_lambda(V, lap, lam).value;
  return std::abs(ev.psi(std::exp(I1 * s.tau * lam)).value - D) / std::abs(D);
}

} // namespace

int exit_code_for(const Error& e) {
  if (e.kind() == ErrorKind::Usage) return exit_usage;
  if (is_degeneracy(e.kind())) return exit_degenerate;
  return exit_check_failed;
}

EigMethod parse_method(const std::string& name) {
  if (name == "floquet") return EigMethod::Floquet;
  if (name == "monodromy") return EigMethod::Monodromy;
  if (name == "psi-zeros") return EigMethod::PsiZeros;
  throw Error(ErrorKind::Usage, "unknown method '" + name + "'");
}

EigenvalueSet spectrum_by(const Scenario& s, EigMethod m) {
  Laplacian lap(s.box);
  switch (m) {
  case EigMethod::Floquet:
    return eigenvalues_floquet(build_potential(s), lap, s.N_t);
  case EigMethod::Monodromy:
    return eigenvalues_monodromy(monodromy(build_potential(s), lap, s.monodromy_steps, s.integrator));
  case EigMethod::PsiZeros: {
    DeterminantEvaluator ev(build_potential(s, s.psi_M), lap);
    return zeros_of_psi(ev);
  }
  }
  throw Error(ErrorKind::Usage, "unknown method");
}

std::vector<cplx> sample_lambdas(const Scenario& s, int n, double lo, double hi) {
  std::mt19937_64 rng(s.lambda_seed);
  std::uniform_real_distribution<double> re(0.0, 2 * pi / s.tau), im(lo, hi);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) {
    double x = re(rng);
    out.emplace_back(x, im(rng));
  }
  return out;
}

std::vector<PipelineSample> pipeline_samples(const Scenario& s, const std::vector<cplx>& lambdas) {
  auto V = build_potential(s);
  auto Vref = build_potential(s, s.reference_M);
  Laplacian lap(s.box);
  DeterminantEvaluator ev(V, lap), ev_ref(Vref, lap);
  std::vector<PipelineSample> out;
  for (cplx lam : lambdas) {
    PipelineSample p;
    p.lambda = lam;
    const cplx z = std::exp(I1 * s.tau * lam);
    p.D = D_of_lambda(V, lap, lam).value;
    p.psi = ev.psi(z).value;
    p.psi_ref = ev_ref.psi(z).value;
    p.same_grid = std::abs(p.psi - p.D) / std::abs(p.D);
    p.error = std::abs(p.psi_ref - p.D) / std::abs(p.D);
    out.push_back(p);
  }
  return out;
}

TraceRun trace_run(const Scenario& s, bool with_trR) {
  TraceRun r;
  auto V = build_potential(s);
  Laplacian lap(s.box);
  DeterminantEvaluator ev(V, lap);
  r.eigs = zeros_of_psi(ev);
  CircleConfig cc = s.circle;
  cc.n_max = std::max(cc.n_max, s.n_max);
  r.measure = boundary_measure(ev, cc);
  r.blaschke = blaschke_build(r.eigs, s.n_max);
  r.taylor = taylor_psi(ev, s.n_max);
  r.condition_V = s.condition_V();
  std::optional<PaperConstants> constants;
  if (r.condition_V) constants = paper_constants(s.p, s.box.d, s.tau);

  TraceReport& rep = r.report;
  rep.lambdas = r.eigs.lambdas;
  rep.zs = r.eigs.zs();
  rep.t1 = trace_identity_t1(r.eigs, r.measure, constants, V, s.tol.t1);
  rep.t2 = trace_identity_t2(r.blaschke, r.taylor, r.measure, s.n_max);
  rep.B_n.assign(r.blaschke.Bn.begin() + 1, r.blaschke.Bn.end());
  rep.psi_n = r.taylor.coeffs;
  rep.mu_n.assign(r.measure.mu.begin() + 1, r.measure.mu.begin() + 1 + s.n_max);
  rep.psi1_closed = r.taylor.psi1_closed;
  rep.psi2_closed = r.taylor.psi2_closed;
  rep.psi2_literal = r.taylor.psi2_literal;
  // B₁ = Σ(1/z_j − z̄_j) against ψ₁ in closed form and the first boundary moment
  cplx B1 = 0.0;
  for (size_t j = 0; j < rep.zs.size(); ++j)
    B1 += double(r.eigs.multiplicities[j]) * (1.0 / rep.zs[j] - std::conj(rep.zs[j]));
  rep.t3_residual = std::abs(B1 - (r.measure.mu[1] - r.taylor.psi1_closed));
  rep.singular_estimate = r.measure.singular_estimate;
  rep.factorization = factorization_residual(ev, r.blaschke, r.measure, circle_points(0.5, 16, 0.0));
  if (with_trR && s.trR_samples > 0)
    rep.trR = resolvent_trace_formula_check(ev, r.blaschke, r.measure, circle_points(s.trR_radius, s.trR_samples, 0.1));

  // thresholds never drop below what the determinant pipelines themselves resolve
  const double gap = with_trR ? same_grid_gap(s) : 0.0;
  r.derived_t2_tol = std::max(s.tol.t2_1, 10 * gap);
  r.derived_trR_tol = std::max(s.tol.trR, 10 * gap);

  auto& f = r.failures;
  check(f, rep.t1.nonnegative, "t1: boundary integral negative");
  check(f, rep.t1.gamma_estimate >= -s.tol.t1, "t1: gamma estimate " + fmt(rep.t1.gamma_estimate));
  for (const auto& e : rep.t2) {
    if (e.n == 1) check(f, e.residual <= r.derived_t2_tol, "t2 n=1 residual " + fmt(e.residual));
    if (e.n == 2)
      check(f, e.residual <= std::max(s.tol.t2_2, 10 * gap) * std::max(1.0, std::abs(e.B)),
            "t2 n=2 residual " + fmt(e.residual));
  }
  check(f, rep.t3_residual <= r.derived_t2_tol, "t3 residual " + fmt(rep.t3_residual));
  for (const auto& e : rep.trR)
    check(f, e.residual <= r.derived_trR_tol * (1 + std::abs(e.lhs)), "trR residual " + fmt(e.residual));
  if (rep.t1.e1_margin) check(f, *rep.t1.e1_margin >= 0, "e1 bound violated");
  if (rep.singular_estimate < 1e-2)
    check(f, rep.factorization <= s.tol.factorization, "factorization residual " + fmt(rep.factorization));
  return r;
}

int run_spectrum(const Scenario& s, std::ostream& log) {
  auto dir = prepare(s);
  std::vector<EigenvalueSet> sets;
  for (const auto& m : s.methods) sets.push_back(spectrum_by(s, parse_method(m)));

  json list = json::array();
  for (const auto& e : sets)
    for (auto& x : eig_json(e)) list.push_back(x);
  write_json(dir / "eigenvalues.json",
             {{"scenario", s.name}, {"tau", s.tau}, {"omega", 2 * pi / s.tau}, {"eigenvalues", list}});
  {
    Csv csv(dir / "eigenvalues.csv", "method,re_lambda,im_lambda,mult,re_z,im_z");
    for (const auto& e : sets) {
      auto zs = e.zs();
      for (size_t i = 0; i < e.lambdas.size(); ++i) {
        csv.text(to_string(e.method)).num(e.lambdas[i]).integer(e.multiplicities[i]).num(zs[i]);
        csv.end();
      }
    }
  }

  std::vector<std::string> failures;
  log << std::left << std::setw(12) << "method" << std::setw(8) << "count" << std::setw(14) << "max_dist"
      << "unmatched\n";
  {
    Csv csv(dir / "matching.csv", "method,reference,count,max_distance,unmatched");
    for (const auto& e : sets) {
      Matching m = match_eigenvalues(sets.front(), e);
      csv.text(to_string(e.method)).text(to_string(sets.front().method)).integer(e.total()).num(m.max_distance)
          .integer(m.unmatched);
      csv.end();
      log << std::setw(12) << to_string(e.method) << std::setw(8) << e.total() << std::setw(14)
          << fmt(m.max_distance) << m.unmatched << "\n";
      check(failures, m.unmatched == 0, std::string(to_string(e.method)) + ": eigenvalue count differs");
      check(failures, m.max_distance <= s.tol.three_way,
            std::string(to_string(e.method)) + ": distance " + fmt(m.max_distance));
    }
  }
  for (const auto& e : sets)
    for (cplx l : e.lambdas) log << "  " << std::setw(12) << to_string(e.method) << fmtc(l) << "\n";
  return finish(failures, log);
}

int run_determinant_scan(const Scenario& s, std::ostream& log) {
  auto dir = prepare(s);
  auto V = build_potential(s);
  Laplacian lap(s.box);
  DeterminantEvaluator ev(V, lap);
  std::vector<std::string> failures;
  {
    Csv csv(dir / "determinant_scan.csv", "re_z,im_z,re_psi,im_psi,log_abs_psi");
    auto row = [&](cplx z) {
      cplx lg = ev.log_psi(z);
      csv.num(z).num(std::exp(lg)).num(lg.real());
      csv.end();
    };
    row(0.0);
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99})
      for (cplx z : circle_points(r, 128, 0.0)) row(z);
  }
  check(failures, std::abs(ev.psi(0.0).value - 1.0) <= 1e-12, "psi(0) != 1");

  auto samples = pipeline_samples(s, sample_lambdas(s, s.lambda_samples));
  {
    Csv csv(dir / "pipeline.csv", "re_lambda,im_lambda,re_D,im_D,re_psi,im_psi,same_grid_gap,reference_error");
    for (const auto& p : samples) {
      csv.num(p.lambda).num(p.D).num(p.psi).num(p.same_grid).num(p.error);
      csv.end();
      check(failures, p.same_grid <= s.tol.same_grid, "same-grid gap " + fmt(p.same_grid));
      check(failures, p.error <= s.tol.pipeline, "pipeline error " + fmt(p.error));
    }
  }
  double periodicity = 0.0;
  if (!samples.empty()) {
    const cplx lam = samples.front().lambda;
    periodicity = std::abs(D_of_lambda(V, lap, lam + 2 * pi / s.tau).value - samples.front().D);
    check(failures, periodicity <= s.tol.periodicity, "periodicity gap " + fmt(periodicity));
  }
  log << std::left << std::setw(28) << "lambda" << std::setw(14) << "same_grid" << "reference_error\n";
  for (const auto& p : samples)
    log << std::setw(28) << fmtc(p.lambda) << std::setw(14) << fmt(p.same_grid) << fmt(p.error) << "\n";
  log << "periodicity gap " << fmt(periodicity) << "\n";
  return finish(failures, log);
}

int run_trace_check(const Scenario& s, std::ostream& log) {
  auto dir = prepare(s);
  TraceRun r = trace_run(s);
  const TraceReport& rep = r.report;

  json eigs = json::array();
  for (size_t i = 0; i < rep.lambdas.size(); ++i)
    eigs.push_back({{"lambda", cj(rep.lambdas[i])}, {"z", cj(rep.zs[i])}, {"mult", r.eigs.multiplicities[i]}});
  json t1 = {{"lhs", rep.t1.lhs_sum},
             {"rhs", rep.t1.rhs_integral},
             {"gamma_estimate", rep.t1.gamma_estimate},
             {"residual", rep.t1.residual},
             {"nonnegative", rep.t1.nonnegative}};
  if (rep.t1.e1_bound) {
    t1["e1_bound"] = *rep.t1.e1_bound;
    t1["e1_margin"] = *rep.t1.e1_margin;
  }
  json t2 = json::array();
  for (const auto& e : rep.t2)
    t2.push_back({{"n", e.n},
                  {"B", cj(e.B)},
                  {"psi", cj(e.psi)},
                  {"mu", cj(e.mu)},
                  {"residual", e.residual},
                  {"residual_literal", e.residual_literal}});
  json trR = json::array();
  for (const auto& e : rep.trR)
    trR.push_back({{"z", cj(e.z)},
                   {"lambda", cj(e.lambda)},
                   {"lhs", cj(e.lhs)},
                   {"rhs", cj(e.rhs)},
                   {"dlog_psi", cj(e.dlog_psi)},
                   {"residual", e.residual},
                   {"residual_literal", e.residual_literal}});
  json j = {{"scenario", s.name},
            {"condition_V", r.condition_V},
            {"eigenvalues", eigs},
            {"B_n", cj_list(rep.B_n)},
            {"psi_n", cj_list(rep.psi_n)},
            {"mu_n", cj_list(rep.mu_n)},
            {"psi1_closed", cj(rep.psi1_closed)},
            {"psi2_closed", cj(rep.psi2_closed)},
            {"psi2_literal", cj(rep.psi2_literal)},
            {"boundary_mass", r.measure.mass},
            {"t1", t1},
            {"t2", t2},
            {"t3_residual", rep.t3_residual},
            {"trR", trR},
            {"singular_estimate", rep.singular_estimate},
            {"factorization_residual", rep.factorization},
            {"derived_t2_tolerance", r.derived_t2_tol},
            {"derived_trR_tolerance", r.derived_trR_tol},
            {"failures", failures_json(r.failures)},
            {"passed", r.failures.empty()}};
  write_json(dir / "trace_report.json", j);

  {
    Csv csv(dir / "boundary.csv", "rho,t,log_abs_psi");
    for (const auto& c : r.measure.circles)
      for (size_t i = 0; i < c.t.size(); ++i) {
        csv.num(c.rho).num(c.t[i]).num(c.log_abs[i]);
        csv.end();
      }
  }

  log << "eigenvalues: " << r.eigs.total() << "\n";
  for (cplx l : rep.lambdas) log << "  " << fmtc(l) << "\n";
  log << std::left << std::setw(24) << "quantity" << std::setw(14) << "value" << "threshold\n";
  auto line = [&](const std::string& name, double v, const std::string& thr) {
    log << std::setw(24) << name << std::setw(14) << fmt(v) << thr << "\n";
  };
  line("t1 rhs", rep.t1.rhs_integral, ">= " + fmt(-s.tol.t1));
  line("t1 eigenvalue sum", rep.t1.lhs_sum, "");
  line("t1 gamma_estimate", rep.t1.gamma_estimate, ">= " + fmt(-s.tol.t1));
  for (const auto& e : rep.t2)
    line("t2 residual n=" + std::to_string(e.n), e.residual,
         e.n == 1 ? fmt(r.derived_t2_tol) : e.n == 2 ? fmt(s.tol.t2_2) + "*max(1,|B2|)" : "reported");
  line("t3 residual", rep.t3_residual, fmt(r.derived_t2_tol));
  double trR_max = 0.0;
  for (const auto& e : rep.trR) trR_max = std::max(trR_max, e.residual / (1 + std::abs(e.lhs)));
  line("trR residual (rel)", trR_max, fmt(r.derived_trR_tol));
  if (rep.t1.e1_margin) line("e1 margin", *rep.t1.e1_margin, ">= 0");
  line("factorization", rep.factorization, fmt(s.tol.factorization));
  line("singular_estimate", rep.singular_estimate, "reported");
  return finish(r.failures, log);
}

int run_bounds_check(const Scenario& s, std::ostream& log) {
  auto dir = prepare(s);
  auto V = build_potential(s);
  Laplacian lap(s.box);
  std::vector<std::string> failures;
  json j = {{"scenario", s.name}, {"condition_V", s.condition_V()}};

  json ee = json::array();
  for (const auto& m : s.methods) {
    auto eigs = spectrum_by(s, parse_method(m));
    auto rep = eigenvalue_bound_check(eigs, V);
    json entries = json::array();
    for (const auto& e : rep.entries)
      entries.push_back({{"lambda", cj(e.lambda)}, {"lhs", e.lhs}, {"margin", e.margin}, {"flagged", e.flagged}});
    ee.push_back({{"method", m}, {"rhs", rep.rhs}, {"holds", rep.holds}, {"entries", entries}});
    check(failures, rep.holds, m + ": eigenvalue bound violated");
    log << "ee " << std::left << std::setw(12) << m << "eigenvalues " << eigs.total() << "  min margin "
        << fmt(rep.entries.empty() ? rep.rhs : rep.min_margin()) << "\n";
  }
  j["eigenvalue_bound"] = ee;

  auto summary = [&](const std::string& name, const std::vector<BoundCheck>& v) {
    double worst = -1e300;
    bool ok = true;
    for (const auto& b : v) {
      worst = std::max(worst, b.observed - b.bound);
      ok = ok && b.holds;
    }
    check(failures, ok, name + " bound violated");
    log << std::left << std::setw(16) << name << "instances " << std::setw(4) << v.size() << (ok ? "hold" : "VIOLATED")
        << "\n";
    return json{{"instances", v.size()}, {"holds", ok}, {"max_excess", v.empty() ? 0.0 : worst}};
  };

  std::mt19937_64 rng(s.generator.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int n_inst = 20;

  std::vector<BoundCheck> res2;
  for (int i = 0; i < n_inst; ++i) {
    const double re = 2 * pi / s.tau * uni(rng), nu = 0.2 + 4.8 * uni(rng);
    res2.push_back(res2_check(V, lap, {re, nu}));
  }
  j["res2"] = summary("res2", res2);
  j["res2j_J1"] = summary("res2j J1", {res2j_J1_check(V, lap)});
  j["res2j_J2"] = summary("res2j J2", {res2j_J2_check(V, lap)});

  if (s.condition_V()) {
    const int S = lap.size(), d = s.box.d;
    std::vector<BoundCheck> efuv;
    for (int i = 0; i < n_inst; ++i) {
      CVec u(S), v(S);
      for (int x = 0; x < S; ++x) {
        u(x) = {uni(rng) - 0.5, uni(rng) - 0.5};
        v(x) = {uni(rng) - 0.5, uni(rng) - 0.5};
      }
      const double im = (0.05 + 2 * uni(rng)) * (uni(rng) < 0.5 ? -1 : 1);
      efuv.push_back(hs_norm_bound_check(lap, u, v, {-1 + (2 * d + 2) * uni(rng), im}, s.p));
    }
    j["efuv"] = summary("efuv", efuv);
    DeterminantEvaluator ev(V, lap);
    std::vector<BoundCheck> hinf;
    if (!ev.trivial())
      for (double r : {0.3, 0.6, 0.95})
        for (cplx z : circle_points(r, 32, 0.25)) hinf.push_back(psi_hinf_check(ev, z, s.p));
    j["psi_hinf"] = summary("psi H-infinity", hinf);
  } else {
    log << "condition V fails for (p, d); efuv and H-infinity checks not armed\n";
  }
  j["failures"] = failures_json(failures);
  j["passed"] = failures.empty();
  write_json(dir / "bounds.json", j);
  return finish(failures, log);
}

int run_constants(const Scenario& s, std::ostream& log) {
  auto dir = prepare(s);
  auto c = paper_constants(s.p, s.box.d, s.tau);
  auto g = g_function_max_check(400);
  json grid = json::array();
  for (double p : {1.0, 1.1, 1.5, 2.0, 3.0})
    for (int d : {3, 4, 5, 6})
      for (double tau : {0.5, 1.0, 2.0}) {
        if (!check_condition_V(p, d)) continue;
        auto k = paper_constants(p, d, tau);
        grid.push_back({{"p", p}, {"d", d}, {"tau", tau}, {"C_star", k.C_star}, {"C_bullet", k.C_bullet}});
      }
  json j = {{"p", s.p},
            {"d", s.box.d},
            {"tau", s.tau},
            {"C_star", c.C_star},
            {"C_g", c.C_g},
            {"C_bullet", c.C_bullet},
            {"g_certificate",
             {{"observed_max", g.observed_max}, {"cap", g.cap}, {"tail_bound", g.tail_bound}, {"holds", g.holds}}},
            {"grid", grid}};
  write_json(dir / "constants.json", j);
  log << std::setprecision(10) << "C_*  = " << c.C_star << "\nC_g  = " << c.C_g << "\nC_•  = " << c.C_bullet
      << "\ng max observed " << g.observed_max << ", tail bound " << g.tail_bound << "\n";
  std::vector<std::string> failures;
  check(failures, g.holds, "g certificate");
  return finish(failures, log);
}

int run_convergence(const Scenario& s, std::ostream& log) {
  if (s.sweep_M.empty() || s.sweep_N_t.empty() || s.sweep_sides.empty())
    throw Error(ErrorKind::Usage, "convergence sweep lists must be nonempty");
  auto dir = prepare(s);
  const auto lambdas = sample_lambdas(s, s.lambda_samples);
  const int M0 = s.sweep_M.front();

  Csv csv(dir / "convergence.csv",
          "sides,N_t,M,pipeline_error,same_grid_gap,pipeline_ratio,pipeline_decreasing,t1_residual,"
          "t2_1_residual,t2_decreasing,eig_count,eig_delta");
  log << std::left << std::setw(10) << "sides" << std::setw(6) << "N_t" << std::setw(7) << "M" << std::setw(13)
      << "pipeline" << std::setw(9) << "ratio" << std::setw(13) << "t1" << std::setw(13) << "t2_1"
      << "eig_delta\n";

  std::optional<EigenvalueSet> prev_eigs;
  // previous row on the same (sides, N_t) line
  std::map<std::pair<std::string, int>, std::pair<double, double>> prev_line;
  for (const auto& sides : s.sweep_sides) {
    std::string tag;
    for (size_t i = 0; i < sides.size(); ++i) tag += (i ? "x" : "") + std::to_string(sides[i]);
    for (int nt : s.sweep_N_t)
      for (int M : s.sweep_M) {
        Scenario t = s;
        t.box = LatticeBox(sides, s.box.boundary);
        t.N_t = nt;
        t.M = M;
        t.circle.base_samples = std::max(16, int(std::lround(double(s.circle.base_samples) * M / M0)));
        auto pipe = pipeline_samples(t, lambdas);
        double err = 0.0, gap = 0.0;
        for (const auto& p : pipe) {
          err = std::max(err, p.error);
          gap = std::max(gap, p.same_grid);
        }
        TraceRun tr = trace_run(t, false);
        const double t1 = tr.report.t1.residual;
        const double t2 = tr.report.t2.empty() ? 0.0 : tr.report.t2.front().residual;
        auto eigs = eigenvalues_floquet(build_potential(t), Laplacian(t.box), nt);
        double delta = std::nan("");
        if (prev_eigs) delta = match_eigenvalues(*prev_eigs, eigs).max_distance;
        prev_eigs = eigs;

        double ratio = std::nan("");
        bool pipe_dec = true, t2_dec = true;
        auto key = std::make_pair(tag, nt);
        if (auto it = prev_line.find(key); it != prev_line.end()) {
          ratio = it->second.first / err;
          pipe_dec = err <= it->second.first;
          t2_dec = t2 <= it->second.second * 1.5;
        }
        prev_line[key] = {err, t2};

        csv.text(tag).integer(nt).integer(M).num(err).num(gap).num(ratio).integer(pipe_dec).num(t1).num(t2)
            .integer(t2_dec).integer(eigs.total()).num(delta);
        csv.end();
        log << std::setw(10) << tag << std::setw(6) << nt << std::setw(7) << M << std::setw(13) << fmt(err)
            << std::setw(9) << std::fixed << std::setprecision(2) << ratio << std::defaultfloat << std::setw(13)
            << fmt(t1) << std::setw(13) << fmt(t2) << fmt(delta) << "\n";
      }
  }
  return exit_ok;
}

int run_command(const std::string& cmd, const Scenario& s, std::ostream& log) {
  try {
    if (cmd == "spectrum") return run_spectrum(s, log);
    if (cmd == "determinant-scan") return run_determinant_scan(s, log);
    if (cmd == "trace-check") return run_trace_check(s, log);
    if (cmd == "bounds-check") return run_bounds_check(s, log);
    if (cmd == "constants") return run_constants(s, log);
    if (cmd == "convergence") return run_convergence(s, log);
    throw Error(ErrorKind::Usage, "unknown command '" + cmd + "'");
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

} // namespace qtrace

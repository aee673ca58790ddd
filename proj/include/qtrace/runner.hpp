#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qtrace/scenario.hpp"

namespace qtrace {

// 0 pass, 2 check failure, 3 numerical degeneracy, 64 usage
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 2;
inline constexpr int exit_degenerate = 3;
inline constexpr int exit_usage = 64;

int exit_code_for(const Error& e);

EigMethod parse_method(const std::string& name);
EigenvalueSet spectrum_by(const Scenario& s, EigMethod m);

// random λ with Re λ ∈ [0, ω), Im λ ∈ [lo, hi]
std::vector<cplx> sample_lambdas(const Scenario& s, int n, double lo = 0.5, double hi = 2.0);

struct PipelineSample {
  cplx lambda;
  cplx D;         // direct 𝒟 on the scenario grid
  cplx psi;       // ψ on the scenario grid
  cplx psi_ref;   // ψ on the reference grid
  double same_grid = 0.0; // |ψ − 𝒟|/|𝒟|
  double error = 0.0;     // |ψ_ref − 𝒟|/|𝒟|
};

std::vector<PipelineSample> pipeline_samples(const Scenario& s, const std::vector<cplx>& lambdas);

struct TraceRun {
  EigenvalueSet eigs;
  BoundaryMeasure measure;
  BlaschkeProduct blaschke;
  TaylorCoeffs taylor;
  TraceReport report;
  bool condition_V = false;
  double derived_t2_tol = 0.0; // max(t2_1, 10·same-grid gap)
  double derived_trR_tol = 0.0;
  std::vector<std::string> failures;
};

// every trace identity on the scenario grid, with the armed checks evaluated
TraceRun trace_run(const Scenario& s, bool with_trR = true);

int run_spectrum(const Scenario& s, std::ostream& log);
int run_determinant_scan(const Scenario& s, std::ostream& log);
int run_trace_check(const Scenario& s, std::ostream& log);
int run_bounds_check(const Scenario& s, std::ostream& log);
int run_constants(const Scenario& s, std::ostream& log);
int run_convergence(const Scenario& s, std::ostream& log);

// dispatch by subcommand name; Errors are mapped to exit codes
int run_command(const std::string& cmd, const Scenario& s, std::ostream& log);

} // namespace qtrace

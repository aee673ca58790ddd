#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtrace/floquet.hpp"
#include "qtrace/trace.hpp"

namespace qtrace {

struct Tolerances {
  double pipeline = 1e-3;     // relative, direct 𝒟 at M against the converged disk avatar
  double periodicity = 1e-10;
  double same_grid = 1e-9;    // ψ against 𝒟 on one grid
  double three_way = 1e-5;
  double t1 = 1e-4;           // gamma_estimate floor
  double t2_1 = 1e-3;
  double t2_2 = 1e-2;
  double trR = 1e-3;
  double factorization = 1e-3;

  void scale(double f);
};

struct Scenario {
  int version = 1;
  std::string name = "default";
  LatticeBox box{{3, 3, 3}};
  double tau = 1.0;
  int M = 64;
  int N_t = 8;
  double p = 1.1;

  std::string potential_file; // empty: use the generator
  GeneratorSpec generator{1, 3.0, 0.0, 2.0 / 3.0};

  std::vector<std::string> methods{"floquet", "monodromy", "psi-zeros"};
  int psi_M = 1024;        // grid for the ψ-zero route
  int monodromy_steps = 4096;
  Integrator integrator = Integrator::RK4;

  CircleConfig circle;
  int n_max = 2;
  int trR_samples = 8;
  double trR_radius = 0.3;
  int lambda_samples = 3;  // random λ per pipeline check
  std::uint64_t lambda_seed = 7;
  int reference_M = 2048;  // grid of the converged reference

  Tolerances tol;
  std::string output_dir = "out";

  std::vector<int> sweep_M{32, 64, 128};
  std::vector<int> sweep_N_t{8};
  std::vector<std::vector<int>> sweep_sides{{3, 3, 3}};

  bool condition_V() const { return check_condition_V(p, box.d); }
  TimeGrid grid() const { return {tau, M}; }
};

// throws Error(Usage) with line diagnostics
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string emit_scenario(const Scenario& s);

// potential on the scenario box, sampled on M points (0 means the scenario M)
TimePeriodicPotential build_potential(const Scenario& s, int M = 0);

} // namespace qtrace

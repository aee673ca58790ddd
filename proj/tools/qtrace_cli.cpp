#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtrace/runner.hpp"

using namespace qtrace;

int main(int argc, char** argv) {
  CLI::App app{"Trace formulas and eigenvalues for time-periodic lattice Schrödinger operators"};
  app.require_subcommand(1, 1);

  std::string scenario_path, out_dir, methods;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  app.add_option("--scenario", scenario_path, "scenario file (YAML)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--methods", methods, "comma-separated list of floquet, monodromy, psi-zeros");
  app.add_option("--tol-scale", tol_scale, "multiply every tolerance")->check(CLI::PositiveNumber);

  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "strip eigenvalues by each method, matched against the first"},
      {"determinant-scan", "psi on a disk grid and the determinant pipeline check"},
      {"trace-check", "trace identities, Blaschke and boundary data"},
      {"bounds-check", "eigenvalue, resolvent and Hardy-space bounds"},
      {"constants", "closed-form constants and the g-function certificate"},
      {"convergence", "sweep over M, N_t and box sides"},
  };
  for (auto [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    Scenario s = scenario_path.empty() ? Scenario{} : load_scenario(scenario_path);
    if (!out_dir.empty()) s.output_dir = out_dir;
    if (app.count("--seed")) s.generator.seed = seed;
    if (!methods.empty()) {
      s.methods.clear();
      std::stringstream ss(methods);
      for (std::string m; std::getline(ss, m, ',');) {
        parse_method(m);
        s.methods.push_back(m);
      }
    }
    s.tol.scale(tol_scale);
    return run_command(app.get_subcommands().front()->get_name(), s, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

#include "qtrace/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace qtrace {

void Tolerances::scale(double f) {
  if (!(f > 0)) throw Error(ErrorKind::Usage, "tolerance scale must be positive");
  for (double* t : {&pipeline, &periodicity, &same_grid, &three_way, &t1, &t2_1, &t2_2, &trR, &factorization}) *t *= f;
}

namespace {

[[noreturn]] void fail_at(const YAML::Node& n, const std::string& msg) {
  const auto m = n.Mark();
  throw Error(ErrorKind::Usage,
              "scenario line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": " + msg);
}

void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
  if (!n.IsMap()) fail_at(n, where + " must be a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail_at(kv.first, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, T& out) {
  const YAML::Node n = parent[key];
  if (!n) return;
  try {
    out = n.as<T>();
  } catch (const YAML::Exception&) {
    fail_at(n, std::string("bad value for '") + key + "'");
  }
}

Boundary parse_boundary(const YAML::Node& n) {
  const auto s = n.as<std::string>();
  if (s == "periodic") return Boundary::Periodic;
  if (s == "dirichlet") return Boundary::Dirichlet;
  fail_at(n, "boundary must be periodic or dirichlet");
}

Integrator parse_integrator(const YAML::Node& n) {
  const auto s = n.as<std::string>();
  if (s == "rk4") return Integrator::RK4;
  if (s == "magnus2") return Integrator::Magnus2;
  fail_at(n, "integrator must be rk4 or magnus2");
}

const std::set<std::string> known_methods{"floquet", "monodromy", "psi-zeros"};

Scenario from_node(const YAML::Node& root) {
  Scenario s;
  check_keys(root, {"version", "name", "lattice", "time", "p", "potential", "methods", "spectra", "trace",
                    "tolerances", "output_dir", "convergence"},
             "scenario");
  if (!root["version"]) fail_at(root, "missing 'version'");
  read(root, "version", s.version);
  if (s.version != 1) fail_at(root["version"], "unsupported version " + std::to_string(s.version));
  read(root, "name", s.name);

  if (const auto lat = root["lattice"]) {
    check_keys(lat, {"d", "sides", "boundary"}, "lattice");
    int d = s.box.d;
    std::vector<int> sides = s.box.sides;
    Boundary b = s.box.boundary;
    read(lat, "d", d);
    read(lat, "sides", sides);
    if (lat["boundary"]) b = parse_boundary(lat["boundary"]);
    if (lat["sides"] && static_cast<int>(sides.size()) != d) fail_at(lat["sides"], "sides must have d entries");
    if (!lat["sides"] && static_cast<int>(sides.size()) != d) sides.assign(d, sides.empty() ? 3 : sides.front());
    try {
      s.box = LatticeBox(sides, b);
    } catch (const Error& e) {
      fail_at(lat, e.what());
    }
    s.sweep_sides = {s.box.sides};
  }
  if (const auto t = root["time"]) {
    check_keys(t, {"tau", "M", "N_t"}, "time");
    read(t, "tau", s.tau);
    read(t, "M", s.M);
    read(t, "N_t", s.N_t);
    if (!(s.tau > 0)) fail_at(t, "tau must be positive");
    if (s.M < 4) fail_at(t, "M must be at least 4");
    if (s.N_t < 1) fail_at(t, "N_t must be at least 1");
  }
  read(root, "p", s.p);
  if (!(s.p >= 1)) fail_at(root["p"], "p must be at least 1");

  if (const auto pot = root["potential"]) {
    check_keys(pot, {"generator", "file"}, "potential");
    if (pot["generator"] && pot["file"]) fail_at(pot, "give either generator or file");
    read(pot, "file", s.potential_file);
    if (const auto g = pot["generator"]) {
      check_keys(g, {"seed", "amplitude", "localization_radius", "imaginary_fraction"}, "generator");
      read(g, "seed", s.generator.seed);
      read(g, "amplitude", s.generator.amplitude);
      read(g, "localization_radius", s.generator.localization_radius);
      read(g, "imaginary_fraction", s.generator.imaginary_fraction);
      if (s.generator.imaginary_fraction < 0 || s.generator.imaginary_fraction > 1)
        fail_at(g, "imaginary_fraction must lie in [0, 1]");
    }
  }
  if (const auto m = root["methods"]) {
    read(root, "methods", s.methods);
    for (const auto& x : s.methods)
      if (!known_methods.count(x)) fail_at(m, "unknown method '" + x + "'");
  }
  if (const auto sp = root["spectra"]) {
    check_keys(sp, {"psi_M", "monodromy_steps", "integrator"}, "spectra");
    read(sp, "psi_M", s.psi_M);
    read(sp, "monodromy_steps", s.monodromy_steps);
    if (s.psi_M < 4) fail_at(sp, "psi_M must be at least 4");
    if (s.monodromy_steps < 16) fail_at(sp, "monodromy_steps must be at least 16");
    if (sp["integrator"]) s.integrator = parse_integrator(sp["integrator"]);
  }
  if (const auto tr = root["trace"]) {
    check_keys(tr, {"radii", "base_samples", "samples_per_gap", "n_max", "trR_samples", "trR_radius",
                    "lambda_samples", "lambda_seed", "reference_M"},
               "trace");
    read(tr, "radii", s.circle.radii);
    read(tr, "base_samples", s.circle.base_samples);
    read(tr, "samples_per_gap", s.circle.samples_per_gap);
    read(tr, "n_max", s.n_max);
    read(tr, "trR_samples", s.trR_samples);
    read(tr, "trR_radius", s.trR_radius);
    read(tr, "lambda_samples", s.lambda_samples);
    read(tr, "lambda_seed", s.lambda_seed);
    read(tr, "reference_M", s.reference_M);
    for (double r : s.circle.radii)
      if (!(r > 0 && r < 1)) fail_at(tr["radii"], "radii must lie in (0, 1)");
    if (s.n_max < 1 || s.n_max > 8) fail_at(tr, "n_max must lie in [1, 8]");
    s.circle.n_max = std::max(s.circle.n_max, s.n_max);
  }
  if (const auto tol = root["tolerances"]) {
    check_keys(tol, {"pipeline", "periodicity", "same_grid", "three_way", "t1", "t2_1", "t2_2", "trR", "factorization"},
               "tolerances");
    read(tol, "pipeline", s.tol.pipeline);
    read(tol, "periodicity", s.tol.periodicity);
    read(tol, "same_grid", s.tol.same_grid);
    read(tol, "three_way", s.tol.three_way);
    read(tol, "t1", s.tol.t1);
    read(tol, "t2_1", s.tol.t2_1);
    read(tol, "t2_2", s.tol.t2_2);
    read(tol, "trR", s.tol.trR);
    read(tol, "factorization", s.tol.factorization);
  }
  read(root, "output_dir", s.output_dir);
  if (const auto c = root["convergence"]) {
    check_keys(c, {"M", "N_t", "sides"}, "convergence");
    read(c, "M", s.sweep_M);
    read(c, "N_t", s.sweep_N_t);
    read(c, "sides", s.sweep_sides);
    for (const auto& sd : s.sweep_sides)
      if (static_cast<int>(sd.size()) != s.box.d) fail_at(c["sides"], "sweep sides must have d entries");
  }
  return s;
}

// shortest text that parses back to the same double
std::string num(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

} // namespace

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::Usage, "scenario line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root || root.IsNull()) throw Error(ErrorKind::Usage, "empty scenario");
  return from_node(root);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open scenario " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string emit_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << s.version;
  out << YAML::Key << "name" << YAML::Value << s.name;

  out << YAML::Key << "lattice" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "d" << YAML::Value << s.box.d;
  out << YAML::Key << "sides" << YAML::Value << YAML::Flow << s.box.sides;
  out << YAML::Key << "boundary" << YAML::Value
      << (s.box.boundary == Boundary::Periodic ? "periodic" : "dirichlet");
  out << YAML::EndMap;

  out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tau" << YAML::Value << num(s.tau);
  out << YAML::Key << "M" << YAML::Value << s.M;
  out << YAML::Key << "N_t" << YAML::Value << s.N_t;
  out << YAML::EndMap;

  out << YAML::Key << "p" << YAML::Value << num(s.p);

  out << YAML::Key << "potential" << YAML::Value << YAML::BeginMap;
  if (!s.potential_file.empty()) {
    out << YAML::Key << "file" << YAML::Value << s.potential_file;
  } else {
    out << YAML::Key << "generator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "seed" << YAML::Value << s.generator.seed;
    out << YAML::Key << "amplitude" << YAML::Value << num(s.generator.amplitude);
    out << YAML::Key << "localization_radius" << YAML::Value << num(s.generator.localization_radius);
    out << YAML::Key << "imaginary_fraction" << YAML::Value << num(s.generator.imaginary_fraction);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "methods" << YAML::Value << YAML::Flow << s.methods;

  out << YAML::Key << "spectra" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "psi_M" << YAML::Value << s.psi_M;
  out << YAML::Key << "monodromy_steps" << YAML::Value << s.monodromy_steps;
  out << YAML::Key << "integrator" << YAML::Value << (s.integrator == Integrator::RK4 ? "rk4" : "magnus2");
  out << YAML::EndMap;

  out << YAML::Key << "trace" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "radii" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double r : s.circle.radii) out << num(r);
  out << YAML::EndSeq;
  out << YAML::Key << "base_samples" << YAML::Value << s.circle.base_samples;
  out << YAML::Key << "samples_per_gap" << YAML::Value << num(s.circle.samples_per_gap);
  out << YAML::Key << "n_max" << YAML::Value << s.n_max;
  out << YAML::Key << "trR_samples" << YAML::Value << s.trR_samples;
  out << YAML::Key << "trR_radius" << YAML::Value << num(s.trR_radius);
  out << YAML::Key << "lambda_samples" << YAML::Value << s.lambda_samples;
  out << YAML::Key << "lambda_seed" << YAML::Value << s.lambda_seed;
  out << YAML::Key << "reference_M" << YAML::Value << s.reference_M;
  out << YAML::EndMap;

  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "pipeline" << YAML::Value << num(s.tol.pipeline);
  out << YAML::Key << "periodicity" << YAML::Value << num(s.tol.periodicity);
  out << YAML::Key << "same_grid" << YAML::Value << num(s.tol.same_grid);
  out << YAML::Key << "three_way" << YAML::Value << num(s.tol.three_way);
  out << YAML::Key << "t1" << YAML::Value << num(s.tol.t1);
  out << YAML::Key << "t2_1" << YAML::Value << num(s.tol.t2_1);
  out << YAML::Key << "t2_2" << YAML::Value << num(s.tol.t2_2);
  out << YAML::Key << "trR" << YAML::Value << num(s.tol.trR);
  out << YAML::Key << "factorization" << YAML::Value << num(s.tol.factorization);
  out << YAML::EndMap;

  out << YAML::Key << "output_dir" << YAML::Value << s.output_dir;

  out << YAML::Key << "convergence" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "M" << YAML::Value << YAML::Flow << s.sweep_M;
  out << YAML::Key << "N_t" << YAML::Value << YAML::Flow << s.sweep_N_t;
  out << YAML::Key << "sides" << YAML::Value << YAML::Flow << s.sweep_sides;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

TimePeriodicPotential build_potential(const Scenario& s, int M) {
  const TimeGrid grid(s.tau, M > 0 ? M : s.M);
  if (s.potential_file.empty()) return generate_potential(s.box, grid, s.generator);
  auto V = read_potential(s.potential_file);
  if (V.box.sides != s.box.sides || V.box.boundary != s.box.boundary)
    throw Error(ErrorKind::Usage, "potential file box does not match the scenario lattice");
  if (std::abs(V.grid.tau - s.tau) > 1e-12 * s.tau)
    throw Error(ErrorKind::Usage, "potential file period does not match the scenario tau");
  return V.grid.M == grid.M ? V : V.resampled(grid.M);
}

} // namespace qtrace

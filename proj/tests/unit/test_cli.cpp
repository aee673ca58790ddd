#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "qtrace/runner.hpp"

using namespace qtrace;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "qtrace_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(QTRACE_CLI) + " " + args + " > /dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_scenario(const fs::path& dir, const Scenario& s) {
  auto p = dir / "scenario.yaml";
  std::ofstream(p) << emit_scenario(s);
  return p.string();
}

Scenario small_scenario() {
  Scenario s;
  s.name = "small";
  s.box = LatticeBox({3, 3});
  s.M = 32;
  s.N_t = 6;
  s.psi_M = 256;
  s.monodromy_steps = 1024;
  s.circle.base_samples = 512;
  s.trR_samples = 2;
  s.lambda_samples = 1;
  s.reference_M = 512;
  s.sweep_sides = {s.box.sides};
  return s;
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("round trip is lossless") {
  Scenario s = small_scenario();
  s.p = 1.2345678901234567;
  s.generator.imaginary_fraction = 1.0 / 3.0;
  s.methods = {"psi-zeros", "floquet"};
  s.tol.scale(0.37);
  s.sweep_sides = {{3, 3}, {4, 4}};
  s.integrator = Integrator::Magnus2;
  const auto text = emit_scenario(s);
  Scenario t = parse_scenario(text);
  CHECK(emit_scenario(t) == text);
  CHECK(t.p == s.p);
  CHECK(t.generator.imaginary_fraction == s.generator.imaginary_fraction);
  CHECK(t.tol.trR == s.tol.trR);
  CHECK(t.box.sides == s.box.sides);
  CHECK(t.integrator == Integrator::Magnus2);
}

TEST_CASE("shipped scenario files parse") {
  const fs::path dir = fs::path(QTRACE_SOURCE_DIR) / "scenarios";
  CHECK(emit_scenario(load_scenario((dir / "default.yaml").string())) == emit_scenario(Scenario{}));
  Scenario s = load_scenario((dir / "small_2d.yaml").string());
  CHECK(s.box.d == 2);
  CHECK(s.psi_M == 2048);
}

TEST_CASE("defaults and partial files") {
  Scenario s = parse_scenario("version: 1\nlattice:\n  d: 2\n  sides: [4, 4]\n");
  CHECK(s.box.d == 2);
  CHECK(s.M == 64);
  CHECK(s.N_t == 8);
  CHECK_FALSE(s.condition_V());
  CHECK(parse_scenario("version: 1\n").condition_V());
}

TEST_CASE("malformed scenarios report the line") {
  auto expect_line = [](const std::string& text, int line) {
    try {
      parse_scenario(text);
      FAIL("expected a usage error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Usage);
      CHECK(std::string(e.what()).find("line " + std::to_string(line)) != std::string::npos);
    }
  };
  expect_line("version: 1\ntime:\n  tau: 1\n  M: abc\n", 4);
  expect_line("version: 1\nlattice:\n  d: 3\n  colour: red\n", 4);
  expect_line("version: 1\nlattice: [1, 2\n", 3);
  expect_line("version: 2\n", 1);
  expect_line("name: x\n", 1);
  expect_line("version: 1\nmethods: [floquet, magic]\n", 2);
  expect_line("version: 1\nlattice:\n  d: 3\n  sides: [3, 3]\n", 4);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(Error(ErrorKind::Usage, "")) == 64);
  CHECK(exit_code_for(Error(ErrorKind::FloquetResonance, "")) == 3);
  CHECK(exit_code_for(Error(ErrorKind::SingularF1, "")) == 3);
  CHECK(exit_code_for(Error(ErrorKind::NegativeGamma, "")) == 2);
  CHECK(exit_code_for(Error(ErrorKind::ConditionVViolated, "")) == 2);
}

}

TEST_SUITE("cli") {

TEST_CASE("zero potential: trace-check passes with a zero report") {
  auto dir = scratch("zero");
  Scenario s = small_scenario();
  s.generator.amplitude = 0.0;
  auto sc = write_scenario(dir, s);
  CHECK(run_cli("trace-check --scenario " + sc + " --out " + (dir / "out").string()) == 0);
  auto report = slurp(dir / "out" / "trace_report.json");
  CHECK(report.find("\"eigenvalues\": []") != std::string::npos);
  CHECK(report.find("\"passed\": true") != std::string::npos);
  CHECK(run_cli("spectrum --scenario " + sc + " --out " + (dir / "out").string()) == 0);
  CHECK(slurp(dir / "out" / "eigenvalues.csv") == "method,re_lambda,im_lambda,mult,re_z,im_z\n");
}

TEST_CASE("spectrum output is deterministic and lists every method") {
  auto dir = scratch("det");
  Scenario s = small_scenario();
  auto sc = write_scenario(dir, s);
  const std::string a = (dir / "a").string(), b = (dir / "b").string();
  CHECK(run_cli("spectrum --scenario " + sc + " --out " + a + " --tol-scale 100") == 0);
  CHECK(run_cli("spectrum --scenario " + sc + " --out " + b + " --tol-scale 100") == 0);
  CHECK(slurp(fs::path(a) / "eigenvalues.json") == slurp(fs::path(b) / "eigenvalues.json"));
  CHECK(slurp(fs::path(a) / "eigenvalues.csv") == slurp(fs::path(b) / "eigenvalues.csv"));
  auto matching = slurp(fs::path(a) / "matching.csv");
  CHECK(std::count(matching.begin(), matching.end(), '\n') == 1 + 3);
  CHECK(run_cli("spectrum --scenario " + sc + " --out " + a + " --methods floquet,psi-zeros --tol-scale 100") == 0);
  matching = slurp(fs::path(a) / "matching.csv");
  CHECK(std::count(matching.begin(), matching.end(), '\n') == 1 + 2);
  // a different seed changes the output
  CHECK(run_cli("spectrum --scenario " + sc + " --out " + b + " --seed 99 --tol-scale 100") == 0);
  CHECK(slurp(fs::path(a) / "eigenvalues.csv") != slurp(fs::path(b) / "eigenvalues.csv"));
}

TEST_CASE("usage errors") {
  auto dir = scratch("usage");
  std::ofstream(dir / "bad.yaml") << "version: 1\ntime:\n  M: [1\n";
  CHECK(run_cli("trace-check --scenario " + (dir / "bad.yaml").string()) == 64);
  CHECK(run_cli("no-such-command") == 64);
  CHECK(run_cli("spectrum --methods floquet,nope --out " + dir.string()) == 64);
  CHECK(run_cli("spectrum --scenario /nonexistent.yaml") == 64);
  CHECK(run_cli("constants --tol-scale -1") == 64);
}

TEST_CASE("constants and bounds commands") {
  auto dir = scratch("const");
  Scenario s = small_scenario();
  s.box = LatticeBox({3, 3, 3});
  s.sweep_sides = {s.box.sides};
  s.M = 16;
  auto sc = write_scenario(dir, s);
  CHECK(run_cli("constants --scenario " + sc + " --out " + dir.string()) == 0);
  CHECK(slurp(dir / "constants.json").find("\"C_bullet\"") != std::string::npos);
  CHECK(run_cli("bounds-check --scenario " + sc + " --out " + dir.string()) == 0);
  // condition V fails in two dimensions
  Scenario bad = s;
  bad.box = LatticeBox({3, 3});
  bad.sweep_sides = {bad.box.sides};
  auto sc2 = (dir / "bad.yaml").string();
  std::ofstream(sc2) << emit_scenario(bad);
  CHECK(run_cli("constants --scenario " + sc2 + " --out " + dir.string()) == 2);
}

TEST_CASE("single-point convergence sweep reproduces the trace check") {
  auto dir = scratch("conv");
  Scenario s = small_scenario();
  s.sweep_M = {s.M};
  s.sweep_N_t = {s.N_t};
  s.sweep_sides = {s.box.sides};
  auto sc = write_scenario(dir, s);
  CHECK(run_cli("convergence --scenario " + sc + " --out " + dir.string()) == 0);
  auto tr = trace_run(s, false);
  std::ifstream in(dir / "convergence.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::vector<std::string> f;
  std::stringstream ss(row);
  for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
  REQUIRE(f.size() == 12);
  CHECK(std::stod(f[7]) == doctest::Approx(tr.report.t1.residual).epsilon(1e-12));
  CHECK(std::stod(f[8]) == doctest::Approx(tr.report.t2.front().residual).epsilon(1e-12));
}

}

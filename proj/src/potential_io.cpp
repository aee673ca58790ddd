#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtrace/potential.hpp"

namespace qtrace {

namespace {

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Boundary parse_boundary(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "dirichlet") return Boundary::Dirichlet;
  throw Error(ErrorKind::Usage, "unknown boundary '" + s + "'");
}

const char* boundary_name(Boundary b) { return b == Boundary::Periodic ? "periodic" : "dirichlet"; }

void fill(TimePeriodicPotential& V, long k, long x, double re, double im, const std::string& where) {
  if (k < 0 || k >= V.grid.M || x < 0 || x >= V.sites())
    throw Error(ErrorKind::Usage, where + ": row index out of range");
  V.values(k, x) = {re, im};
}

TimePeriodicPotential read_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Usage, std::string("potential json: ") + e.what());
  }
  auto sides = j.at("sides").get<std::vector<int>>();
  if (j.at("d").get<int>() != int(sides.size())) throw Error(ErrorKind::Usage, "potential json: d != len(sides)");
  LatticeBox box(sides, parse_boundary(j.value("boundary", std::string("periodic"))));
  TimePeriodicPotential V(box, TimeGrid(j.at("tau").get<double>(), j.at("M").get<int>()));
  for (const auto& r : j.at("rows"))
    fill(V, r.at(0).get<long>(), r.at(1).get<long>(), r.at(2).get<double>(), r.at(3).get<double>(), "potential json");
  return V;
}

TimePeriodicPotential read_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (!out.empty() && out[0] != '#') return true;
    }
    return false;
  };
  auto bad = [&](const std::string& m) { return Error(ErrorKind::Usage, "potential csv line " + std::to_string(lineno) + ": " + m); };
  if (!next(line) || line.rfind("d,sides,tau,M", 0) != 0) throw bad("expected header 'd,sides,tau,M[,boundary]'");
  if (!next(line)) throw bad("missing header values");
  std::vector<std::string> f;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) f.push_back(c);
  }
  if (f.size() < 4) throw bad("header needs d,sides,tau,M");
  std::vector<int> sides;
  {
    std::stringstream ss(f[1]);
    std::string c;
    while (std::getline(ss, c, 'x')) sides.push_back(std::stoi(c));
  }
  if (std::stoi(f[0]) != int(sides.size())) throw bad("d != number of sides");
  LatticeBox box(sides, f.size() > 4 ? parse_boundary(f[4]) : Boundary::Periodic);
  TimePeriodicPotential V(box, TimeGrid(std::stod(f[2]), std::stoi(f[3])));
  if (!next(line) || line.rfind("k,site_index,re,im", 0) != 0) throw bad("expected row header 'k,site_index,re,im'");
  while (next(line)) {
    long k, x;
    double re, im;
    if (std::sscanf(line.c_str(), "%ld,%ld,%lf,%lf", &k, &x, &re, &im) != 4) throw bad("malformed row");
    fill(V, k, x, re, im, "potential csv line " + std::to_string(lineno));
  }
  return V;
}

} // namespace

TimePeriodicPotential read_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open potential file " + path);
  return ends_with(path, ".json") ? read_json(in) : read_csv(in);
}

void write_potential(const TimePeriodicPotential& V, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (ends_with(path, ".json")) {
    nlohmann::ordered_json j;
    j["d"] = V.box.d;
    j["sides"] = V.box.sides;
    j["boundary"] = boundary_name(V.box.boundary);
    j["tau"] = V.grid.tau;
    j["M"] = V.grid.M;
    j["rows"] = nlohmann::ordered_json::array();
    for (int k = 0; k < V.grid.M; ++k)
      for (int x = 0; x < V.sites(); ++x)
        if (V.values(k, x) != 0.0) j["rows"].push_back({k, x, V.values(k, x).real(), V.values(k, x).imag()});
    out << j.dump(1) << "\n";
    return;
  }
  out << "d,sides,tau,M,boundary\n" << V.box.d << ",";
  for (int j = 0; j < V.box.d; ++j) out << (j ? "x" : "") << V.box.sides[j];
  out << "," << fmt17(V.grid.tau) << "," << V.grid.M << "," << boundary_name(V.box.boundary) << "\n";
  out << "k,site_index,re,im\n";
  for (int k = 0; k < V.grid.M; ++k)
    for (int x = 0; x < V.sites(); ++x)
      if (V.values(k, x) != 0.0)
        out << k << "," << x << "," << fmt17(V.values(k, x).real()) << "," << fmt17(V.values(k, x).imag()) << "\n";
}

} // namespace qtrace

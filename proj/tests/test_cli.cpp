#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "sphlaw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sphlaw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(SPHLAW_TEST_TMP) + "/" + name; }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::vector<double> line_values(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) != 0) continue;
    std::istringstream vs(line.substr(key.size() + 1));
    std::vector<double> v;
    double d;
    while (vs >> d) v.push_back(d);
    return v;
  }
  return {};
}

std::vector<double> csv_column(const std::string& text, int col) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> v;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    for (int c = 0; c <= col; ++c) std::getline(ls, cell, ',');
    v.push_back(std::stod(cell));
  }
  return v;
}

}  // namespace

TEST_CASE("triangle solve: right-angled triangle") {
  const Result r = run({"triangle", "solve", "--angles", "1.5707963,1.5707963,1.5707963"});
  CHECK(r.code == 0);
  const auto sides = line_values(r.out, "sides");
  REQUIRE(sides.size() == 3);
  for (double s : sides) CHECK(s == doctest::Approx(std::numbers::pi / 2).epsilon(1e-6));
  CHECK(line_values(r.out, "sine_law_residual")[0] <= 1e-12);
}

TEST_CASE("triangle solve: degrees and sides") {
  const Result r = run({"triangle", "solve", "--sides", "90,90,90", "--degrees"});
  CHECK(r.code == 0);
  for (double a : line_values(r.out, "angles")) CHECK(a == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("triangle solve: usage errors") {
  CHECK(run({"triangle", "solve"}).code == 2);
  CHECK(run({"triangle", "solve", "--angles", "1,1"}).code == 2);
  CHECK(run({"triangle", "solve", "--angles", "0.1,0.1,0.1"}).code == 2);  // sum below pi
  CHECK(run({"triangle", "solve", "--angles", "2,2,2", "--sides", "1,1,1"}).code == 2);
}

TEST_CASE("triangle orbit: closed-form HK orbit") {
  const Result r = run({"triangle", "orbit", "--x", "-0.5,-0.5,-0.5", "--map", "hk", "--steps", "3"});
  CHECK(r.code == 0);
  const auto x1 = csv_column(r.out, 1);
  REQUIRE(x1.size() == 4);
  const double expect[] = {-0.5, -0.25, -1.0 / 6, -0.125};
  for (int n = 0; n < 4; ++n) CHECK(std::abs(x1[n] - expect[n]) <= 1e-15);
  CHECK(r.out.rfind("step,x1,x2,x3,E12_inv,E13_inv,E23_inv,outside_tau", 0) == 0);
}

TEST_CASE("triangle orbit: early stop is reported, not an error") {
  const Result r = run({"triangle", "orbit", "--x", "0.9,0.9,0.9", "--map", "phi", "--steps", "5"});
  CHECK(r.code == 0);
  CHECK(r.err.find("orbit stopped after step") != std::string::npos);
}

TEST_CASE("triangle orbit: config file, command line wins, unknown keys") {
  const std::string cfg = tmp("orbit.json");
  write(cfg, R"({"x": [-0.5, -0.5, -0.5], "map": "hk", "steps": 2})");
  const Result a = run({"triangle", "orbit", "--config", cfg});
  CHECK(a.code == 0);
  CHECK(csv_column(a.out, 1).size() == 3);
  const Result b = run({"triangle", "orbit", "--config", cfg, "--steps", "4"});
  CHECK(b.code == 0);
  CHECK(csv_column(b.out, 1).size() == 5);

  write(cfg, R"({"x": [-0.5, -0.5, -0.5], "colour": "red"})");
  const Result c = run({"triangle", "orbit", "--config", cfg});
  CHECK(c.code == 2);
  CHECK(c.err.find("colour") != std::string::npos);
  CHECK(run({"triangle", "orbit", "--config", tmp("missing.json")}).code == 2);
}

TEST_CASE("tetra solve and orbit") {
  const Result s = run({"tetra", "solve", "--dihedral", "90,90,90,90,90,90", "--degrees"});
  CHECK(s.code == 0);
  for (double e : line_values(s.out, "edges")) CHECK(e == doctest::Approx(std::numbers::pi / 2));
  const Result o = run({"tetra", "orbit", "--x", "-0.5,-0.5,-0.5,-0.5,-0.5,-0.5", "--steps", "2"});
  CHECK(o.code == 0);
  const auto c = csv_column(o.out, 1);
  REQUIRE(c.size() == 3);
  CHECK(c[1] == doctest::Approx(-0.25));
  CHECK(c[2] == doctest::Approx(-1.0 / 6));
  CHECK(run({"tetra", "solve", "--dihedral", "1,1,1"}).code == 2);
}

TEST_CASE("lattice evolve") {
  const std::string init = tmp("boundary.json");
  const std::string field = tmp("field.json");
  write(init, R"({"extent":[1,1,1],"planes":{"xy":[[-0.5]],"xz":[[-0.5]],"yz":[[-0.5]]}})");
  const Result r = run({"lattice", "evolve", "--init", init, "--out", field});
  CHECK(r.code == 0);
  std::ifstream in(field);
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["interior"]["x12"][0][0][1].get<double>() == doctest::Approx(-1.0 / 3));

  // runtime domain failure: exit 1 with the failing corner
  write(init, R"({"extent":[2,1,1],"planes":{"xy":[[0.9],[0.9]],"xz":[[0.9],[0.9]],"yz":[[0.9]]}})");
  const Result bad = run({"lattice", "evolve", "--init", init, "--out", field, "--serial"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("lattice evolve failed") != std::string::npos);

  write(init, R"({"extent":[1,1,1],"oops":0,"planes":{"xy":[[0]],"xz":[[0]],"yz":[[0]]}})");
  CHECK(run({"lattice", "evolve", "--init", init}).code != 0);
}

TEST_CASE("verify list and a subset run") {
  const Result l = run({"verify", "list"});
  CHECK(l.code == 0);
  CHECK(l.out.find("triangle.hk_square\t") != std::string::npos);

  const std::string report = tmp("report.json");
  const Result v = run({"verify", "all", "--samples", "50", "--suite", "gram.round_trip,tetra.ggs", "--out", report});
  CHECK(v.code == 0);
  CHECK(v.out.find("PASS gram.round_trip") != std::string::npos);
  CHECK(v.out.find("verify: 2/2 suites passed") != std::string::npos);
  std::ifstream in(report);
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["passed"] == true);
  CHECK(doc["suites"].size() == 2);

  CHECK(run({"verify", "all", "--suite", "nope"}).code == 2);
  CHECK(run({"verify", "all", "--samples", "0"}).code == 2);
}

TEST_CASE("limit") {
  const Result r = run({"limit", "--map", "phi_eps", "--x0", "0.3,-0.2,0.1", "--eps-list", "1e-2,5e-3,2.5e-3"});
  CHECK(r.code == 0);
  CHECK(line_values(r.out, "slope")[0] >= 1.9);
  const Result p = run({"limit", "--map", "psi", "--x0", "0.3,-0.2,0.1,0.25,-0.15,0.05"});
  CHECK(p.code == 0);
  CHECK(run({"limit", "--map", "psi", "--x0", "0.3,0.2"}).code == 2);
}

TEST_CASE("top-level usage") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

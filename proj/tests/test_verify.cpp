#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sphlaw/errors.hpp"
#include "sphlaw/verify.hpp"

using namespace sphlaw;
using namespace sphlaw::verify;

namespace {

struct Row {
  std::string name, tolerance, property;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" `");
  const auto e = s.find_last_not_of(" `");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Table rows "| `name` | tol | property |" between the manifest markers.
std::vector<Row> readme_manifest() {
  std::ifstream in(std::string(SPHLAW_SOURCE_DIR) + "/README.md");
  REQUIRE(in.good());
  std::vector<Row> rows;
  std::string line;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line.find("<!-- suite-manifest:begin -->") != std::string::npos) inside = true;
    else if (line.find("<!-- suite-manifest:end -->") != std::string::npos) inside = false;
    else if (inside && line.rfind("| `", 0) == 0) {
      std::vector<std::string> cells;
      std::stringstream ss(line.substr(1));
      std::string cell;
      while (std::getline(ss, cell, '|')) cells.push_back(trim(cell));
      REQUIRE(cells.size() >= 3);
      rows.push_back({cells[0], cells[1], cells[2]});
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("manifest names are unique and well formed") {
  std::set<std::string> seen;
  for (const SuiteInfo& s : manifest()) {
    CHECK(seen.insert(s.name).second);
    CHECK(s.name.find('.') != std::string::npos);
    CHECK_FALSE(s.module.empty());
    CHECK_FALSE(s.property.empty());
    CHECK(s.tolerance >= 0.0);
  }
  CHECK(manifest().size() >= 40);
}

TEST_CASE("README manifest matches the code") {
  const auto rows = readme_manifest();
  REQUIRE(rows.size() == manifest().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SuiteInfo& s = manifest()[i];
    CHECK(rows[i].name == s.name);
    CHECK(rows[i].property == s.property);
    CHECK(std::strtod(rows[i].tolerance.c_str(), nullptr) == s.tolerance);
  }
}

TEST_CASE("unknown suite") { CHECK_THROWS_AS(run_suite("no.such", RunOptions{}), DomainError); }

TEST_CASE("battery passes at reduced sample count and is deterministic") {
  RunOptions opt;
  opt.samples = 100;
  const BatteryResult a = run_all(opt);
  CHECK(a.passed);
  REQUIRE(a.reports.size() == manifest().size());
  for (const auto& r : a.reports) {
    INFO(r.name);
    CHECK(r.passed);
  }
  opt.parallel = false;
  const BatteryResult b = run_all(opt);
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    INFO(a.reports[i].name);
    CHECK(a.reports[i].max_residual == b.reports[i].max_residual);
    CHECK(a.reports[i].samples == b.reports[i].samples);
  }
  const auto j = to_json(a, opt);
  CHECK(j["suites"].size() == manifest().size());
  CHECK(j["seed"] == 42);
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sphlaw/numutil.hpp"

namespace sphlaw::verify {

/// One named property suite of the verification battery.
struct SuiteInfo {
  std::string name;      // "<module>.<property>"
  std::string module;
  std::string property;  // one-line statement of what is checked
  double tolerance;      // bound on the reported residual
};

/// Every suite, in execution order. The README embeds the same list.
const std::vector<SuiteInfo>& manifest();

struct RunOptions {
  std::uint64_t seed = 42;
  int samples = 1000;  // per-suite sample budget; some suites cap or scale it
  bool parallel = true;
};

/// Runs one suite by name. Throws DomainError for an unknown name.
num::Report run_suite(const std::string& name, const RunOptions& opt);

struct BatteryResult {
  std::vector<num::Report> reports;  // manifest order
  bool passed = true;
  double seconds = 0.0;
};

BatteryResult run_all(const RunOptions& opt);

/// {"seed", "samples", "passed", "seconds", "suites": [report...]}.
nlohmann::ordered_json to_json(const BatteryResult& r, const RunOptions& opt);

}  // namespace sphlaw::verify

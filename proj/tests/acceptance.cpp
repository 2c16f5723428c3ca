// Acceptance criteria, one PASS/FAIL line each. Tolerances and time limits
// are pinned here independently of the suite manifest so that loosening a
// suite tolerance cannot silently pass a criterion.

#include <chrono>
#include <exception>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sphlaw/verify.hpp"

using sphlaw::num::Report;
using sphlaw::verify::RunOptions;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr int kSamples = 1000;

struct Check {
  std::string suite;
  double tol;  // bound on max_residual
};

struct SlopeCheck {
  std::string suite;
  double min_slope;
};

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    ok = false;
    detail << " [" << why << "]";
  }
};

Report run(const std::string& name, double& seconds) {
  RunOptions opt;
  opt.seed = kSeed;
  opt.samples = kSamples;
  const auto t0 = std::chrono::steady_clock::now();
  Report r = sphlaw::verify::run_suite(name, opt);
  seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void apply(Outcome& o, const Check& c, double& seconds) {
  const Report r = run(c.suite, seconds);
  o.detail << ' ' << c.suite << '=' << std::setprecision(3) << r.max_residual;
  if (!(r.max_residual <= c.tol)) o.fail(c.suite + " above " + std::to_string(c.tol));
  if (!r.failures.empty() && r.failures.front().message.size() > 0) o.fail(c.suite + ": " + r.failures.front().message);
  if (r.samples == 0) o.fail(c.suite + " ran no samples");
}

void apply(Outcome& o, const SlopeCheck& c, double& seconds) {
  const Report r = run(c.suite, seconds);
  const auto it = r.observed.find("min_slope");
  const double slope = it == r.observed.end() ? 0.0 : it->second;
  o.detail << ' ' << c.suite << " slope=" << std::setprecision(3) << slope;
  if (!(slope >= c.min_slope)) o.fail(c.suite + " slope below " + std::to_string(c.min_slope));
}

void require_full_orbits(Outcome& o, const std::string& suite, double& seconds) {
  const Report r = run(suite, seconds);
  const auto it = r.observed.find("full_length_orbits");
  const double full = it == r.observed.end() ? 0.0 : it->second;
  o.detail << ' ' << suite << " full_orbits=" << full;
  if (!(full >= 1.0)) o.fail(suite + " has no 1000-step orbit");
}

struct Criterion {
  int id;
  std::string title;
  std::vector<Check> checks;
  std::vector<SlopeCheck> slopes;
  std::vector<std::string> full_orbits;
  double time_limit = 0.0;  // seconds; 0 = none
  bool battery = false;     // also run the whole battery under a 60 s limit
};

void run_battery(Outcome& o) {
  RunOptions opt;
  opt.seed = kSeed;
  opt.samples = kSamples;
  const auto b = sphlaw::verify::run_all(opt);
  o.detail << " verify_all=" << (b.passed ? "pass" : "fail") << " time=" << std::setprecision(3) << b.seconds << "s";
  if (!b.passed) o.fail("verify all has failing suites");
  if (!(b.seconds < 60.0)) o.fail("verify all slower than 60 s");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "dual-path equality", {{"triangle.dual_path", 1e-13}, {"tetra.dual_path", 1e-13}}, {}, {}, 1.0},
      {2, "round trip", {{"triangle.round_trip", 1e-10}, {"tetra.round_trip", 1e-10}, {"gram.round_trip", 1e-10}}},
      {3,
       "phi integrals, volume form, Jacobian",
       {{"triangle.orbit_integrals", 1e-10}, {"triangle.volume_form", 1e-11}, {"triangle.jacobian_fd", 1e-6}},
       {},
       {"triangle.orbit_integrals"}},
      {4,
       "phi squared is the HK map",
       {{"triangle.hk_square", 1e-12}, {"triangle.hk_implicit", 1e-12}, {"triangle.symmetric_orbits", 1e-14}}},
      {5, "switch algebra and Jonas involution", {{"triangle.switch_algebra", 1e-12}}},
      {6, "Poisson structure", {{"triangle.jacobi", 1e-13}, {"triangle.poisson_map", 1e-10}}},
      {7,
       "4D consistency",
       {{"darboux.consistency", 1e-10}, {"darboux.matches_psi", 1e-10}, {"tetra.two_stage", 1e-10}},
       {},
       {},
       5.0},
      {8,
       "psi integrals and identities",
       {{"tetra.orbit_integrals", 1e-10},
        {"tetra.jacobian_det", 1e-9},
        {"tetra.volume_form", 1e-9},
        {"tetra.ggs", 1e-10},
        {"tetra.sine_law", 1e-10}},
       {},
       {"tetra.orbit_integrals"}},
      {9, "Schlafli symmetry", {{"tetra.schlafli", 1e-8}}},
      {10,
       "continuum limits",
       {{"euler.pushforward", 1e-13}, {"euler.rk4_integrals", 1e-10}},
       {{"euler.limit_phi", 1.9}, {"tetra.continuum_limit", 1.9}}},
      {11, "lattice and battery runtime", {{"lattice.evolve", 1e-12}, {"lattice.general_reduction", 1e-14}}, {}, {}, 0.0, true},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    double seconds = 0.0;
    try {
      for (const Check& k : c.checks) apply(o, k, seconds);
      for (const SlopeCheck& k : c.slopes) apply(o, k, seconds);
      double extra = 0.0;  // orbit-length reruns are not part of the timed work
      for (const std::string& s : c.full_orbits) require_full_orbits(o, s, extra);
      if (c.battery) run_battery(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (c.time_limit > 0.0) {
      o.detail << " time=" << std::setprecision(3) << seconds << "s";
      if (!(seconds < c.time_limit)) o.fail("slower than " + std::to_string(c.time_limit) + " s");
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " |" << o.detail.str()
              << '\n';
  }

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}

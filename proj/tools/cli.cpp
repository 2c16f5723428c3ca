#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphlaw/errors.hpp"
#include "sphlaw/euler_flow.hpp"
#include "sphlaw/gram.hpp"
#include "sphlaw/lattice.hpp"
#include "sphlaw/numutil.hpp"
#include "sphlaw/tetra.hpp"
#include "sphlaw/triangle.hpp"
#include "sphlaw/verify.hpp"

namespace sphlaw::cli {
namespace {

// Invalid command-line or config input; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerances for the checks the single-shot commands run on their own output.
constexpr double kTriangleSineTol = 1e-12;
constexpr double kTetraCheckTol = 1e-10;
constexpr double kLatticeTol = 1e-12;
constexpr double kLimitSlope = 1.9;
constexpr int kOrbitStepCap = 100'000'000;

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

template <class Range>
std::string join(const Range& r, const char* sep = " ") {
  std::string out;
  bool first = true;
  for (double v : r) {
    if (!first) out += sep;
    out += fmt(v);
    first = false;
  }
  return out;
}

// ------------------------------------------------------------------ config

std::string config_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw UsageError("config key '" + key + "' must hold a string, number, boolean or array of them");
}

// Fills every option of `sub` that was not given on the command line from the
// JSON object in `path`. Keys mirror the long flag names without dashes.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file " + path + " must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("unknown config key '" + key + "' for '" + sub->get_name() + "'");
    if (opt->count() > 0) continue;  // the command line wins
    std::vector<std::string> vals;
    if (value.is_array()) {
      for (const auto& e : value) vals.push_back(config_scalar(e, key));
    } else {
      vals.push_back(config_scalar(value, key));
    }
    if (opt->get_expected_min() == 0) {
      if (vals.size() != 1 || (vals[0] != "true" && vals[0] != "false"))
        throw UsageError("config key '" + key + "' must be true or false");
      if (vals[0] == "false") continue;
    }
    for (const auto& v : vals) opt->add_result(v);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

CLI::App* leaf(CLI::App& parent, const std::string& name, const std::string& help, std::string& config) {
  CLI::App* sub = parent.add_subcommand(name, help);
  sub->add_option("--config", config, "JSON file with option values (command-line flags win)");
  return sub;
}

void check_count(const std::vector<double>& v, std::size_t n, const char* flag) {
  if (v.size() != n) throw UsageError(std::string(flag) + " expects " + std::to_string(n) + " comma-separated values");
}

// ---------------------------------------------------------------- triangle

struct TriangleSolve {
  std::vector<double> angles, sides;
  bool degrees = false;
  std::string config;
};

int triangle_solve(const TriangleSolve& a, std::ostream& out) {
  if (a.angles.empty() == a.sides.empty()) throw UsageError("give exactly one of --angles and --sides");
  const bool from_angles = !a.angles.empty();
  std::vector<double> in = from_angles ? a.angles : a.sides;
  check_count(in, 3, from_angles ? "--angles" : "--sides");
  const double scale = a.degrees ? std::numbers::pi / 180.0 : 1.0;
  CosTriple c;
  for (int i = 0; i < 3; ++i) {
    const double v = in[i] * scale;
    if (!(v > 0.0 && v < std::numbers::pi)) throw UsageError("angles and sides must lie in (0, pi)");
    c[i] = std::cos(v);
  }
  CosTriple x, y;
  if (from_angles) {
    if (!triangle::in_tau(c)) throw UsageError("the angles do not form a spherical triangle");
    x = c;
    y = triangle::phi(x);
  } else {
    if (!triangle::in_tau_star(c)) throw UsageError("the sides do not form a spherical triangle");
    y = c;
    x = triangle::phi_inv(y);
  }
  std::array<double, 3> alpha{}, ell{}, ratio{};
  for (int i = 0; i < 3; ++i) {
    alpha[i] = std::acos(x[i]);
    ell[i] = std::acos(y[i]);
    ratio[i] = std::sin(ell[i]) / std::sin(alpha[i]);
  }
  const double res = triangle::sine_law_residual(x);
  out << "angles " << join(alpha) << '\n'
      << "sides " << join(ell) << '\n'
      << "cos_angles " << join(x) << '\n'
      << "cos_sides " << join(y) << '\n'
      << "d " << fmt(triangle::gram_det(x)) << '\n'
      << "d_dual " << fmt(triangle::gram_det_dual(y)) << '\n'
      << "sine_ratio " << join(ratio) << '\n'
      << "sine_law_residual " << fmt(res) << '\n';
  return res <= kTriangleSineTol ? kExitOk : kExitCheckFailed;
}

struct Orbit {
  std::vector<double> x;
  std::string map = "phi";
  int steps = 100;
  std::string out_path;
  std::string config;
};

// Opens --out if given; otherwise writes to the command's output stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw UsageError("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int triangle_orbit(const Orbit& a, std::ostream& out, std::ostream& err) {
  check_count(a.x, 3, "--x");
  CosTriple x{a.x[0], a.x[1], a.x[2]};
  if (max_abs(x) >= 1.0) throw UsageError("--x entries must lie in (-1, 1)");
  Sink sink(a.out_path, out);
  std::ostream& csv = sink.get();
  csv << std::setprecision(17) << "step,x1,x2,x3,E12_inv,E13_inv,E23_inv,outside_tau\n";
  const auto row = [&](int n, const CosTriple& v) {
    const auto E = triangle::invariants(v).E;
    csv << n << ',' << join(v, ",") << ',' << join(E, ",") << ',' << (triangle::in_tau(v) ? 0 : 1) << '\n';
  };
  row(0, x);
  for (int n = 1; n <= a.steps; ++n) {
    CosTriple next;
    try {
      if (a.map == "phi") next = triangle::phi(x);
      else if (a.map == "hk") next = triangle::hk_step(x);
      else next = triangle::transform(triangle::Transform::jonas, x);
    } catch (const Error& e) {
      err << "orbit stopped after step " << n - 1 << ": " << e.what() << '\n';
      return kExitOk;
    }
    if (!(max_abs(next) < 1.0)) {
      err << "orbit stopped after step " << n - 1 << ": next point has |x_i| >= 1\n";
      return kExitOk;
    }
    x = next;
    row(n, x);
  }
  return kExitOk;
}

// ------------------------------------------------------------------- tetra

struct TetraSolve {
  std::vector<double> dihedral;
  bool degrees = false;
  std::string config;
};

int tetra_solve(const TetraSolve& a, std::ostream& out) {
  check_count(a.dihedral, 6, "--dihedral");
  const double scale = a.degrees ? std::numbers::pi / 180.0 : 1.0;
  CosSextuple x;
  for (int p = 0; p < 6; ++p) {
    const double v = a.dihedral[p] * scale;
    if (!(v > 0.0 && v < std::numbers::pi)) throw UsageError("dihedral angles must lie in (0, pi)");
    x[p] = std::cos(v);
  }
  if (!tetra::is_admissible(x)) throw UsageError("the dihedral angles do not form a spherical tetrahedron");
  const CosSextuple y = tetra::psi(x);
  std::array<double, 6> alpha{}, ell{};
  for (int p = 0; p < 6; ++p) {
    alpha[p] = std::acos(x[p]);
    ell[p] = std::acos(y[p]);
  }
  const tetra::SineLawResiduals s = tetra::sine_law_residuals(x, y);
  const tetra::TwoStageResult two = tetra::two_stage_solve(x);
  const double two_gap = std::max(two.discrepancy, max_abs_diff(two.values, y));
  out << "# pair order 12 13 23 14 24 34\n"
      << "dihedral " << join(alpha) << '\n'
      << "edges " << join(ell) << '\n'
      << "cos_dihedral " << join(x) << '\n'
      << "cos_edges " << join(y) << '\n'
      << "d " << fmt(cofactors(gram_from_cosines(GramKind::angles, x.span())).det) << '\n'
      << "d_dual " << fmt(cofactors(gram_from_cosines(GramKind::lengths, y.span())).det) << '\n'
      << "sine_ratio " << fmt(s.ratio) << '\n'
      << "sine_law_residual " << fmt(std::max(s.products, s.cross)) << '\n'
      << "two_stage_discrepancy " << fmt(two_gap) << '\n';
  return std::max({s.products, s.cross, two_gap}) <= kTetraCheckTol ? kExitOk : kExitCheckFailed;
}

int tetra_orbit(const Orbit& a, std::ostream& out, std::ostream& err) {
  check_count(a.x, 6, "--x");
  CosSextuple x;
  std::copy(a.x.begin(), a.x.end(), x.begin());
  if (!tetra::is_admissible(x)) throw UsageError("--x is not an admissible set of dihedral cosines");
  Sink sink(a.out_path, out);
  std::ostream& csv = sink.get();
  csv << std::setprecision(17) << "step,x12,x13,x23,x14,x24,x34,r1_inv,r2_inv,s1_inv,s2_inv\n";
  const auto row = [&](int n, const CosSextuple& v) {
    csv << n << ',' << join(v, ",") << ',' << join(tetra::tetra_invariants(v).as_array(), ",") << '\n';
  };
  row(0, x);
  for (int n = 1; n <= a.steps; ++n) {
    try {
      x = tetra::psi(x);
    } catch (const Error& e) {
      err << "orbit stopped after step " << n - 1 << ": " << e.what() << '\n';
      return kExitOk;
    }
    row(n, x);
  }
  return kExitOk;
}

// ----------------------------------------------------------------- lattice

struct LatticeEvolve {
  std::string init, out_path, variant;
  bool serial = false;
  std::string config;
};

int lattice_evolve(const LatticeEvolve& a, std::ostream& out, std::ostream& err) {
  using namespace darboux;
  if (a.init.empty()) throw UsageError("--init is required");
  std::ifstream in(a.init);
  if (!in) throw UsageError("cannot open " + a.init);
  BoundaryData b;
  try {
    b = read_boundary_json(in);
    if (!a.variant.empty()) b.variant = variant_from_string(a.variant.c_str());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  LatticeField f(b.extent, b.variant);
  double residual = 0.0;
  try {
    f = a.serial ? serial::lattice_evolve(b) : parallel::lattice_evolve(b);
    residual = a.serial ? serial::lattice_residual(f) : parallel::lattice_residual(f);
  } catch (const DimensionError& e) {
    throw UsageError(e.what());
  } catch (const LatticeDomainError& e) {
    err << "lattice evolve failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  Sink sink(a.out_path, out);
  write_field_json(sink.get(), b, f, residual);
  err << "max_cube_residual " << fmt(residual) << '\n';
  if (residual > kLatticeTol) {
    err << "per-cube residual above " << fmt(kLatticeTol) << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ verify

struct VerifyAll {
  std::uint64_t seed = 42;
  int samples = 1000;
  std::string out_path;
  std::vector<std::string> suites;
  bool serial = false;
  std::string config;
};

int verify_all(const VerifyAll& a, std::ostream& out, std::ostream& err) {
  if (a.samples <= 0) throw UsageError("--samples must be positive");
  verify::RunOptions opt{a.seed, a.samples, !a.serial};
  std::vector<std::string> names;
  for (const auto& s : verify::manifest()) names.push_back(s.name);
  if (!a.suites.empty()) {
    for (const auto& s : a.suites)
      if (std::find(names.begin(), names.end(), s) == names.end()) throw UsageError("unknown suite " + s);
    names = a.suites;
  }
  const auto t0 = std::chrono::steady_clock::now();
  verify::BatteryResult result;
  for (const auto& n : names) {
    result.reports.push_back(verify::run_suite(n, opt));
    const num::Report& r = result.reports.back();
    result.passed = result.passed && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " max=" << fmt(r.max_residual) << " tol=" << std::setprecision(3) << r.tolerance << std::setprecision(6)
        << " samples=" << r.samples << '\n';
    if (!r.passed) err << num::to_json(r).dump(2) << '\n';
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t passed = 0;
  for (const auto& r : result.reports) passed += r.passed ? 1 : 0;
  out << "verify: " << passed << '/' << result.reports.size() << " suites passed in " << std::setprecision(3)
      << result.seconds << " s\n";
  if (!a.out_path.empty()) {
    std::ofstream f(a.out_path);
    if (!f) throw UsageError("cannot write " + a.out_path);
    f << verify::to_json(result, opt).dump(2) << '\n';
  }
  return result.passed ? kExitOk : kExitCheckFailed;
}

int verify_list(std::ostream& out) {
  for (const auto& s : verify::manifest()) out << s.name << '\t' << fmt(s.tolerance) << '\t' << s.property << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- limit

struct Limit {
  std::string map = "phi_eps";
  std::vector<double> x0;
  std::vector<double> eps{flow::kDefaultEpsList.begin(), flow::kDefaultEpsList.end()};
  std::string config;
};

int limit(const Limit& a, std::ostream& out) {
  const flow::LimitMap m = a.map == "phi_eps" ? flow::LimitMap::phi_eps : flow::LimitMap::psi_scaled;
  check_count(a.x0, m == flow::LimitMap::phi_eps ? 3 : 6, "--x0");
  if (a.eps.size() < 2) throw UsageError("--eps-list needs at least two values");
  for (double e : a.eps) {
    if (!(e > 0.0)) throw UsageError("--eps-list values must be positive");
    for (double v : a.x0)
      if (!(std::abs(e * v) < 1.0)) throw UsageError("eps * x0 must stay inside (-1, 1)");
    if (m == flow::LimitMap::psi_scaled) {
      CosSextuple s;
      for (int p = 0; p < 6; ++p) s[p] = e * a.x0[p];
      if (!tetra::is_admissible(s)) throw UsageError("eps * x0 is not admissible");
    }
  }
  flow::FlowState x0(static_cast<Eigen::Index>(a.x0.size()));
  for (std::size_t i = 0; i < a.x0.size(); ++i) x0[static_cast<Eigen::Index>(i)] = a.x0[i];
  const flow::LimitResult r = flow::limit_order(m, x0, a.eps);
  out << "eps,defect\n";
  for (std::size_t i = 0; i < r.eps.size(); ++i) out << fmt(r.eps[i]) << ',' << fmt(r.defects[i]) << '\n';
  out << "slope " << fmt(r.slope) << '\n';
  return r.slope >= kLimitSlope ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical cosine-law maps: orbits, lattices and verification", "sphlaw"};
  app.require_subcommand(1);

  CLI::App* tri = app.add_subcommand("triangle", "triangle maps");
  tri->require_subcommand(1);
  TriangleSolve ts;
  CLI::App* ts_cmd = leaf(*tri, "solve", "dual data of a spherical triangle", ts.config);
  ts_cmd->add_option("--angles", ts.angles, "three angles (radians)")->delimiter(',');
  ts_cmd->add_option("--sides", ts.sides, "three sides (radians)")->delimiter(',');
  ts_cmd->add_flag("--degrees", ts.degrees, "read angles and sides in degrees");

  Orbit to;
  CLI::App* to_cmd = leaf(*tri, "orbit", "orbit of phi, hk or jonas as CSV", to.config);
  to_cmd->add_option("--x", to.x, "initial cosines x1,x2,x3")->delimiter(',');
  to_cmd->add_option("--map", to.map, "phi | hk | jonas")->check(CLI::IsMember({"phi", "hk", "jonas"}));
  to_cmd->add_option("--steps", to.steps, "number of steps")->check(CLI::Range(0, kOrbitStepCap));
  to_cmd->add_option("--out", to.out_path, "CSV file (default: standard output)");

  CLI::App* tet = app.add_subcommand("tetra", "tetrahedron map");
  tet->require_subcommand(1);
  TetraSolve tts;
  CLI::App* tts_cmd = leaf(*tet, "solve", "edge lengths of a spherical tetrahedron", tts.config);
  tts_cmd->add_option("--dihedral", tts.dihedral, "six dihedral angles in pair order 12,13,23,14,24,34")
      ->delimiter(',');
  tts_cmd->add_flag("--degrees", tts.degrees, "read angles in degrees");

  Orbit tto;
  tto.map = "psi";
  CLI::App* tto_cmd = leaf(*tet, "orbit", "orbit of psi as CSV", tto.config);
  tto_cmd->add_option("--x", tto.x, "six initial dihedral cosines")->delimiter(',');
  tto_cmd->add_option("--map", tto.map, "psi")->check(CLI::IsMember({"psi"}));
  tto_cmd->add_option("--steps", tto.steps, "number of steps")->check(CLI::Range(0, kOrbitStepCap));
  tto_cmd->add_option("--out", tto.out_path, "CSV file (default: standard output)");

  CLI::App* lat = app.add_subcommand("lattice", "face-field lattice");
  lat->require_subcommand(1);
  LatticeEvolve le;
  CLI::App* le_cmd = leaf(*lat, "evolve", "fill a box from boundary data", le.config);
  le_cmd->add_option("--init", le.init, "boundary JSON");
  le_cmd->add_option("--out", le.out_path, "field JSON (default: standard output)");
  le_cmd->add_option("--variant", le.variant, "symmetric | general | alt")
      ->check(CLI::IsMember({"symmetric", "general", "alt"}));
  le_cmd->add_flag("--serial", le.serial, "use the serial reference evolution");

  CLI::App* ver = app.add_subcommand("verify", "property-suite battery");
  ver->require_subcommand(1);
  VerifyAll va;
  CLI::App* va_cmd = leaf(*ver, "all", "run every suite", va.config);
  va_cmd->add_option("--seed", va.seed, "base seed");
  va_cmd->add_option("--samples", va.samples, "samples per suite");
  va_cmd->add_option("--out", va.out_path, "report JSON");
  va_cmd->add_option("--suite", va.suites, "run only the named suites")->delimiter(',');
  va_cmd->add_flag("--serial", va.serial, "evaluate samples serially");
  CLI::App* vl_cmd = ver->add_subcommand("list", "print the suite manifest");

  Limit li;
  CLI::App* li_cmd = leaf(app, "limit", "continuum-limit order of a discrete map", li.config);
  li_cmd->add_option("--map", li.map, "phi_eps | psi")->check(CLI::IsMember({"phi_eps", "psi"}));
  li_cmd->add_option("--x0", li.x0, "base point (3 values for phi_eps, 6 for psi)")->delimiter(',');
  li_cmd->add_option("--eps-list", li.eps, "scales, e.g. 1e-2,5e-3,2.5e-3")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto configured = [](CLI::App* sub, const std::string& path) {
    if (!path.empty()) apply_config(sub, path);
    return true;
  };

  try {
    if (ts_cmd->parsed() && configured(ts_cmd, ts.config)) return triangle_solve(ts, out);
    if (to_cmd->parsed() && configured(to_cmd, to.config)) {
      if (to.x.empty()) throw UsageError("--x is required");
      return triangle_orbit(to, out, err);
    }
    if (tts_cmd->parsed() && configured(tts_cmd, tts.config)) return tetra_solve(tts, out);
    if (tto_cmd->parsed() && configured(tto_cmd, tto.config)) {
      if (tto.x.empty()) throw UsageError("--x is required");
      return tetra_orbit(tto, out, err);
    }
    if (le_cmd->parsed() && configured(le_cmd, le.config)) return lattice_evolve(le, out, err);
    if (va_cmd->parsed() && configured(va_cmd, va.config)) return verify_all(va, out, err);
    if (vl_cmd->parsed()) return verify_list(out);
    if (li_cmd->parsed() && configured(li_cmd, li.config)) {
      if (li.x0.empty()) throw UsageError("--x0 is required");
      return limit(li, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace sphlaw::cli

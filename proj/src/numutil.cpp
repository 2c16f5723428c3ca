#include "sphlaw/numutil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sphlaw/errors.hpp"
#include "sphlaw/tetra.hpp"
#include "sphlaw/triangle.hpp"

namespace sphlaw::num {
namespace {

constexpr long kProbeProposals = 1'000'000;
constexpr double kMinAcceptance = 1e-4;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  double residual = 0.0;
  std::string message;
};

Outcome evaluate(const ResidualFn& residual, long i) {
  try {
    return {residual(i), {}};
  } catch (const std::exception& e) {
    return {kInf, e.what()};
  }
}

Report reduce(const std::string& name, double tolerance, const std::vector<Outcome>& out, const InputFn& input) {
  ReportAccumulator acc(name, tolerance);
  for (long i = 0; i < static_cast<long>(out.size()); ++i) {
    const bool failing = !(out[i].residual <= tolerance);
    acc.add(out[i].residual, failing && input ? input(i) : std::vector<double>{}, out[i].message);
  }
  return acc.finish();
}

}  // namespace

const char* to_string(Domain d) {
  switch (d) {
    case Domain::tau3:
      return "tau3";
    case Domain::tetra_admissible:
      return "tetra_admissible";
    case Domain::lax_real:
      return "lax_real";
  }
  return "?";
}

int dimension(Domain d) { return d == Domain::tau3 ? 3 : 6; }

bool in_domain(Domain d, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != dimension(d)) return false;
  switch (d) {
    case Domain::tau3:
      return triangle::in_tau(CosTriple{x[0], x[1], x[2]});
    case Domain::tetra_admissible: {
      CosSextuple c;
      std::copy(x.begin(), x.end(), c.begin());
      return tetra::is_admissible(c);
    }
    case Domain::lax_real:
      return std::all_of(x.begin(), x.end(), [](double v) { return std::abs(v) < 1.0; });
  }
  return false;
}

std::vector<std::vector<double>> sample_domain(const SampleConfig& cfg) {
  if (cfg.count <= 0) throw DomainError("sample_domain: count must be positive");
  if (!(cfg.amplitude >= 0.0 && cfg.amplitude <= 1.0)) throw DomainError("sample_domain: amplitude must lie in [0, 1]");
  const int dim = dimension(cfg.domain);
  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(cfg.count));
  Rng rng(cfg.seed);
  long proposals = 0;
  std::vector<double> x(static_cast<std::size_t>(dim));
  while (static_cast<int>(points.size()) < cfg.count) {
    for (double& v : x) v = rng.uniform(-cfg.amplitude, cfg.amplitude);
    ++proposals;
    if (in_domain(cfg.domain, x)) points.push_back(x);
    if (proposals == kProbeProposals &&
        static_cast<double>(points.size()) / static_cast<double>(proposals) < kMinAcceptance)
      throw SamplingError(std::string("sample_domain: acceptance rate below 1e-4 for ") + to_string(cfg.domain) +
                          " at amplitude " + std::to_string(cfg.amplitude));
  }
  return points;
}

std::vector<CosTriple> sample_tau(std::uint64_t seed, int count, double amplitude) {
  const auto pts = sample_domain({seed, count, Domain::tau3, amplitude});
  std::vector<CosTriple> out(pts.size());
  for (std::size_t n = 0; n < pts.size(); ++n) std::copy(pts[n].begin(), pts[n].end(), out[n].begin());
  return out;
}

std::vector<CosSextuple> sample_tetra(std::uint64_t seed, int count, double amplitude) {
  const auto pts = sample_domain({seed, count, Domain::tetra_admissible, amplitude});
  std::vector<CosSextuple> out(pts.size());
  for (std::size_t n = 0; n < pts.size(); ++n) std::copy(pts[n].begin(), pts[n].end(), out[n].begin());
  return out;
}

ReportAccumulator::ReportAccumulator(std::string name, double tolerance) {
  report_.name = std::move(name);
  report_.tolerance = tolerance;
}

void ReportAccumulator::add(double residual, const std::vector<double>& input, const std::string& message) {
  const double r = std::isfinite(residual) ? residual : kInf;
  ++samples_;
  sum_ += r;
  max_ = std::max(max_, r);
  if (!(r <= report_.tolerance)) {
    ++failed_;
    if (report_.failures.size() < kMaxFailures) report_.failures.push_back({input, r, message});
  }
}

void ReportAccumulator::merge(const ReportAccumulator& other) {
  samples_ += other.samples_;
  failed_ += other.failed_;
  sum_ += other.sum_;
  max_ = std::max(max_, other.max_);
  for (const auto& f : other.report_.failures) {
    if (report_.failures.size() >= kMaxFailures) break;
    report_.failures.push_back(f);
  }
}

Report ReportAccumulator::finish() const {
  Report r = report_;
  r.samples = samples_;
  r.max_residual = max_;
  r.mean_residual = samples_ > 0 ? std::min(max_, sum_ / static_cast<double>(samples_)) : 0.0;
  r.passed = failed_ == 0;
  return r;
}

nlohmann::ordered_json to_json(const Report& r) {
  using nlohmann::ordered_json;
  // JSON has no infinity; such residuals are written as null.
  const auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json j;
  j["name"] = r.name;
  j["samples"] = r.samples;
  j["max_residual"] = num(r.max_residual);
  j["mean_residual"] = num(r.mean_residual);
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  ordered_json obs = ordered_json::object();
  for (const auto& [k, v] : r.observed) obs[k] = num(v);
  j["observed"] = std::move(obs);
  ordered_json fails = ordered_json::array();
  for (const auto& f : r.failures) {
    ordered_json e;
    e["input"] = f.input;
    e["residual"] = num(f.residual);
    if (!f.message.empty()) e["message"] = f.message;
    fails.push_back(std::move(e));
  }
  j["failures"] = std::move(fails);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

namespace serial {

Report sweep(const std::string& name, double tolerance, long n, const ResidualFn& residual, const InputFn& input) {
  std::vector<Outcome> out(static_cast<std::size_t>(std::max(0L, n)));
  for (long i = 0; i < n; ++i) out[i] = evaluate(residual, i);
  return reduce(name, tolerance, out, input);
}

}  // namespace serial

namespace parallel {

Report sweep(const std::string& name, double tolerance, long n, const ResidualFn& residual, const InputFn& input) {
  std::vector<Outcome> out(static_cast<std::size_t>(std::max(0L, n)));
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) out[i] = evaluate(residual, i);
  return reduce(name, tolerance, out, input);
}

}  // namespace parallel

}  // namespace sphlaw::num

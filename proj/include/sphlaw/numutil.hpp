#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "sphlaw/cosvec.hpp"

namespace sphlaw::num {

/// Project-wide generator: the 64-bit Mersenne Twister (mt19937_64, whose
/// output sequence is fixed by the C++ standard) with doubles formed from
/// the top 53 bits, (u >> 11) * 2^-53. Library distributions are avoided
/// because their algorithms are implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream `index` derived from a base seed (seed + index).
inline Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(seed + index); }

enum class Domain {
  tau3,              // 3 angle cosines with arccos in the triangle domain
  tetra_admissible,  // 6 dihedral cosines with a positive definite angle Gram
  lax_real,          // 6 values in (-1, 1): every square root of the face-field step is real at the first stage
};

const char* to_string(Domain d);
int dimension(Domain d);
bool in_domain(Domain d, const std::vector<double>& x);

struct SampleConfig {
  std::uint64_t seed = 42;
  int count = 1;
  Domain domain = Domain::tau3;
  double amplitude = 0.5;
};

inline constexpr double kDefaultTauAmplitude = 0.5;
inline constexpr double kDefaultTetraAmplitude = 0.3;

/// Rejection sampling from the uniform cube [-amplitude, amplitude]^dim.
/// Throws DomainError on count <= 0 or amplitude outside [0, 1], and
/// SamplingError if fewer than 1e-4 of the first 1e6 proposals are accepted.
std::vector<std::vector<double>> sample_domain(const SampleConfig& cfg);

std::vector<CosTriple> sample_tau(std::uint64_t seed, int count, double amplitude = kDefaultTauAmplitude);
std::vector<CosSextuple> sample_tetra(std::uint64_t seed, int count, double amplitude = kDefaultTetraAmplitude);

/// Central-difference Jacobian of f at x. Divides by the representable step
/// (x + h) - (x - h) rather than 2h.
template <class F>
Eigen::MatrixXd fd_jacobian(F&& f, const Eigen::VectorXd& x, double h = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    Eigen::VectorXd xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    jac.col(c) = (f(xp) - f(xm)) / (xp[c] - xm[c]);
  }
  return jac;
}

template <std::size_t N>
Eigen::VectorXd to_eigen(const CosVector<N>& v) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) r[static_cast<Eigen::Index>(i)] = v[i];
  return r;
}

template <std::size_t N>
CosVector<N> from_eigen(const Eigen::VectorXd& v) {
  CosVector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = v[static_cast<Eigen::Index>(i)];
  return r;
}

struct Failure {
  std::vector<double> input;
  double residual = 0.0;
  std::string message;
};

/// Outcome of one property suite.
struct Report {
  std::string name;
  long samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::vector<Failure> failures;                // capped at kMaxFailures
  std::map<std::string, double> observed;       // extra measured quantities
  std::string note;
};

inline constexpr std::size_t kMaxFailures = 10;

/// Streaming accumulation of residuals into a Report. A non-finite residual
/// counts as a failure and as an infinite maximum.
class ReportAccumulator {
 public:
  ReportAccumulator(std::string name, double tolerance);

  void add(double residual, const std::vector<double>& input = {}, const std::string& message = {});
  void merge(const ReportAccumulator& other);
  Report finish() const;

  long samples() const { return samples_; }

 private:
  Report report_;
  long samples_ = 0;
  long failed_ = 0;
  double sum_ = 0.0;
  double max_ = 0.0;
};

nlohmann::ordered_json to_json(const Report& r);

/// residual(i) for sample i; input(i) is only called for failing samples.
using ResidualFn = std::function<double(long)>;
using InputFn = std::function<std::vector<double>(long)>;

namespace serial {
/// Evaluates residual(i) for i in [0, n). An exception thrown for a sample
/// is recorded as a failure with an infinite residual.
Report sweep(const std::string& name, double tolerance, long n, const ResidualFn& residual,
             const InputFn& input = {});
}  // namespace serial

namespace parallel {
/// OpenMP version of serial::sweep. Residuals are reduced in index order, so
/// the result is identical to the serial one.
Report sweep(const std::string& name, double tolerance, long n, const ResidualFn& residual,
             const InputFn& input = {});
}  // namespace parallel

}  // namespace sphlaw::num

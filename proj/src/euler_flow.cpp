#include "sphlaw/euler_flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "sphlaw/cosvec.hpp"
#include "sphlaw/errors.hpp"
#include "sphlaw/tetra.hpp"
#include "sphlaw/triangle.hpp"

namespace sphlaw::flow {
namespace {

void check_dim(FlowSystem s, const FlowState& x, const char* who) {
  if (x.size() != dimension(s))
    throw DimensionError(std::string(who) + ": expected a state of dimension " + std::to_string(dimension(s)));
}

std::array<double, 3> euler_field(const std::array<double, 3>& v) {
  return {v[1] * v[2], v[0] * v[2], v[0] * v[1]};
}

}  // namespace

int dimension(FlowSystem s) { return s == FlowSystem::euler3 ? 3 : 6; }

const char* to_string(FlowSystem s) { return s == FlowSystem::euler3 ? "euler3" : "coupled6"; }

const char* to_string(LimitMap m) { return m == LimitMap::phi_eps ? "phi_eps" : "psi"; }

FlowState rhs(FlowSystem s, const FlowState& x) {
  check_dim(s, x, "rhs");
  FlowState f(x.size());
  if (s == FlowSystem::euler3) {
    f << x[1] * x[2], x[0] * x[2], x[0] * x[1];
    return f;
  }
  const auto X = [&](int a, int b) { return x[pair_index(a, b)]; };
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kPairs[p];
    const auto [k, m] = kPairs[complement_pair(p)];
    f[p] = X(i, k) * X(j, k) + X(i, m) * X(j, m);
  }
  return f;
}

Decoupled decouple(const FlowState& x6) {
  check_dim(FlowSystem::coupled6, x6, "decouple");
  Decoupled d;
  for (int p = 0; p < 3; ++p) {
    d.p[p] = x6[p] + x6[complement_pair(p)];
    d.q[p] = x6[p] - x6[complement_pair(p)];
  }
  return d;
}

FlowState recouple(const Decoupled& pq) {
  FlowState x(6);
  for (int p = 0; p < 3; ++p) {
    x[p] = 0.5 * (pq.p[p] + pq.q[p]);
    x[complement_pair(p)] = 0.5 * (pq.p[p] - pq.q[p]);
  }
  return x;
}

double pushforward_residual(const FlowState& x6) {
  const Decoupled d = decouple(x6);
  const FlowState f = rhs(FlowSystem::coupled6, x6);
  const auto ep = euler_field(d.p), eq = euler_field(d.q);
  double r = 0.0;
  for (int p = 0; p < 3; ++p) {
    r = std::max(r, std::abs(f[p] + f[complement_pair(p)] - ep[p]));
    r = std::max(r, std::abs(f[p] - f[complement_pair(p)] - eq[p]));
  }
  return r;
}

std::vector<double> integrals_continuous(FlowSystem s, const FlowState& x) {
  check_dim(s, x, "integrals_continuous");
  if (s == FlowSystem::euler3) return {x[0] * x[0] - x[1] * x[1], x[0] * x[0] - x[2] * x[2]};
  const Decoupled d = decouple(x);
  const auto sq = [](double v) { return v * v; };
  const double x12 = x[0], x13 = x[1], x23 = x[2], x14 = x[3], x24 = x[4], x34 = x[5];
  return {sq(d.p[0]) - sq(d.p[1]),
          sq(d.p[0]) - sq(d.p[2]),
          sq(d.q[0]) - sq(d.q[1]),
          sq(d.q[0]) - sq(d.q[2]),
          sq(x12) + sq(x34) - sq(x13) - sq(x24),
          sq(x12) + sq(x34) - sq(x23) - sq(x14),
          x12 * x34 - x13 * x24,
          x12 * x34 - x23 * x14};
}

double integral_relation_residual(const FlowState& x6) {
  const auto v = integrals_continuous(FlowSystem::coupled6, x6);
  double r = 0.0;
  r = std::max(r, std::abs(v[0] - (v[4] + 2.0 * v[6])));
  r = std::max(r, std::abs(v[1] - (v[5] + 2.0 * v[7])));
  r = std::max(r, std::abs(v[2] - (v[4] - 2.0 * v[6])));
  r = std::max(r, std::abs(v[3] - (v[5] - 2.0 * v[7])));
  return r;
}

FlowState rk4_step(FlowSystem s, const FlowState& x, double h) {
  const FlowState k1 = rhs(s, x);
  const FlowState k2 = rhs(s, x + 0.5 * h * k1);
  const FlowState k3 = rhs(s, x + 0.5 * h * k2);
  const FlowState k4 = rhs(s, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<FlowState> rk4(FlowSystem s, const FlowState& x0, double h, int n) {
  if (!(h > 0.0)) throw DomainError("rk4: step must be positive");
  if (n < 0) throw DomainError("rk4: step count must be non-negative");
  check_dim(s, x0, "rk4");
  std::vector<FlowState> traj;
  traj.reserve(static_cast<std::size_t>(n) + 1);
  traj.push_back(x0);
  for (int i = 0; i < n; ++i) traj.push_back(rk4_step(s, traj.back(), h));
  return traj;
}

LimitResult limit_order(LimitMap m, const FlowState& x0, std::span<const double> eps_list) {
  if (eps_list.size() < 2) throw DimensionError("limit_order: need at least two eps values");
  const FlowSystem sys = m == LimitMap::phi_eps ? FlowSystem::euler3 : FlowSystem::coupled6;
  check_dim(sys, x0, "limit_order");
  LimitResult res;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw DomainError("limit_order: eps values must be positive");
    const FlowState ode = rk4_step(sys, x0, eps);
    FlowState map(x0.size());
    if (m == LimitMap::phi_eps) {
      const CosTriple y = triangle::phi_eps(CosTriple{x0[0], x0[1], x0[2]}, eps);
      for (int i = 0; i < 3; ++i) map[i] = y[i];
    } else {
      CosSextuple x;
      for (int i = 0; i < 6; ++i) x[i] = eps * x0[i];
      const CosSextuple y = tetra::psi(x);  // DomainError when eps u is not admissible
      for (int i = 0; i < 6; ++i) map[i] = y[i] / eps;
    }
    res.eps.push_back(eps);
    res.defects.push_back((map - ode).cwiseAbs().maxCoeff());
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < res.eps.size(); ++i) {
    if (res.defects[i] <= 0.0) continue;
    const double lx = std::log(res.eps[i]), ly = std::log(res.defects[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) {
    res.slope = std::numeric_limits<double>::infinity();
    return res;
  }
  res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return res;
}

void write_trajectory_csv(std::ostream& out, FlowSystem s, const std::vector<FlowState>& traj, double h) {
  static constexpr const char* names3[] = {"x1", "x2", "x3"};
  static constexpr const char* names6[] = {"x12", "x13", "x23", "x14", "x24", "x34"};
  static constexpr const char* inv3[] = {"I12_inv", "I13_inv"};
  static constexpr const char* inv6[] = {"P1_inv", "P2_inv", "Q1_inv", "Q2_inv",
                                         "F1_inv", "F2_inv", "F3_inv", "F4_inv"};
  const bool small = s == FlowSystem::euler3;
  out << "step,t";
  for (int i = 0; i < dimension(s); ++i) out << ',' << (small ? names3[i] : names6[i]);
  for (int i = 0; i < (small ? 2 : 8); ++i) out << ',' << (small ? inv3[i] : inv6[i]);
  out << '\n';
  const auto old = out.precision(17);
  for (std::size_t n = 0; n < traj.size(); ++n) {
    out << n << ',' << static_cast<double>(n) * h;
    for (int i = 0; i < traj[n].size(); ++i) out << ',' << traj[n][i];
    for (double v : integrals_continuous(s, traj[n])) out << ',' << v;
    out << '\n';
  }
  out.precision(old);
}

}  // namespace sphlaw::flow

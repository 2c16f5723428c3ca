#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace sphlaw::flow {

// Continuous reference dynamics.
//
//   euler3:   x_i' = x_j x_k
//   coupled6: x_ij' = x_ik x_jk + x_im x_jm   (pairs in the order 12, 13, 23, 14, 24, 34)

enum class FlowSystem { euler3, coupled6 };

using FlowState = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1>;

int dimension(FlowSystem s);
const char* to_string(FlowSystem s);

/// The vector field. Throws DimensionError when x has the wrong size.
FlowState rhs(FlowSystem s, const FlowState& x);

/// p_ij = x_ij + x_km, q_ij = x_ij - x_km for ij in (12, 13, 23). Each of p
/// and q follows its own copy of the Euler top.
struct Decoupled {
  std::array<double, 3> p{}, q{};
};

Decoupled decouple(const FlowState& x6);
FlowState recouple(const Decoupled& pq);

/// max |d(p, q)/dt computed through the chain rule - Euler field at (p, q)|.
double pushforward_residual(const FlowState& x6);

/// euler3: (I_12, I_13) with I_ij = x_i^2 - x_j^2.
/// coupled6: eight values, first the p/q family
///   (p12^2 - p13^2, p12^2 - p23^2, q12^2 - q13^2, q12^2 - q23^2)
/// then the quadratic family
///   (x12^2 + x34^2 - x13^2 - x24^2, x12^2 + x34^2 - x23^2 - x14^2,
///    x12 x34 - x13 x24, x12 x34 - x23 x14).
std::vector<double> integrals_continuous(FlowSystem s, const FlowState& x);

/// max residual of the linear relations between the two coupled6 families,
/// e.g. p12^2 - p13^2 = F1 + 2 F3 and q12^2 - q13^2 = F1 - 2 F3.
double integral_relation_residual(const FlowState& x6);

FlowState rk4_step(FlowSystem s, const FlowState& x, double h);

/// Classical fixed-step RK4; returns n + 1 states starting with x0.
/// Throws DomainError unless h > 0.
std::vector<FlowState> rk4(FlowSystem s, const FlowState& x0, double h, int n);

enum class LimitMap { phi_eps, psi_scaled };

const char* to_string(LimitMap m);

struct LimitResult {
  std::vector<double> eps;
  std::vector<double> defects;
  double slope = 0.0;  // +inf when every defect is zero
};

/// Consistency order of a discrete map with its continuous flow.
///
/// phi_eps:    |phi_eps(x0, eps) - rk4_step(euler3, x0, eps)|
/// psi_scaled: |psi(eps u) / eps - rk4_step(coupled6, u, eps)| with u = x0
///
/// `slope` is the least-squares slope of log(defect) against log(eps).
/// Throws DomainError if a scaled point leaves the domain of the map.
LimitResult limit_order(LimitMap m, const FlowState& x0, std::span<const double> eps_list);

inline constexpr std::array<double, 3> kDefaultEpsList{1e-2, 5e-3, 2.5e-3};

/// CSV with columns step, t, state components, then one `_inv` column per
/// integral; 17 significant digits.
void write_trajectory_csv(std::ostream& out, FlowSystem s, const std::vector<FlowState>& traj, double h);

}  // namespace sphlaw::flow

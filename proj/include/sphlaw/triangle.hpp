#pragma once

#include <Eigen/Core>
#include <array>

#include "sphlaw/cosvec.hpp"

namespace sphlaw::triangle {

// Component i of a CosTriple is the cosine of the angle (or side) labelled
// i + 1, with (1, 2, 3) standing for the pairs (23, 13, 12). Every map here
// is equivariant under relabelling, so the pair order (12, 13, 23) used by
// gram_core gives the same formulas.

/// x in tau: arccos(x) satisfies a1 + a2 + a3 > pi and -ai + aj + ak < pi.
bool in_tau(const CosTriple& x);
/// y in tau*: arccos(y) satisfies l1 + l2 + l3 < 2 pi and -li + lj + lk > 0.
bool in_tau_star(const CosTriple& y);

/// Result of a map that is evaluated outside the geometric domain when the
/// algebra allows it.
struct Tagged {
  CosTriple value;
  bool outside_domain = false;
};

/// Angle cosines -> side cosines: y_i = (x_i + x_j x_k) / sqrt((1 - x_j^2)(1 - x_k^2)).
/// Throws DomainError if some |x_i| >= 1; flags inputs outside tau.
Tagged phi_tagged(const CosTriple& x);
CosTriple phi(const CosTriple& x);

/// Side cosines -> angle cosines; equals -phi(-y).
CosTriple phi_inv(const CosTriple& y);

/// The eps-scaled map; eps = 1 is phi and eps = 0 is the identity.
CosTriple phi_eps(const CosTriple& x, double eps);

/// 1 - x1^2 - x2^2 - x3^2 - 2 x1 x2 x3 (determinant of the angle Gram).
double gram_det(const CosTriple& x);
/// 1 - y1^2 - y2^2 - y3^2 + 2 y1 y2 y3 (determinant of the length Gram).
double gram_det_dual(const CosTriple& y);

struct TriangleInvariants {
  std::array<double, 3> E{};  // E12, E13, E23 with E_ij = (1 - x_i^2) / (1 - x_j^2)
  double d = 0.0;
  double gamma2 = 0.0;  // prod (1 - x_i^2)
};

TriangleInvariants invariants(const CosTriple& x);

/// max_i |d - (1 - y_i^2)(1 - x_j^2)(1 - x_k^2)| together with the ratio form
/// (1 - y_i^2)/(1 - x_i^2) = d / gamma^2 = gamma'^2 / d', for y = phi(x).
double sine_law_residual(const CosTriple& x);

/// Second iterate of phi as the birational Hirota-Kimura map.
/// Throws SingularError when |1 - |x|^2 - 2 x1 x2 x3| <= 1e-12.
CosTriple hk_step(const CosTriple& x);

/// max_i |xt_i - x_i - (xt_j x_k + x_j xt_k)|.
double hk_implicit_residual(const CosTriple& x, const CosTriple& xt);

enum class Transform { switch_map, polar, side_flip, angle_flip, jonas };

/// Angle cosines of the transformed triangle.
///
///  switch_map  new angles = old sides: phi(x); needs phi(x) in tau
///  polar       alpha* = pi - l: -phi(x)
///  side_flip   l^ = pi - l: -hk_step(x); needs phi(x) in tau
///  jonas       the birational involution -hk_step(x) (no existence check)
///  angle_flip  i o jonas o i
///
/// switch_map, polar and side_flip require x in tau (DomainError) and throw
/// ExistenceError when the target triangle does not exist.
CosTriple transform(Transform kind, const CosTriple& x);

/// Side cosines of the switched triangle, hk_step(x).
CosTriple switched_sides(const CosTriple& x);

/// sin^2 l_i = d / ((1 - x_j^2)(1 - x_k^2)); conserved by the jonas map.
std::array<double, 3> jonas_invariants(const CosTriple& x);

struct Jacobian3 {
  Eigen::Matrix3d m;
  double det = 0.0;
};

/// Closed-form dy/dx of phi. Throws DomainError outside tau.
Jacobian3 jacobian_phi(const CosTriple& x);

/// Densities of the invariant volume form: index 0..2 is (1 - x_j^2)(1 - x_k^2)
/// for the pair complementary to i, index 3..5 is (1 - x_i^2)^2.
double volume_density(const CosTriple& x, int which);
inline constexpr int kVolumeDensityCount = 6;

struct PoissonCoeffs {
  std::array<double, 3> C{};
};

/// P(x)_ij = {x_i, x_j} = C_i x_k (1 - x_j^2) - C_j x_k (1 - x_i^2).
Eigen::Matrix3d poisson_bracket(const PoissonCoeffs& c, const CosTriple& x);

/// Exact gradient of the bracket entries: grad[l](i, j) = d P_ij / d x_l.
std::array<Eigen::Matrix3d, 3> poisson_bracket_gradient(const PoissonCoeffs& c, const CosTriple& x);

/// |{x1,{x2,x3}} + {x2,{x3,x1}} + {x3,{x1,x2}}| from the exact polynomial
/// derivatives of the bracket.
double jacobi_identity_residual(const PoissonCoeffs& c, const CosTriple& x);

/// max |J P(x) J^T - P(phi(x))| with J = jacobian_phi(x).
double poisson_map_residual(const PoissonCoeffs& c, const CosTriple& x);

}  // namespace sphlaw::triangle

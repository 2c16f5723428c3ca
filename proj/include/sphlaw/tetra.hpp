#pragma once

#include <Eigen/Core>
#include <array>
#include <span>

#include "sphlaw/cosvec.hpp"

namespace sphlaw::tetra {

// Entries of a CosSextuple follow the pair order (12, 13, 23, 14, 24, 34).
// Vertex labels in this header are 1-based, as in that order.

using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// The 4x4 angle Gram (-x off the diagonal) is positive definite.
bool is_admissible(const CosSextuple& x);
/// The 4x4 length Gram (+y off the diagonal) is positive definite.
bool is_admissible_lengths(const CosSextuple& y);

/// Cofactors of the angle Gram written out as polynomials in x.
struct TetraCofactors {
  std::array<double, 4> diag{};  // g_ii = 1 - (x_jk^2 + x_jm^2 + x_km^2) - 2 x_jk x_jm x_km
  CosSextuple off{};             // g_ij = x_ij + x_ik x_jk + x_im x_jm + x_km (x_ik x_jm + x_im x_jk - x_ij x_km)
};

TetraCofactors tetra_cofactors(const CosSextuple& x);

/// Dihedral-angle cosines -> edge-length cosines, y_ij = g_ij / sqrt(g_ii g_jj).
/// Throws DomainError when x is not admissible and DegenerateError when some
/// g_ii <= 1e-12.
CosSextuple psi(const CosSextuple& x);

/// Edge-length cosines -> dihedral-angle cosines, -psi(-y).
CosSextuple psi_inv(const CosSextuple& y);

struct TetraInvariants {
  double r1 = 0.0;  // (1 - x13^2)(1 - x24^2) / ((1 - x12^2)(1 - x34^2))
  double r2 = 0.0;  // (1 - x23^2)(1 - x14^2) / ((1 - x12^2)(1 - x34^2))
  double s1 = 0.0;  // (x12 x34 - x13 x24) / sqrt((1 - x12^2)(1 - x34^2))
  double s2 = 0.0;  // (x13 x24 - x23 x14) / sqrt((1 - x12^2)(1 - x34^2))

  std::array<double, 4> as_array() const { return {r1, r2, s1, s2}; }
};

TetraInvariants tetra_invariants(const CosSextuple& x);

struct SineLawResiduals {
  double products = 0.0;  // sin l_ij sin l_km / (sin a_ij sin a_km): spread and distance to d/gamma, gamma'/d'
  double cross = 0.0;     // max_k |N_k(y) - (d/gamma) N_k(x)| for the cross-cosine numerators
  double ratio = 0.0;     // d / gamma
};

/// Residuals of the tetrahedral sine laws for y = psi(x).
/// Throws DegenerateError if any sine factor is below 1e-12.
SineLawResiduals sine_law_residuals(const CosSextuple& x, const CosSextuple& y);

struct LinkTriangle {
  int vertex = 0;                     // m in 1..4
  std::array<int, 3> labels{};        // the complement i < j < k (1-based)
  CosTriple planar_cosines{};         // cos a_ij^(m), cos a_ik^(m), cos a_jk^(m)
};

/// Link of vertex m: phi applied to the dihedral cosines (x_ij, x_ik, x_jk).
LinkTriangle link_triangle(const CosSextuple& x, int m);

struct TwoStageResult {
  CosSextuple values{};
  double discrepancy = 0.0;  // max over edges of the two face computations
};

/// Edge cosines from the link triangles followed by the face triangles.
/// Throws ConsistencyError if the two computations of an edge differ by > 1e-8.
TwoStageResult two_stage_solve(const CosSextuple& x);

struct Jacobian6 {
  Matrix6 m;
  double det = 0.0;
};

/// Closed-form dy/dx of psi in the canonical pair order.
Jacobian6 jacobian_psi(const CosSextuple& x);

/// (gamma'/d')^5 for y = psi(x): the factorized Jacobian determinant.
double jacobian_det_factorized(const CosSextuple& x);

/// ((1 - x_ij^2)(1 - x_km^2))^(5/2) for pairing 0: (12,34), 1: (13,24), 2: (14,23).
double volume_density(const CosSextuple& x, int pairing);

/// |LHS / RHS - 1| of
/// (g'_11 g'_22 g'_33 g'_44)^(3/2) / (g_11 g_22 g_33 g_44)^(3/2) = prod (1 - y^2)^2 / prod (1 - x^2)^2.
double ggs_residual(const CosSextuple& x);

/// H[(ij), (i'j')] = d l_km / d alpha_i'j' with (km) the complement of (ij);
/// returns max |H - H^T|. Angles in radians.
Matrix6 schlafli_matrix(std::span<const double, 6> alpha);
double schlafli_symmetry_residual(std::span<const double, 6> alpha);

}  // namespace sphlaw::tetra

#pragma once

#include <array>

#include "sphlaw/cosvec.hpp"

namespace sphlaw::darboux {

// Fields live on the 2-faces of the cube. Directions are 0-based here
// (0, 1, 2 for the math labels 1, 2, 3); T_k is the unit shift along k.

enum class Variant { symmetric, general, alt };

const char* to_string(Variant v);
Variant variant_from_string(const char* s);

/// x[i][j] for i != j. Diagonal entries are unused.
template <int N>
using FaceMatrix = std::array<std::array<double, N>, N>;

/// Face values of one 3D cube at its initial vertex.
///
/// The symmetric variant keeps a single slot per unordered pair, the upper
/// triangle x[i][j] with i < j; get() mirrors it. The ordered variants use
/// every off-diagonal entry.
struct CubeFaceState {
  Variant variant = Variant::symmetric;
  FaceMatrix<3> x{};

  double get(int i, int j) const { return variant == Variant::symmetric && i > j ? x[j][i] : x[i][j]; }
  void set(int i, int j, double v) {
    if (variant == Variant::symmetric && i > j) x[j][i] = v;
    else x[i][j] = v;
  }

  static CubeFaceState symmetric(double x12, double x13, double x23);
  /// Ordered state with x_ij = x_ji taken from a symmetric triple.
  static CubeFaceState ordered(Variant v, double x12, double x13, double x23);
};

/// One application of the 3D map. Output slot (i, j) holds T_k x_ij with k
/// the third direction, so the symmetric variant returns
/// (T_3 x_12, T_2 x_13, T_1 x_23) = phi(x_12, x_13, x_23).
///
/// Throws DomainError when a square-root argument is <= 0 (symmetric,
/// general) or the denominator of the alternative form is <= 0.
CubeFaceState darboux_step(const CubeFaceState& in);

/// Residual of the step equations written without division, e.g.
/// |T_k x_ij sqrt(1 - x_ik x_ki) sqrt(1 - x_kj x_jk) - (x_ij + x_ik x_kj)|.
double step_residual(const CubeFaceState& in, const CubeFaceState& out);

enum class Admission { strict, lax };

struct Consistency4D {
  double residual = 0.0;                // max |T_m T_k x_ij - T_k T_m x_ij|
  std::array<CosSextuple, 4> shifted{};  // shifted[s][p] = T_s x_p; NaN when s lies on pair p
  CosSextuple final_values{};           // T_k T_m x_ij in canonical pair order
};

/// Two-stage evaluation of the symmetric system on a 4D cube from the six
/// face values at one vertex (canonical pair order). Strict admission
/// requires a positive definite 4x4 angle Gram; lax only needs every
/// intermediate square root to be real.
Consistency4D consistency_4d(const CosSextuple& init, Admission admission = Admission::strict);

struct OrderedConsistency4D {
  double residual = 0.0;          // max |T_m T_k x_ij - T_k T_m x_ij| over ordered pairs
  double symmetry_defect = 0.0;   // max |T x_ij - T x_ji| over all computed values
  FaceMatrix<4> final_values{};   // final_values[i][j] = T_k T_m x_ij
};

/// The same harness for the ordered variants on 12 initial values x[i][j].
/// Reports; never throws on inconsistency.
OrderedConsistency4D consistency_4d_ordered(Variant variant, const FaceMatrix<4>& init);

}  // namespace sphlaw::darboux

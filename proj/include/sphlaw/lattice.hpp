#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sphlaw/darboux.hpp"
#include "sphlaw/errors.hpp"

namespace sphlaw::darboux {

struct Extent {
  int nx = 0, ny = 0, nz = 0;
  long cubes() const { return static_cast<long>(nx) * ny * nz; }
  friend bool operator==(const Extent&, const Extent&) = default;
};

struct Corner {
  int i = 0, j = 0, k = 0;
  friend bool operator==(const Corner&, const Corner&) = default;
};

/// DomainError raised inside a lattice evolution; carries the corner of the
/// first cube whose step left the real domain.
class LatticeDomainError : public DomainError {
 public:
  LatticeDomainError(Corner c, const std::string& what);
  Corner corner;
};

/// Face slot of an ordered direction pair: 12, 21, 13, 31, 23, 32.
enum class Slot : int { x12 = 0, x21, x13, x31, x23, x32 };

/// Row-major 2D array of face values on one coordinate plane through the
/// origin corner.
struct Plane {
  int rows = 0, cols = 0;
  std::vector<double> values;

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

/// Initial data: x12 on the xy plane (nx x ny), x13 on xz (nx x nz), x23 on
/// yz (ny x nz). Ordered variants may also carry x21, x31, x32 on the same
/// planes ("yx", "zx", "zy"); when absent they copy the symmetric values.
struct BoundaryData {
  Extent extent;
  Variant variant = Variant::symmetric;
  Plane xy, xz, yz;
  Plane yx, zx, zy;
};

/// Face values over the whole box.
///
/// x12 faces are indexed (i, j, k) with i < nx, j < ny, k <= nz; x13 with
/// j <= ny; x23 with i <= nx. The symmetric variant stores only the 12, 13,
/// 23 slots.
class LatticeField {
 public:
  LatticeField(Extent e, Variant v);

  const Extent& extent() const { return extent_; }
  Variant variant() const { return variant_; }
  bool has_slot(Slot s) const { return !faces_[static_cast<int>(s)].empty(); }

  double& at(Slot s, int i, int j, int k) { return faces_[static_cast<int>(s)][index(s, i, j, k)]; }
  double at(Slot s, int i, int j, int k) const { return faces_[static_cast<int>(s)][index(s, i, j, k)]; }

  /// Shape (dim0, dim1, dim2) of the array holding slot s.
  std::array<int, 3> shape(Slot s) const;

  /// The three input faces of the cube at corner c, as a cube state.
  CubeFaceState cube_inputs(Corner c) const;
  /// The three output faces T_3 x12, T_2 x13, T_1 x23 (and reversed slots).
  CubeFaceState cube_outputs(Corner c) const;
  void store_outputs(Corner c, const CubeFaceState& out);

  friend bool operator==(const LatticeField&, const LatticeField&) = default;

 private:
  std::size_t index(Slot s, int i, int j, int k) const;

  Extent extent_;
  Variant variant_;
  std::array<std::vector<double>, 6> faces_;
};

/// A field with the boundary planes filled and the interior set to NaN.
LatticeField make_field(const BoundaryData& b);

/// Apply the step to the cube at c, reading its inputs from and writing its
/// outputs to `field`. Throws LatticeDomainError.
void fill_cube(LatticeField& field, Corner c);

namespace serial {

/// Reference evolution: cubes filled in lexicographic corner order (i, j, k).
LatticeField lattice_evolve(const BoundaryData& b);

/// Evolution in a caller-given order. Every cube must appear exactly once and
/// after its three predecessors; otherwise ConsistencyError.
LatticeField lattice_evolve_in_order(const BoundaryData& b, std::span<const Corner> order);

/// Max step-equation residual over all cubes.
double lattice_residual(const LatticeField& f);

}  // namespace serial

namespace parallel {

/// Wavefront evolution: cubes with equal i + j + k are independent and are
/// filled concurrently. On failure reports the lowest-ordered failing cube
/// of the earliest failing wavefront.
LatticeField lattice_evolve(const BoundaryData& b);

double lattice_residual(const LatticeField& f);

}  // namespace parallel

/// Boundary planes with entries uniform in [-amplitude, amplitude] drawn
/// from the project generator. The reversed planes of the ordered variants
/// are drawn independently when `independent_reversed` is set and are
/// otherwise left empty (copies of the symmetric planes).
BoundaryData random_boundary(Extent e, Variant v, double amplitude, std::uint64_t seed,
                             bool independent_reversed = false);

/// Lexicographic corner order.
std::vector<Corner> lexicographic_order(Extent e);

/// Reads the JSON boundary document
/// {"extent": [nx, ny, nz], "variant": "...", "planes": {"xy": [[...]], "xz": ..., "yz": ...}}.
/// "variant" is optional; `fallback` is used when it is absent.
BoundaryData read_boundary_json(std::istream& in, Variant fallback = Variant::symmetric);

/// Writes the boundary document extended with "interior" (every slot as a
/// nested 3D array) and "max_cube_residual".
void write_field_json(std::ostream& out, const BoundaryData& b, const LatticeField& f, double residual);

}  // namespace sphlaw::darboux

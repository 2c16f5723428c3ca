#include "sphlaw/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "sphlaw/errors.hpp"
#include "sphlaw/gram.hpp"

namespace sphlaw::darboux {
namespace {

constexpr int third(int i, int j) { return 3 - i - j; }

double checked_sqrt(double radicand) {
  if (!(radicand > 0.0)) throw DomainError("darboux_step: square-root argument <= 0");
  return std::sqrt(radicand);
}

// Value of T_k x_ij and the factor multiplying it in the division-free form.
struct Rhs {
  double numerator;
  double scale;
};

Rhs step_parts(const CubeFaceState& s, int i, int j) {
  const int k = third(i, j);
  const double num = s.get(i, j) + s.get(i, k) * s.get(k, j);
  switch (s.variant) {
    case Variant::symmetric:
    case Variant::general:
      return {num, checked_sqrt(1.0 - s.get(i, k) * s.get(k, i)) * checked_sqrt(1.0 - s.get(k, j) * s.get(j, k))};
    case Variant::alt: {
      const double den = 1.0 - s.get(k, j) * s.get(j, k);
      if (!(den > 0.0)) throw DomainError("darboux_step: denominator <= 0");
      return {num, den};
    }
  }
  throw Error("darboux_step: unknown variant");
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::symmetric:
      return "symmetric";
    case Variant::general:
      return "general";
    case Variant::alt:
      return "alt";
  }
  return "?";
}

Variant variant_from_string(const char* s) {
  if (std::strcmp(s, "symmetric") == 0) return Variant::symmetric;
  if (std::strcmp(s, "general") == 0) return Variant::general;
  if (std::strcmp(s, "alt") == 0) return Variant::alt;
  throw DomainError(std::string("unknown Darboux variant: ") + s);
}

CubeFaceState CubeFaceState::symmetric(double x12, double x13, double x23) {
  CubeFaceState s;
  s.variant = Variant::symmetric;
  s.x[0][1] = x12;
  s.x[0][2] = x13;
  s.x[1][2] = x23;
  return s;
}

CubeFaceState CubeFaceState::ordered(Variant v, double x12, double x13, double x23) {
  CubeFaceState s;
  s.variant = v;
  s.x[0][1] = s.x[1][0] = x12;
  s.x[0][2] = s.x[2][0] = x13;
  s.x[1][2] = s.x[2][1] = x23;
  return s;
}

CubeFaceState darboux_step(const CubeFaceState& in) {
  CubeFaceState out;
  out.variant = in.variant;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j || (in.variant == Variant::symmetric && i > j)) continue;
      const Rhs r = step_parts(in, i, j);
      out.x[i][j] = r.numerator / r.scale;
    }
  }
  return out;
}

double step_residual(const CubeFaceState& in, const CubeFaceState& out) {
  double res = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j || (in.variant == Variant::symmetric && i > j)) continue;
      const Rhs r = step_parts(in, i, j);
      res = std::max(res, std::abs(out.get(i, j) * r.scale - r.numerator));
    }
  }
  return res;
}

Consistency4D consistency_4d(const CosSextuple& init, Admission admission) {
  if (admission == Admission::strict && !gram_from_cosines(GramKind::angles, init.span()).valid)
    throw DomainError("consistency_4d: initial data is not an admissible dihedral-angle set");

  Consistency4D out;
  for (auto& row : out.shifted) row.v.fill(std::numeric_limits<double>::quiet_NaN());

  // Stage 1: the 3-cube spanned by {i, j, k} (complement of m) yields
  // T_k x_ij, T_j x_ik, T_i x_jk.
  for (int m = 0; m < 4; ++m) {
    int d[3];
    for (int a = 0, n = 0; a < 4; ++a)
      if (a != m) d[n++] = a;
    const CubeFaceState cube = CubeFaceState::symmetric(init[pair_index(d[0], d[1])], init[pair_index(d[0], d[2])],
                                                        init[pair_index(d[1], d[2])]);
    const CubeFaceState t = darboux_step(cube);
    out.shifted[d[2]][pair_index(d[0], d[1])] = t.get(0, 1);
    out.shifted[d[1]][pair_index(d[0], d[2])] = t.get(0, 2);
    out.shifted[d[0]][pair_index(d[1], d[2])] = t.get(1, 2);
  }

  // Stage 2: the same cube shifted by T_m yields T_k T_m x_ij etc.; every
  // doubly shifted square is reached from two cubes.
  double first[6], second[6];
  bool seen[6] = {};
  for (int m = 0; m < 4; ++m) {
    int d[3];
    for (int a = 0, n = 0; a < 4; ++a)
      if (a != m) d[n++] = a;
    const CubeFaceState cube = CubeFaceState::symmetric(out.shifted[m][pair_index(d[0], d[1])],
                                                        out.shifted[m][pair_index(d[0], d[2])],
                                                        out.shifted[m][pair_index(d[1], d[2])]);
    const CubeFaceState t = darboux_step(cube);
    const int pairs[3] = {pair_index(d[0], d[1]), pair_index(d[0], d[2]), pair_index(d[1], d[2])};
    const double vals[3] = {t.get(0, 1), t.get(0, 2), t.get(1, 2)};
    for (int e = 0; e < 3; ++e) {
      if (!seen[pairs[e]]) {
        first[pairs[e]] = vals[e];
        seen[pairs[e]] = true;
      } else {
        second[pairs[e]] = vals[e];
      }
    }
  }
  for (int p = 0; p < 6; ++p) {
    out.final_values[p] = first[p];
    out.residual = std::max(out.residual, std::abs(first[p] - second[p]));
  }
  return out;
}

OrderedConsistency4D consistency_4d_ordered(Variant variant, const FaceMatrix<4>& init) {
  OrderedConsistency4D out;
  // shifted[s][i][j] = T_s x_ij
  FaceMatrix<4> shifted[4] = {};
  for (int m = 0; m < 4; ++m) {
    int d[3];
    for (int a = 0, n = 0; a < 4; ++a)
      if (a != m) d[n++] = a;
    CubeFaceState cube;
    cube.variant = variant;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) cube.x[a][b] = init[d[a]][d[b]];
    const CubeFaceState t = darboux_step(cube);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) shifted[d[third(a, b)]][d[a]][d[b]] = t.x[a][b];
  }

  FaceMatrix<4> first{}, second{};
  bool seen[4][4] = {};
  for (int m = 0; m < 4; ++m) {
    int d[3];
    for (int a = 0, n = 0; a < 4; ++a)
      if (a != m) d[n++] = a;
    CubeFaceState cube;
    cube.variant = variant;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) cube.x[a][b] = shifted[m][d[a]][d[b]];
    const CubeFaceState t = darboux_step(cube);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const int i = d[a], j = d[b];
        if (!seen[i][j]) {
          first[i][j] = t.x[a][b];
          seen[i][j] = true;
        } else {
          second[i][j] = t.x[a][b];
        }
      }
    }
  }

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      out.final_values[i][j] = first[i][j];
      out.residual = std::max(out.residual, std::abs(first[i][j] - second[i][j]));
      out.symmetry_defect = std::max(out.symmetry_defect, std::abs(first[i][j] - first[j][i]));
      for (int s = 0; s < 4; ++s) {
        if (s == i || s == j) continue;
        out.symmetry_defect = std::max(out.symmetry_defect, std::abs(shifted[s][i][j] - shifted[s][j][i]));
      }
    }
  }
  return out;
}

}  // namespace sphlaw::darboux

#include "sphlaw/tetra.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <string>

#include "sphlaw/errors.hpp"
#include "sphlaw/gram.hpp"
#include "sphlaw/triangle.hpp"

namespace sphlaw::tetra {
namespace {

double at(const CosSextuple& x, int a, int b) { return x[pair_index(a, b)]; }

// The three labels of {0,1,2,3} other than `skip`, ascending.
std::array<int, 3> complement3(int skip) {
  std::array<int, 3> r{};
  for (int i = 0, k = 0; i < 4; ++i)
    if (i != skip) r[k++] = i;
  return r;
}

double sine_of(double c) { return std::sqrt(std::max(0.0, 1.0 - c * c)); }

struct GramData {
  double det = 0.0;
  std::array<double, 4> diag{};
};

GramData gram_data(GramKind kind, const CosSextuple& c) {
  const GramMatrix g = gram_from_cosines(kind, c.span());
  const CofactorBundle cb = cofactors(g);
  GramData out;
  out.det = cb.det;
  for (int i = 0; i < 4; ++i) out.diag[i] = cb.cof(i, i);
  return out;
}

double product(const std::array<double, 4>& a) { return a[0] * a[1] * a[2] * a[3]; }

}  // namespace

bool is_admissible(const CosSextuple& x) {
  for (double v : x)
    if (!(std::abs(v) < 1.0)) return false;
  return gram_from_cosines(GramKind::angles, x.span()).valid;
}

bool is_admissible_lengths(const CosSextuple& y) {
  for (double v : y)
    if (!(std::abs(v) < 1.0)) return false;
  return gram_from_cosines(GramKind::lengths, y.span()).valid;
}

TetraCofactors tetra_cofactors(const CosSextuple& x) {
  TetraCofactors g;
  for (int i = 0; i < 4; ++i) {
    const auto [j, k, m] = complement3(i);
    const double xjk = at(x, j, k), xjm = at(x, j, m), xkm = at(x, k, m);
    g.diag[i] = 1.0 - (xjk * xjk + xjm * xjm + xkm * xkm) - 2.0 * xjk * xjm * xkm;
  }
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kPairs[p];
    const auto [k, m] = kPairs[complement_pair(p)];
    const double xij = x[p], xkm = at(x, k, m);
    const double xik = at(x, i, k), xjk = at(x, j, k), xim = at(x, i, m), xjm = at(x, j, m);
    g.off[p] = xij + xik * xjk + xim * xjm + xkm * (xik * xjm + xim * xjk - xij * xkm);
  }
  return g;
}

CosSextuple psi(const CosSextuple& x) {
  if (!is_admissible(x)) throw DomainError("psi: dihedral cosines are not admissible");
  const TetraCofactors g = tetra_cofactors(x);
  for (double gii : g.diag) {
    if (gii <= kDegenerateTol) throw DegenerateError("psi: diagonal cofactor below tolerance");
  }
  CosSextuple y;
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kPairs[p];
    y[p] = g.off[p] / std::sqrt(g.diag[i] * g.diag[j]);
  }
  return y;
}

CosSextuple psi_inv(const CosSextuple& y) {
  if (!is_admissible_lengths(y)) throw DomainError("psi_inv: edge cosines are not admissible");
  return -psi(-y);
}

TetraInvariants tetra_invariants(const CosSextuple& x) {
  const double q12 = 1.0 - x[0] * x[0], q13 = 1.0 - x[1] * x[1], q23 = 1.0 - x[2] * x[2];
  const double q14 = 1.0 - x[3] * x[3], q24 = 1.0 - x[4] * x[4], q34 = 1.0 - x[5] * x[5];
  const double base = q12 * q34;
  const double root = std::sqrt(base);
  TetraInvariants inv;
  inv.r1 = q13 * q24 / base;
  inv.r2 = q23 * q14 / base;
  inv.s1 = (x[0] * x[5] - x[1] * x[4]) / root;
  inv.s2 = (x[1] * x[4] - x[2] * x[3]) / root;
  return inv;
}

SineLawResiduals sine_law_residuals(const CosSextuple& x, const CosSextuple& y) {
  for (int p = 0; p < 6; ++p) {
    if (sine_of(x[p]) < kDegenerateTol || sine_of(y[p]) < kDegenerateTol)
      throw DegenerateError("sine_law_residuals: sine factor below tolerance");
  }
  const GramData gx = gram_data(GramKind::angles, x);
  const GramData gy = gram_data(GramKind::lengths, y);
  const double ratio = gx.det / std::sqrt(product(gx.diag));
  const double ratio_dual = std::sqrt(product(gy.diag)) / gy.det;

  // pairings (12,34), (13,24), (14,23)
  constexpr int pairing[3][2] = {{0, 5}, {1, 4}, {3, 2}};
  SineLawResiduals out;
  out.ratio = ratio;
  double r[3];
  for (int k = 0; k < 3; ++k) {
    const int a = pairing[k][0], b = pairing[k][1];
    r[k] = sine_of(y[a]) * sine_of(y[b]) / (sine_of(x[a]) * sine_of(x[b]));
  }
  double prod = std::abs(ratio - ratio_dual);
  for (int k = 0; k < 3; ++k) {
    prod = std::max(prod, std::abs(r[k] - r[(k + 1) % 3]));
    prod = std::max(prod, std::abs(r[k] - ratio));
  }
  out.products = prod;

  const auto numer = [](const CosSextuple& c, int k) {
    const double n12 = c[0] * c[5], n13 = c[1] * c[4], n14 = c[3] * c[2];
    if (k == 0) return n12 - n13;
    if (k == 1) return n13 - n14;
    return n14 - n12;
  };
  double cross = 0.0;
  for (int k = 0; k < 3; ++k) {
    cross = std::max(cross, std::abs(numer(y, k) - ratio * numer(x, k)));
    cross = std::max(cross, std::abs(numer(y, k) - ratio_dual * numer(x, k)));
  }
  out.cross = cross;
  return out;
}

LinkTriangle link_triangle(const CosSextuple& x, int m) {
  if (m < 1 || m > 4) throw DimensionError("link_triangle: vertex must be in 1..4");
  const auto [i, j, k] = complement3(m - 1);
  LinkTriangle lk;
  lk.vertex = m;
  lk.labels = {i + 1, j + 1, k + 1};
  lk.planar_cosines = triangle::phi(CosTriple{at(x, i, j), at(x, i, k), at(x, j, k)});
  return lk;
}

TwoStageResult two_stage_solve(const CosSextuple& x) {
  // planar[m][p]: cosine of the planar angle at vertex m opposite edge p (p not through m)
  double planar[4][6] = {};
  for (int m = 0; m < 4; ++m) {
    const LinkTriangle lk = link_triangle(x, m + 1);
    const auto [i, j, k] = complement3(m);
    planar[m][pair_index(i, j)] = lk.planar_cosines[0];
    planar[m][pair_index(i, k)] = lk.planar_cosines[1];
    planar[m][pair_index(j, k)] = lk.planar_cosines[2];
  }

  // Each edge lies on two faces; collect both answers.
  double first[6], second[6];
  bool seen[6] = {};
  for (int f = 3; f >= 0; --f) {
    const auto [a, b, c] = complement3(f);
    // In the face (abc) the angle opposite ab sits at c, and so on.
    const CosTriple angles{planar[c][pair_index(a, b)], planar[b][pair_index(a, c)], planar[a][pair_index(b, c)]};
    const CosTriple sides = triangle::phi(angles);
    const int edges[3] = {pair_index(a, b), pair_index(a, c), pair_index(b, c)};
    for (int e = 0; e < 3; ++e) {
      if (!seen[edges[e]]) {
        first[edges[e]] = sides[e];
        seen[edges[e]] = true;
      } else {
        second[edges[e]] = sides[e];
      }
    }
  }

  TwoStageResult out;
  for (int p = 0; p < 6; ++p) {
    out.values[p] = first[p];
    out.discrepancy = std::max(out.discrepancy, std::abs(first[p] - second[p]));
  }
  if (out.discrepancy > 1e-8) throw ConsistencyError("two_stage_solve: face computations disagree");
  return out;
}

Jacobian6 jacobian_psi(const CosSextuple& x) {
  const CosSextuple y = psi(x);
  const TetraCofactors g = tetra_cofactors(x);
  const auto Y = [&](int a, int b) { return at(y, a, b); };
  Jacobian6 jac;
  for (int r = 0; r < 6; ++r) {
    const auto [i, j] = kPairs[r];
    const auto [k, m] = kPairs[complement_pair(r)];
    const double gij = g.diag[i] * g.diag[j];
    const double base = (1.0 - at(x, k, m) * at(x, k, m)) / std::sqrt(gij);
    for (int c = 0; c < 6; ++c) {
      const auto [a, b] = kPairs[c];
      if (c == r) {
        jac.m(r, c) = base;
      } else if (c == complement_pair(r)) {
        const double p = (Y(i, k) * Y(j, m) + Y(i, m) * Y(j, k) - Y(i, j) * Y(i, k) * Y(i, m) -
                          Y(i, j) * Y(j, k) * Y(j, m)) /
                         (1.0 - Y(i, j) * Y(i, j));
        jac.m(r, c) = base * p * std::sqrt(g.diag[k] * g.diag[m] / gij);
      } else {
        // column pair shares one label with the row pair
        const int shared = (a == i || a == j) ? a : b;
        const int fresh = shared == a ? b : a;
        const int other = shared == i ? j : i;
        jac.m(r, c) = base * Y(other, fresh) * std::sqrt(g.diag[fresh] / g.diag[other]);
      }
    }
  }
  jac.det = jac.m.determinant();
  return jac;
}

double jacobian_det_factorized(const CosSextuple& x) {
  const CosSextuple y = psi(x);
  const GramData gy = gram_data(GramKind::lengths, y);
  return std::pow(std::sqrt(product(gy.diag)) / gy.det, 5);
}

double volume_density(const CosSextuple& x, int pairing) {
  constexpr int pairs[3][2] = {{0, 5}, {1, 4}, {3, 2}};
  if (pairing < 0 || pairing > 2) throw DimensionError("volume_density: pairing must be 0..2");
  const double a = x[pairs[pairing][0]], b = x[pairs[pairing][1]];
  return std::pow((1.0 - a * a) * (1.0 - b * b), 2.5);
}

double ggs_residual(const CosSextuple& x) {
  const CosSextuple y = psi(x);
  const TetraCofactors gx = tetra_cofactors(x);
  const GramData gy = gram_data(GramKind::lengths, y);
  const double lhs = std::pow(product(gy.diag) / product(gx.diag), 1.5);
  double qx = 1.0, qy = 1.0;
  for (int p = 0; p < 6; ++p) {
    qx *= 1.0 - x[p] * x[p];
    qy *= 1.0 - y[p] * y[p];
  }
  const double rhs = (qy * qy) / (qx * qx);
  return std::abs(lhs / rhs - 1.0);
}

Matrix6 schlafli_matrix(std::span<const double, 6> alpha) {
  CosSextuple x;
  for (int p = 0; p < 6; ++p) x[p] = std::cos(alpha[p]);
  const Jacobian6 jac = jacobian_psi(x);
  const CosSextuple y = psi(x);
  Matrix6 h;
  for (int r = 0; r < 6; ++r) {
    const int km = complement_pair(r);
    const double sin_l = sine_of(y[km]);
    if (sin_l < kDegenerateTol) throw DegenerateError("schlafli_matrix: edge length at 0 or pi");
    for (int c = 0; c < 6; ++c) h(r, c) = jac.m(km, c) * std::sin(alpha[c]) / sin_l;
  }
  return h;
}

double schlafli_symmetry_residual(std::span<const double, 6> alpha) {
  const Matrix6 h = schlafli_matrix(alpha);
  return (h - h.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace sphlaw::tetra

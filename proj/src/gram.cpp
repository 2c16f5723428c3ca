#include "sphlaw/gram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphlaw/cosvec.hpp"
#include "sphlaw/errors.hpp"

namespace sphlaw {
namespace {

int order_from_count(std::size_t count) {
  if (count == 3) return 3;
  if (count == 6) return 4;
  throw DimensionError("expected 3 or 6 cosines, got " + std::to_string(count));
}

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double det3(const SmallMat& m, const int r[3], const int c[3]) {
  const auto e = [&](int i, int j) { return m(r[i], c[j]); };
  return e(0, 0) * det2(e(1, 1), e(1, 2), e(2, 1), e(2, 2)) -
         e(0, 1) * det2(e(1, 0), e(1, 2), e(2, 0), e(2, 2)) +
         e(0, 2) * det2(e(1, 0), e(1, 1), e(2, 0), e(2, 1));
}

// Indices of {0..n-1} with `skip` removed.
void others(int n, int skip, int out[3]) {
  int k = 0;
  for (int i = 0; i < n; ++i)
    if (i != skip) out[k++] = i;
}

}  // namespace

GramMatrix gram_from_cosines(GramKind kind, std::span<const double> c) {
  const int n = order_from_count(c.size());
  for (double ce : c) {
    if (!(std::abs(ce) <= 1.0)) throw DomainError("cosine outside [-1, 1]: " + std::to_string(ce));
  }
  GramMatrix g;
  g.n = n;
  g.kind = kind;
  g.entries = SmallMat::Identity(n, n);
  const double sign = kind == GramKind::angles ? -1.0 : 1.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const auto [i, j] = kPairs[p];
    g.entries(i, j) = sign * c[p];
    g.entries(j, i) = g.entries(i, j);
  }
  g.valid = is_positive_definite(g.entries);
  return g;
}

bool is_positive_definite(const SmallMat& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (!(m(0, 0) > tol)) return false;
  if (n >= 2 && !(det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1)) > tol)) return false;
  if (n >= 3) {
    const int r[3] = {0, 1, 2};
    if (!(det3(m, r, r) > tol)) return false;
  }
  if (n == 4 && !(cofactors(m).det > tol)) return false;
  return true;
}

CofactorBundle cofactors(const SmallMat& m) {
  const int n = static_cast<int>(m.rows());
  CofactorBundle cb;
  cb.cof.resize(n, n);
  if (n == 3) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        int r[2], c[2];
        for (int a = 0, k = 0; a < 3; ++a)
          if (a != i) r[k++] = a;
        for (int a = 0, k = 0; a < 3; ++a)
          if (a != j) c[k++] = a;
        const double minor = det2(m(r[0], c[0]), m(r[0], c[1]), m(r[1], c[0]), m(r[1], c[1]));
        cb.cof(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor;
      }
    }
  } else if (n == 4) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        int r[3], c[3];
        others(4, i, r);
        others(4, j, c);
        cb.cof(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * det3(m, r, c);
      }
    }
  } else {
    throw DimensionError("cofactors: only n = 3, 4 supported");
  }
  cb.det = det_along_row(m, cb, 0);
  return cb;
}

double det_along_row(const SmallMat& m, const CofactorBundle& cb, int row) {
  double d = 0.0;
  for (int j = 0; j < m.cols(); ++j) d += m(row, j) * cb.cof(row, j);
  return d;
}

std::vector<double> cosine_law_dual(const GramMatrix& g) {
  if (!g.valid) throw DomainError("cosine_law_dual: Gram matrix is not positive definite");
  const CofactorBundle cb = cofactors(g);
  for (int i = 0; i < g.n; ++i) {
    if (cb.cof(i, i) <= kDegenerateTol) throw DegenerateError("cosine_law_dual: diagonal cofactor below tolerance");
  }
  const double sign = g.kind == GramKind::angles ? 1.0 : -1.0;
  const int count = g.n * (g.n - 1) / 2;
  std::vector<double> out(count);
  for (int p = 0; p < count; ++p) {
    const auto [i, j] = kPairs[p];
    out[p] = sign * cb.cof(i, j) / std::sqrt(cb.cof(i, i) * cb.cof(j, j));
  }
  return out;
}

GramMatrix dual_gram(const GramMatrix& g) {
  const auto c = cosine_law_dual(g);
  return gram_from_cosines(g.kind == GramKind::angles ? GramKind::lengths : GramKind::angles, c);
}

SmallVec duality_scale(const GramMatrix& g) {
  const CofactorBundle cb = cofactors(g);
  SmallVec d(g.n);
  for (int i = 0; i < g.n; ++i) {
    if (cb.cof(i, i) <= kDegenerateTol) throw DegenerateError("duality_scale: diagonal cofactor below tolerance");
    d(i) = std::sqrt(cb.det / cb.cof(i, i));
  }
  return d;
}

double duality_residual(const GramMatrix& g, const GramMatrix& gp) {
  if (g.n != gp.n) throw DimensionError("duality_residual: size mismatch");
  if (!g.valid || !gp.valid) throw DomainError("duality_residual: both Gram matrices must be valid");
  const CofactorBundle cb = cofactors(g);
  const SmallVec d = duality_scale(g);
  double r = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      // (G^{-1})_ij = cof(j, i) / det
      const double rhs = d(i) * d(j) * cb.cof(j, i) / cb.det;
      r = std::max(r, std::abs(gp.entries(i, j) - rhs));
    }
  }
  return r;
}

VertexRealization realize_vertices(const GramMatrix& gp) {
  const int n = gp.n;
  const SmallMat& a = gp.entries;
  SmallMat l = SmallMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > kDegenerateTol)) throw DegenerateError("realize_vertices: Cholesky pivot below tolerance");
    l(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }

  // L^{-1} by forward substitution; V^T = L so V^{-T} = L^{-1}.
  SmallMat linv = SmallMat::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      double s = i == col ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= l(i, k) * linv(k, col);
      linv(i, col) = s / l(i, i);
    }
  }

  VertexRealization out;
  out.V = l.transpose();
  out.W.resize(n, n);
  out.D.resize(n);
  for (int i = 0; i < n; ++i) {
    const double norm = linv.col(i).norm();
    out.D(i) = 1.0 / norm;
    out.W.col(i) = linv.col(i) * out.D(i);
  }
  return out;
}

}  // namespace sphlaw

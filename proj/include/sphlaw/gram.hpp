#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace sphlaw {

/// Square matrix of size 3 or 4 with fixed storage (no heap).
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

/// Which simplex data a Gram matrix encodes.
///
/// Angle Grams store -cos(alpha_ij) off the diagonal, length Grams store
/// +cos(l_ij). All constructors take raw cosines and apply the sign here.
enum class GramKind { angles, lengths };

struct GramMatrix {
  int n = 0;
  GramKind kind = GramKind::angles;
  SmallMat entries;
  /// Positive definite with unit diagonal (leading principal minors > 1e-12).
  bool valid = false;
};

struct CofactorBundle {
  SmallMat cof;  // cof(i, j) = (-1)^(i+j) * minor(i, j); symmetric for symmetric input
  double det = 0.0;
};

struct VertexRealization {
  SmallMat V;  // columns v_i: V^T V = G'
  SmallMat W;  // columns v_i^*: W^T W = G
  SmallVec D;  // V^T W = diag(D)
};

/// Builds G from n(n-1)/2 cosines in canonical pair order (3 -> n = 3,
/// 6 -> n = 4). Throws DomainError if any |c| > 1.
GramMatrix gram_from_cosines(GramKind kind, std::span<const double> c);

/// Leading-principal-minor test with threshold `tol`.
bool is_positive_definite(const SmallMat& m, double tol = 1e-12);

/// Closed-form cofactors for n <= 4. Works for any square input.
CofactorBundle cofactors(const SmallMat& m);
inline CofactorBundle cofactors(const GramMatrix& g) { return cofactors(g.entries); }

/// Determinant by cofactor expansion along `row`.
double det_along_row(const SmallMat& m, const CofactorBundle& cb, int row);

/// The general cofactor cosine law: dual cosines g_ij / sqrt(g_ii g_jj),
/// in canonical pair order.
///
/// For an angle Gram this is cos(l_ij). For a length Gram the same
/// normalized cofactor equals -cos(alpha_ij); the sign is undone so the
/// result is always a vector of raw cosines of the dual data.
std::vector<double> cosine_law_dual(const GramMatrix& g);

/// The dual Gram matrix: gram_from_cosines(opposite kind, cosine_law_dual(g)).
GramMatrix dual_gram(const GramMatrix& g);

/// Scale D of the duality G' = D G^{-1} D, recovered from the cofactors of
/// G as D_ii = sqrt(d / g_ii).
SmallVec duality_scale(const GramMatrix& g);

/// max |G' - D G^{-1} D| over all entries.
double duality_residual(const GramMatrix& g, const GramMatrix& gp);

/// Vertices and polar vertices realizing a length Gram G'.
/// V is the transposed Cholesky factor; W = V^{-T} D with unit columns.
VertexRealization realize_vertices(const GramMatrix& gp);

}  // namespace sphlaw

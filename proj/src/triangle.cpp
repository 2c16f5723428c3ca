#include "sphlaw/triangle.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphlaw/errors.hpp"

namespace sphlaw::triangle {
namespace {

constexpr double kSingularTol = 1e-12;

// (j, k) complementary to i.
constexpr int other1(int i) { return (i + 1) % 3; }
constexpr int other2(int i) { return (i + 2) % 3; }

void require_real(const CosTriple& x, const char* where) {
  for (double v : x) {
    if (!(std::abs(v) < 1.0)) throw DomainError(std::string(where) + ": |x_i| must be < 1");
  }
}

// 1 - v^2 without cancellation near |v| = 1.
double one_minus_sq(double v) { return (1.0 - v) * (1.0 + v); }

// 1 - |x|^2 - 2 x1 x2 x3 written as (1 - x2^2)(1 - x3^2) - (x1 + x2 x3)^2, which
// keeps its relative accuracy for nearly degenerate triangles.
double hk_denominator(const CosTriple& x) {
  const double a = x[0] + x[1] * x[2];
  return one_minus_sq(x[1]) * one_minus_sq(x[2]) - a * a;
}

}  // namespace

bool in_tau(const CosTriple& x) {
  for (double v : x)
    if (!(std::abs(v) < 1.0)) return false;
  const double a0 = std::acos(x[0]), a1 = std::acos(x[1]), a2 = std::acos(x[2]);
  const double sum = a0 + a1 + a2;
  const double pi = std::numbers::pi;
  return sum > pi && sum - 2.0 * a0 < pi && sum - 2.0 * a1 < pi && sum - 2.0 * a2 < pi;
}

bool in_tau_star(const CosTriple& y) {
  for (double v : y)
    if (!(std::abs(v) < 1.0)) return false;
  const double l0 = std::acos(y[0]), l1 = std::acos(y[1]), l2 = std::acos(y[2]);
  const double sum = l0 + l1 + l2;
  return sum < 2.0 * std::numbers::pi && sum - 2.0 * l0 > 0.0 && sum - 2.0 * l1 > 0.0 && sum - 2.0 * l2 > 0.0;
}

Tagged phi_tagged(const CosTriple& x) {
  require_real(x, "phi");
  Tagged out;
  const double s[3] = {std::sqrt(one_minus_sq(x[0])), std::sqrt(one_minus_sq(x[1])), std::sqrt(one_minus_sq(x[2]))};
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    out.value[i] = (x[i] + x[j] * x[k]) / (s[j] * s[k]);
  }
  out.outside_domain = !in_tau(x);
  return out;
}

CosTriple phi(const CosTriple& x) { return phi_tagged(x).value; }

CosTriple phi_inv(const CosTriple& y) {
  require_real(y, "phi_inv");
  CosTriple x;
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    x[i] = (y[i] - y[j] * y[k]) / std::sqrt(one_minus_sq(y[j]) * one_minus_sq(y[k]));
  }
  return x;
}

CosTriple phi_eps(const CosTriple& x, double eps) {
  for (double v : x) {
    if (!(std::abs(eps * v) < 1.0)) throw DomainError("phi_eps: |eps x_i| must be < 1");
  }
  CosTriple y;
  const double e2 = eps * eps;
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    y[i] = (x[i] + eps * x[j] * x[k]) / std::sqrt((1.0 - e2 * x[j] * x[j]) * (1.0 - e2 * x[k] * x[k]));
  }
  return y;
}

double gram_det(const CosTriple& x) { return hk_denominator(x); }

double gram_det_dual(const CosTriple& y) {
  const double b = y[0] - y[1] * y[2];
  return one_minus_sq(y[1]) * one_minus_sq(y[2]) - b * b;
}

TriangleInvariants invariants(const CosTriple& x) {
  const double q[3] = {one_minus_sq(x[0]), one_minus_sq(x[1]), one_minus_sq(x[2])};
  TriangleInvariants inv;
  inv.E = {q[0] / q[1], q[0] / q[2], q[1] / q[2]};
  inv.d = gram_det(x);
  inv.gamma2 = q[0] * q[1] * q[2];
  return inv;
}

double sine_law_residual(const CosTriple& x) {
  const CosTriple y = phi(x);
  const TriangleInvariants inv = invariants(x);
  const double d = inv.d;
  const double dp = gram_det_dual(y);
  const double gp2 = one_minus_sq(y[0]) * one_minus_sq(y[1]) * one_minus_sq(y[2]);
  const double ratio = d / inv.gamma2;
  double r = std::abs(ratio - gp2 / dp);
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    const double qx_j = one_minus_sq(x[j]), qx_k = one_minus_sq(x[k]);
    const double qy_i = one_minus_sq(y[i]);
    r = std::max(r, std::abs(d - qy_i * qx_j * qx_k));
    r = std::max(r, std::abs(dp - one_minus_sq(x[i]) * one_minus_sq(y[j]) * one_minus_sq(y[k])));
    r = std::max(r, std::abs(qy_i / one_minus_sq(x[i]) - ratio));
  }
  return r;
}

CosTriple hk_step(const CosTriple& x) {
  const double den = hk_denominator(x);
  if (!(std::abs(den) > kSingularTol)) throw SingularError("hk_step: denominator vanishes");
  // phi applied twice: xt_i = (a_i q_i + a_j a_k) / d with a_i = x_i + x_j x_k,
  // q_i = 1 - x_i^2; equal to the expanded polynomial form but better conditioned.
  double a[3], q[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = x[i] + x[other1(i)] * x[other2(i)];
    q[i] = one_minus_sq(x[i]);
  }
  CosTriple xt;
  for (int i = 0; i < 3; ++i) xt[i] = (a[i] * q[i] + a[other1(i)] * a[other2(i)]) / den;
  return xt;
}

double hk_implicit_residual(const CosTriple& x, const CosTriple& xt) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    r = std::max(r, std::abs(xt[i] - x[i] - (xt[j] * x[k] + x[j] * xt[k])));
  }
  return r;
}

CosTriple switched_sides(const CosTriple& x) { return hk_step(x); }

CosTriple transform(Transform kind, const CosTriple& x) {
  switch (kind) {
    case Transform::jonas:
      return -hk_step(x);
    case Transform::angle_flip:
      // -jonas(-x)
      return hk_step(-x);
    default:
      break;
  }
  if (!in_tau(x)) throw DomainError("transform: input angles do not form a spherical triangle");
  const CosTriple y = phi(x);
  switch (kind) {
    case Transform::polar:
      return -y;
    case Transform::switch_map:
      if (!in_tau(y)) throw ExistenceError("switch: the sides are not the angles of a spherical triangle");
      return y;
    case Transform::side_flip:
      if (!in_tau(y)) throw ExistenceError("side flip: the flipped sides do not form a spherical triangle");
      return -hk_step(x);
    default:
      break;
  }
  throw Error("transform: unknown kind");
}

std::array<double, 3> jonas_invariants(const CosTriple& x) {
  const double d = gram_det(x);
  std::array<double, 3> s{};
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    s[i] = d / (one_minus_sq(x[j]) * one_minus_sq(x[k]));
  }
  return s;
}

Jacobian3 jacobian_phi(const CosTriple& x) {
  if (!in_tau(x)) throw DomainError("jacobian_phi: x outside tau");
  const double q[3] = {one_minus_sq(x[0]), one_minus_sq(x[1]), one_minus_sq(x[2])};
  Jacobian3 jac;
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    jac.m(i, i) = 1.0 / std::sqrt(q[j] * q[k]);
    jac.m(i, j) = (x[k] + x[i] * x[j]) / (q[j] * std::sqrt(q[j] * q[k]));
    jac.m(i, k) = (x[j] + x[i] * x[k]) / (q[k] * std::sqrt(q[j] * q[k]));
  }
  jac.det = jac.m.determinant();
  return jac;
}

double volume_density(const CosTriple& x, int which) {
  if (which < 0 || which >= kVolumeDensityCount) throw DimensionError("volume_density: index out of range");
  const int i = which % 3;
  if (which < 3) return one_minus_sq(x[other1(i)]) * one_minus_sq(x[other2(i)]);
  const double q = one_minus_sq(x[i]);
  return q * q;
}

Eigen::Matrix3d poisson_bracket(const PoissonCoeffs& c, const CosTriple& x) {
  Eigen::Matrix3d p = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    const double v = c.C[i] * x[k] * one_minus_sq(x[j]) - c.C[j] * x[k] * one_minus_sq(x[i]);
    p(i, j) = v;
    p(j, i) = -v;
  }
  return p;
}

std::array<Eigen::Matrix3d, 3> poisson_bracket_gradient(const PoissonCoeffs& c, const CosTriple& x) {
  std::array<Eigen::Matrix3d, 3> g;
  for (auto& m : g) m.setZero();
  for (int i = 0; i < 3; ++i) {
    const int j = other1(i), k = other2(i);
    const double dk = c.C[i] * one_minus_sq(x[j]) - c.C[j] * one_minus_sq(x[i]);
    const double di = 2.0 * c.C[j] * x[i] * x[k];
    const double dj = -2.0 * c.C[i] * x[j] * x[k];
    g[k](i, j) = dk;
    g[i](i, j) = di;
    g[j](i, j) = dj;
    g[k](j, i) = -dk;
    g[i](j, i) = -di;
    g[j](j, i) = -dj;
  }
  return g;
}

double jacobi_identity_residual(const PoissonCoeffs& c, const CosTriple& x) {
  const Eigen::Matrix3d p = poisson_bracket(c, x);
  const auto grad = poisson_bracket_gradient(c, x);
  // {x_a, {x_b, x_c}} = sum_l P_al d_l P_bc
  const auto nested = [&](int a, int b, int cc) {
    double s = 0.0;
    for (int l = 0; l < 3; ++l) s += p(a, l) * grad[l](b, cc);
    return s;
  };
  return std::abs(nested(0, 1, 2) + nested(1, 2, 0) + nested(2, 0, 1));
}

double poisson_map_residual(const PoissonCoeffs& c, const CosTriple& x) {
  const Jacobian3 jac = jacobian_phi(x);
  const Eigen::Matrix3d lhs = jac.m * poisson_bracket(c, x) * jac.m.transpose();
  const Eigen::Matrix3d rhs = poisson_bracket(c, phi(x));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace sphlaw::triangle

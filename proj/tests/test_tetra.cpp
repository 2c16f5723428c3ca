#include <Eigen/LU>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sphlaw/errors.hpp"
#include "sphlaw/gram.hpp"
#include "sphlaw/numutil.hpp"
#include "sphlaw/tetra.hpp"
#include "sphlaw/triangle.hpp"

using namespace sphlaw;
using namespace sphlaw::tetra;

namespace {

CosSextuple splat(double a) {
  CosSextuple r;
  for (double& v : r) v = a;
  return r;
}

const CosSextuple kZero = splat(0.0);
const CosSextuple kHalf = splat(-0.5);

std::array<double, 6> arccos_all(const CosSextuple& x) {
  std::array<double, 6> a{};
  for (int i = 0; i < 6; ++i) a[i] = std::acos(x[i]);
  return a;
}

}  // namespace

TEST_CASE("psi: closed forms") {
  CHECK(psi(kZero) == kZero);
  CHECK(max_abs_diff(psi(kHalf), splat(-0.25)) <= 1e-15);
  CosSextuple c = kHalf;
  for (int n = 0; n <= 20; ++n) {
    CHECK(std::abs(c[0] + 1.0 / (2 * n + 2)) <= 1e-14);
    c = psi(c);
  }
}

TEST_CASE("psi: errors") {
  CHECK_THROWS_AS(psi(splat(1.0 / 3)), DomainError);
  CHECK_THROWS_AS(psi(splat(0.9)), DomainError);
}

TEST_CASE("property: psi equals the cofactor cosine law and round-trips") {
  for (const CosSextuple& x : num::sample_tetra(31, 1000)) {
    const CosSextuple y = psi(x);
    const auto ref = cosine_law_dual(gram_from_cosines(GramKind::angles, x.span()));
    for (int i = 0; i < 6; ++i) CHECK(std::abs(y[i] - ref[i]) <= 1e-13);
    CHECK(max_abs_diff(psi_inv(y), x) <= 1e-10);
  }
}

TEST_CASE("tetra_invariants: closed forms") {
  for (const CosSextuple& x : {kZero, kHalf}) {
    const auto inv = tetra_invariants(x).as_array();
    CHECK(inv[0] == doctest::Approx(1.0));
    CHECK(inv[1] == doctest::Approx(1.0));
    CHECK(std::abs(inv[2]) <= 1e-15);
    CHECK(std::abs(inv[3]) <= 1e-15);
  }
}

TEST_CASE("property: integrals conserved along small-amplitude orbits") {
  for (const CosSextuple& x0 : num::sample_tetra(32, 10, 1e-4)) {
    const auto i0 = tetra_invariants(x0).as_array();
    CosSextuple x = x0;
    for (int n = 0; n < 1000; ++n) {
      x = psi(x);
      const auto in = tetra_invariants(x).as_array();
      for (int k = 0; k < 4; ++k) REQUIRE(std::abs(in[k] - i0[k]) <= 1e-10 * std::max(1.0, std::abs(i0[k])));
    }
  }
}

TEST_CASE("property: single-step conservation on generic data") {
  for (const CosSextuple& x : num::sample_tetra(33, 1000)) {
    const auto a = tetra_invariants(x).as_array();
    const auto b = tetra_invariants(psi(x)).as_array();
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-11 * std::max(1.0, std::abs(a[k])));
  }
}

TEST_CASE("sine laws") {
  const SineLawResiduals z = sine_law_residuals(kZero, psi(kZero));
  CHECK(z.products == 0.0);
  CHECK(z.cross == 0.0);
  CHECK(z.ratio == 1.0);
  const SineLawResiduals h = sine_law_residuals(kHalf, psi(kHalf));
  CHECK(h.products <= 1e-13);
  CHECK(h.cross <= 1e-13);
  for (const CosSextuple& x : num::sample_tetra(34, 1000)) {
    const SineLawResiduals r = sine_law_residuals(x, psi(x));
    CHECK(r.products <= 1e-10);
    CHECK(r.cross <= 1e-10);
  }
}

TEST_CASE("link_triangle") {
  const LinkTriangle l4 = link_triangle(kZero, 4);
  CHECK(l4.labels == std::array<int, 3>{1, 2, 3});
  CHECK(l4.planar_cosines == CosTriple{});
  const LinkTriangle l1 = link_triangle(kHalf, 1);
  CHECK(l1.labels == std::array<int, 3>{2, 3, 4});
  for (double v : l1.planar_cosines) CHECK(v == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(link_triangle(kZero, 0), DimensionError);
  for (const CosSextuple& x : num::sample_tetra(35, 200))
    for (int m = 1; m <= 4; ++m) CHECK(triangle::in_tau_star(link_triangle(x, m).planar_cosines));
}

TEST_CASE("two_stage_solve") {
  const TwoStageResult z = two_stage_solve(kZero);
  CHECK(z.values == kZero);
  CHECK(z.discrepancy == 0.0);
  const TwoStageResult h = two_stage_solve(kHalf);
  CHECK(max_abs_diff(h.values, splat(-0.25)) <= 1e-13);
  CHECK(h.discrepancy <= 1e-13);
  for (const CosSextuple& x : num::sample_tetra(36, 1000)) CHECK(max_abs_diff(two_stage_solve(x).values, psi(x)) <= 1e-10);
}

TEST_CASE("jacobian_psi: closed forms") {
  const Jacobian6 id = jacobian_psi(kZero);
  CHECK((id.m - Matrix6::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(id.det == doctest::Approx(1.0));
  const Jacobian6 h = jacobian_psi(kHalf);
  const Eigen::MatrixXd fd = num::fd_jacobian(
      [](const Eigen::VectorXd& v) { return num::to_eigen(psi(num::from_eigen<6>(v))); }, num::to_eigen(kHalf));
  CHECK(std::abs(h.det - fd.determinant()) <= 1e-7);
}

TEST_CASE("property: Jacobian determinant, volume form and finite differences") {
  for (const CosSextuple& x : num::sample_tetra(37, 1000)) {
    const Jacobian6 j = jacobian_psi(x);
    CHECK(std::abs(j.det / jacobian_det_factorized(x) - 1.0) <= 1e-9);
    CHECK(std::abs(j.m.determinant() / j.det - 1.0) <= 1e-9);
    const CosSextuple y = psi(x);
    for (int p = 0; p < 3; ++p) CHECK(std::abs(j.det * volume_density(x, p) / volume_density(y, p) - 1.0) <= 1e-9);
    CHECK(ggs_residual(x) <= 1e-10);
  }
  for (const CosSextuple& x : num::sample_tetra(38, 100)) {
    const Eigen::MatrixXd fd = num::fd_jacobian(
        [](const Eigen::VectorXd& v) { return num::to_eigen(psi(num::from_eigen<6>(v))); }, num::to_eigen(x));
    CHECK((jacobian_psi(x).m - fd).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("ggs identity: closed forms") {
  CHECK(ggs_residual(kZero) == 0.0);
  CHECK(ggs_residual(kHalf) <= 1e-12);
}

TEST_CASE("Schlafli matrix is symmetric") {
  CHECK(schlafli_symmetry_residual(arccos_all(kZero)) <= 1e-12);
  CHECK(schlafli_symmetry_residual(arccos_all(kHalf)) <= 1e-9);
  for (const CosSextuple& x : num::sample_tetra(39, 200)) CHECK(schlafli_symmetry_residual(arccos_all(x)) <= 1e-8);
}

#include <cmath>
#include <limits>

#include "doctest.h"
#include "sphlaw/darboux.hpp"
#include "sphlaw/errors.hpp"
#include "sphlaw/numutil.hpp"
#include "sphlaw/tetra.hpp"
#include "sphlaw/triangle.hpp"

using namespace sphlaw;
using namespace sphlaw::darboux;

namespace {

FaceMatrix<4> ordered_from(const CosSextuple& x) {
  FaceMatrix<4> m{};
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kPairs[p];
    m[i][j] = m[j][i] = x[p];
  }
  return m;
}

}  // namespace

TEST_CASE("variant names round-trip") {
  for (Variant v : {Variant::symmetric, Variant::general, Variant::alt}) CHECK(variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(variant_from_string("bogus"), DomainError);
}

TEST_CASE("darboux_step: symmetric closed forms") {
  const CubeFaceState z = darboux_step(CubeFaceState::symmetric(0, 0, 0));
  CHECK(z.get(0, 1) == 0.0);
  CHECK(z.get(0, 2) == 0.0);
  CHECK(z.get(1, 2) == 0.0);
  const CubeFaceState h = darboux_step(CubeFaceState::symmetric(-0.5, -0.5, -0.5));
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    CHECK(h.get(i, j) == doctest::Approx(-1.0 / 3).epsilon(1e-15));
    CHECK(h.get(j, i) == h.get(i, j));
  }
}

TEST_CASE("darboux_step: symmetric variant is phi") {
  for (const CosTriple& x : num::sample_tau(41, 200)) {
    const CubeFaceState out = darboux_step(CubeFaceState::symmetric(x[0], x[1], x[2]));
    const CosTriple y = triangle::phi(x);
    CHECK(out.get(0, 1) == doctest::Approx(y[0]).epsilon(1e-15));
    CHECK(out.get(0, 2) == doctest::Approx(y[1]).epsilon(1e-15));
    CHECK(out.get(1, 2) == doctest::Approx(y[2]).epsilon(1e-15));
  }
}

TEST_CASE("darboux_step: general variant reduces to the symmetric one") {
  for (const CosTriple& x : num::sample_tau(42, 1000)) {
    const CubeFaceState s = darboux_step(CubeFaceState::symmetric(x[0], x[1], x[2]));
    const CubeFaceState g = darboux_step(CubeFaceState::ordered(Variant::general, x[0], x[1], x[2]));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(std::abs(g.get(i, j) - s.get(i, j)) <= 1e-14);
    CHECK(step_residual(CubeFaceState::symmetric(x[0], x[1], x[2]), s) <= 1e-14);
  }
}

TEST_CASE("darboux_step: domain errors") {
  CHECK_THROWS_AS(darboux_step(CubeFaceState::symmetric(0.0, 1.0, 0.0)), DomainError);
}

TEST_CASE("consistency_4d: closed forms") {
  CosSextuple zero{};
  const Consistency4D z = consistency_4d(zero);
  CHECK(z.residual == 0.0);
  CHECK(z.final_values == zero);

  CosSextuple half;
  for (double& v : half) v = -0.5;
  const Consistency4D h = consistency_4d(half);
  CHECK(h.residual <= 1e-13);
  for (double v : h.final_values) CHECK(v == doctest::Approx(-0.25).epsilon(1e-14));
  // shifts along a direction lying on the pair are undefined
  CHECK(std::isnan(h.shifted[0][0]));
  CHECK_FALSE(std::isnan(h.shifted[2][0]));
}

TEST_CASE("consistency_4d: admission modes") {
  CosSextuple bad;
  for (double& v : bad) v = 1.0 / 3;
  CHECK_THROWS_AS(consistency_4d(bad), DomainError);
}

TEST_CASE("property: 4D consistency and agreement with psi") {
  for (const CosSextuple& x : num::sample_tetra(43, 1000)) {
    const Consistency4D c = consistency_4d(x);
    CHECK(c.residual <= 1e-10);
    CHECK(max_abs_diff(c.final_values, tetra::psi(x)) <= 1e-10);
  }
}

TEST_CASE("property: general variant is 4D consistent") {
  num::Rng rng = num::stream(44, 0);
  for (int n = 0; n < 300; ++n) {
    FaceMatrix<4> init{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) init[i][j] = rng.uniform(-0.3, 0.3);
    const OrderedConsistency4D r = consistency_4d_ordered(Variant::general, init);
    CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("ordered harness on symmetric data") {
  for (const CosSextuple& x : num::sample_tetra(45, 100)) {
    const OrderedConsistency4D g = consistency_4d_ordered(Variant::general, ordered_from(x));
    CHECK(g.symmetry_defect <= 1e-14);
    const CosSextuple y = tetra::psi(x);
    for (int p = 0; p < 6; ++p) {
      const auto [i, j] = kPairs[p];
      CHECK(std::abs(g.final_values[i][j] - y[p]) <= 1e-10);
    }
    // the alternative form is consistent but leaves the symmetric reduction
    const OrderedConsistency4D a = consistency_4d_ordered(Variant::alt, ordered_from(x));
    CHECK(std::isfinite(a.residual));
    CHECK(std::isfinite(a.symmetry_defect));
  }
}

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sphlaw/lattice.hpp"
#include "sphlaw/numutil.hpp"

using namespace sphlaw;
using namespace sphlaw::darboux;

namespace {

Plane filled(int rows, int cols, double v) {
  return Plane{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols, v)};
}

BoundaryData constant_boundary(Extent e, double v, Variant var = Variant::symmetric) {
  BoundaryData b;
  b.extent = e;
  b.variant = var;
  b.xy = filled(e.nx, e.ny, v);
  b.xz = filled(e.nx, e.nz, v);
  b.yz = filled(e.ny, e.nz, v);
  return b;
}

double max_interior(const LatticeField& f, double target) {
  double m = 0.0;
  for (Slot s : {Slot::x12, Slot::x13, Slot::x23}) {
    const auto sh = f.shape(s);
    for (int i = 0; i < sh[0]; ++i)
      for (int j = 0; j < sh[1]; ++j)
        for (int k = 0; k < sh[2]; ++k) m = std::max(m, std::abs(f.at(s, i, j, k) - target));
  }
  return m;
}

}  // namespace

TEST_CASE("constant zero boundary gives the zero field") {
  const LatticeField f = serial::lattice_evolve(constant_boundary({3, 4, 2}, 0.0));
  CHECK(max_interior(f, 0.0) == 0.0);
  CHECK(serial::lattice_residual(f) == 0.0);
}

TEST_CASE("single cube with -1/2 boundary") {
  const LatticeField f = serial::lattice_evolve(constant_boundary({1, 1, 1}, -0.5));
  CHECK(f.at(Slot::x12, 0, 0, 1) == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(f.at(Slot::x13, 0, 1, 0) == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(f.at(Slot::x23, 1, 0, 0) == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(f.at(Slot::x12, 0, 0, 0) == -0.5);
}

TEST_CASE("field shapes") {
  const LatticeField f(Extent{2, 3, 4}, Variant::general);
  CHECK(f.shape(Slot::x12) == std::array<int, 3>{2, 3, 5});
  CHECK(f.shape(Slot::x13) == std::array<int, 3>{2, 4, 4});
  CHECK(f.shape(Slot::x23) == std::array<int, 3>{3, 3, 4});
  CHECK(f.has_slot(Slot::x32));
  CHECK_FALSE(LatticeField(Extent{1, 1, 1}, Variant::symmetric).has_slot(Slot::x21));
}

TEST_CASE("make_field rejects mismatched planes") {
  BoundaryData b = constant_boundary({2, 2, 2}, 0.1);
  b.xz = filled(2, 3, 0.1);
  CHECK_THROWS_AS(make_field(b), DimensionError);
}

TEST_CASE("random 8x8x8 boundary: completes, small residual, serial == parallel") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const BoundaryData b = random_boundary({8, 8, 8}, Variant::symmetric, 0.1, seed);
    const LatticeField s = serial::lattice_evolve(b);
    const LatticeField p = parallel::lattice_evolve(b);
    CHECK(s == p);
    CHECK(serial::lattice_residual(s) <= 1e-12);
    CHECK(parallel::lattice_residual(p) == serial::lattice_residual(s));
  }
}

TEST_CASE("general variant with symmetric boundary reduces to the symmetric field") {
  const BoundaryData bs = random_boundary({5, 4, 3}, Variant::symmetric, 0.1, 7);
  BoundaryData bg = bs;
  bg.variant = Variant::general;
  const LatticeField s = serial::lattice_evolve(bs);
  const LatticeField g = serial::lattice_evolve(bg);
  double m = 0.0;
  for (auto [a, r] : {std::pair{Slot::x12, Slot::x21}, {Slot::x13, Slot::x31}, {Slot::x23, Slot::x32}}) {
    const auto sh = s.shape(a);
    for (int i = 0; i < sh[0]; ++i)
      for (int j = 0; j < sh[1]; ++j)
        for (int k = 0; k < sh[2]; ++k) {
          m = std::max(m, std::abs(g.at(a, i, j, k) - s.at(a, i, j, k)));
          m = std::max(m, std::abs(g.at(r, i, j, k) - s.at(a, i, j, k)));
        }
  }
  CHECK(m <= 1e-14);
}

TEST_CASE("general variant with independent reversed planes") {
  const BoundaryData b = random_boundary({4, 4, 4}, Variant::general, 0.1, 9, true);
  const LatticeField s = serial::lattice_evolve(b);
  CHECK(s == parallel::lattice_evolve(b));
  CHECK(serial::lattice_residual(s) <= 1e-12);
}

TEST_CASE("fill order: any valid order gives the same field") {
  const BoundaryData b = random_boundary({3, 3, 3}, Variant::symmetric, 0.1, 11);
  const LatticeField ref = serial::lattice_evolve(b);
  std::vector<Corner> order = lexicographic_order(b.extent);
  // sort by wavefront, reversing lexicographic order within each front
  std::stable_sort(order.begin(), order.end(), [](const Corner& a, const Corner& c) {
    const int sa = a.i + a.j + a.k, sc = c.i + c.j + c.k;
    if (sa != sc) return sa < sc;
    return std::tie(a.i, a.j, a.k) > std::tie(c.i, c.j, c.k);
  });
  CHECK(order != lexicographic_order(b.extent));
  CHECK(serial::lattice_evolve_in_order(b, order) == ref);

  // z-major order is also causal
  std::vector<Corner> zmajor;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) zmajor.push_back({i, j, k});
  CHECK(serial::lattice_evolve_in_order(b, zmajor) == ref);
}

TEST_CASE("fill order: invalid orders are rejected") {
  const BoundaryData b = random_boundary({2, 2, 2}, Variant::symmetric, 0.1, 12);
  std::vector<Corner> order = lexicographic_order(b.extent);
  std::vector<Corner> reversed(order.rbegin(), order.rend());
  CHECK_THROWS_AS(serial::lattice_evolve_in_order(b, reversed), ConsistencyError);
  std::vector<Corner> missing(order.begin(), order.end() - 1);
  CHECK_THROWS_AS(serial::lattice_evolve_in_order(b, missing), ConsistencyError);
  std::vector<Corner> repeated = order;
  repeated.back() = order.front();
  CHECK_THROWS_AS(serial::lattice_evolve_in_order(b, repeated), ConsistencyError);
  std::vector<Corner> outside = order;
  outside.back() = Corner{5, 0, 0};
  CHECK_THROWS_AS(serial::lattice_evolve_in_order(b, outside), ConsistencyError);
}

TEST_CASE("domain failure reports the first failing cube") {
  // the first cube maps (0.9, 0.9, 0.9) to 9; its neighbour along x then fails
  const BoundaryData b = constant_boundary({2, 1, 1}, 0.9);
  for (int mode = 0; mode < 2; ++mode) {
    try {
      if (mode == 0) (void)serial::lattice_evolve(b);
      else (void)parallel::lattice_evolve(b);
      FAIL("expected LatticeDomainError");
    } catch (const LatticeDomainError& e) {
      CHECK(e.corner == Corner{1, 0, 0});
    }
  }
}

TEST_CASE("JSON round trip") {
  const BoundaryData b = random_boundary({2, 3, 2}, Variant::symmetric, 0.1, 13);
  const LatticeField f = serial::lattice_evolve(b);
  std::stringstream ss;
  write_field_json(ss, b, f, serial::lattice_residual(f));
  const nlohmann::json doc = nlohmann::json::parse(ss.str());
  CHECK(doc["extent"] == nlohmann::json::array({2, 3, 2}));
  CHECK(doc["variant"] == "symmetric");
  CHECK(doc["interior"]["x12"].size() == 2);
  CHECK(doc["interior"]["x12"][0][0].size() == 3);
  CHECK(doc["interior"]["x12"][1][2][2].get<double>() == f.at(Slot::x12, 1, 2, 2));

  std::istringstream in(ss.str());
  const BoundaryData back = read_boundary_json(in);
  CHECK(back.extent == b.extent);
  CHECK(back.variant == b.variant);
  CHECK(back.xy.values == b.xy.values);
  CHECK(back.xz.values == b.xz.values);
  CHECK(back.yz.values == b.yz.values);
  CHECK(serial::lattice_evolve(back) == f);
}

TEST_CASE("JSON input validation") {
  const auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_boundary_json(in);
  };
  CHECK_NOTHROW(parse(R"({"extent":[1,1,1],"planes":{"xy":[[0]],"xz":[[0]],"yz":[[0]]}})"));
  CHECK(parse(R"({"extent":[1,1,1],"variant":"general","planes":{"xy":[[0]],"xz":[[0]],"yz":[[0]]}})").variant ==
        Variant::general);
  CHECK_THROWS_AS(parse(R"({"extent":[1,1,1],"bogus":1,"planes":{"xy":[[0]],"xz":[[0]],"yz":[[0]]}})"), Error);
  CHECK_THROWS_AS(parse(R"({"extent":[1,1],"planes":{"xy":[[0]],"xz":[[0]],"yz":[[0]]}})"), Error);
  CHECK_THROWS_AS(parse(R"({"extent":[1,1,1],"planes":{"xy":[[0,1]],"xz":[[0]],"yz":[[0]]}})"), Error);
  CHECK_THROWS_AS(parse("not json"), Error);
}

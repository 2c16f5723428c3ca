#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

namespace sphlaw {

/// A point of the phase space of the cosine-law maps: N cosines in (-1, 1).
///
/// N = 3 is a triangle (entries indexed 1..3 in the math, 0..2 here),
/// N = 6 is a tetrahedron with entries in the canonical pair order
/// (12, 13, 23, 14, 24, 34).
template <std::size_t N>
struct CosVector {
  std::array<double, N> v{};

  static constexpr std::size_t size() { return N; }

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  auto begin() { return v.begin(); }
  auto end() { return v.end(); }
  auto begin() const { return v.begin(); }
  auto end() const { return v.end(); }

  std::span<const double, N> span() const { return std::span<const double, N>(v); }

  friend bool operator==(const CosVector&, const CosVector&) = default;

  friend CosVector operator-(const CosVector& a) {
    CosVector r;
    for (std::size_t i = 0; i < N; ++i) r.v[i] = -a.v[i];
    return r;
  }
};

using CosTriple = CosVector<3>;
using CosSextuple = CosVector<6>;

template <std::size_t N>
double max_abs_diff(const CosVector<N>& a, const CosVector<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <std::size_t N>
double max_abs(const CosVector<N>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

/// Canonical pair order for n = 3 and n = 4 (0-based vertex labels):
/// (0,1) (0,2) (1,2) (0,3) (1,3) (2,3).
inline constexpr std::array<std::pair<int, int>, 6> kPairs{{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}}};

/// Position of the unordered pair {i, j} (0-based, i != j) in kPairs.
constexpr int pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  // j == 1: (0,1); j == 2: (0,2),(1,2); j == 3: (0,3),(1,3),(2,3)
  return j * (j - 1) / 2 + i;
}

/// Pair index of the complement {k, m} of pair p in {0,1,2,3}.
constexpr int complement_pair(int p) { return 5 - p; }

inline constexpr double kDegenerateTol = 1e-12;

}  // namespace sphlaw

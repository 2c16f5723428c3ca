#include "sphlaw/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "sphlaw/darboux.hpp"
#include "sphlaw/errors.hpp"
#include "sphlaw/euler_flow.hpp"
#include "sphlaw/gram.hpp"
#include "sphlaw/lattice.hpp"
#include "sphlaw/tetra.hpp"
#include "sphlaw/triangle.hpp"

namespace sphlaw::verify {
namespace {

using num::Report;
using Vec = std::vector<double>;
namespace tri = triangle;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ctx {
  const RunOptions& opt;
  const SuiteInfo& info;
  std::uint64_t base;

  int n() const { return std::max(1, opt.samples); }
  std::uint64_t seed(int k) const { return base + static_cast<std::uint64_t>(k); }

  Report sweep(long count, const num::ResidualFn& r, const num::InputFn& in = {}) const {
    return opt.parallel ? num::parallel::sweep(info.name, info.tolerance, count, r, in)
                        : num::serial::sweep(info.name, info.tolerance, count, r, in);
  }
};

template <std::size_t N>
Vec vec(const CosVector<N>& x) {
  return Vec(x.begin(), x.end());
}

template <std::size_t N>
double max_abs_diff(const CosVector<N>& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double mat_max(const SmallMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Points x in tau with phi(x) in tau as well.
std::vector<CosTriple> sample_tau_twice(std::uint64_t seed, int count) {
  std::vector<CosTriple> out;
  for (std::uint64_t round = 0; static_cast<int>(out.size()) < count; ++round) {
    for (const CosTriple& x : num::sample_tau(seed + 7919 * round, count)) {
      if (static_cast<int>(out.size()) == count) break;
      if (tri::in_tau(tri::phi(x))) out.push_back(x);
    }
  }
  return out;
}

// ---------------------------------------------------------------- gram_core

double gram_round_trip_one(std::span<const double> x) {
  const GramMatrix g = gram_from_cosines(GramKind::angles, x);
  const Vec y = cosine_law_dual(g);
  const GramMatrix gp = gram_from_cosines(GramKind::lengths, y);
  if (!gp.valid) return kInf;
  const Vec back = cosine_law_dual(gp);
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(back[i] - x[i]));
  return r;
}

double gram_realize_one(std::span<const double> x) {
  const GramMatrix g = gram_from_cosines(GramKind::angles, x);
  const GramMatrix gp = dual_gram(g);
  const VertexRealization vr = realize_vertices(gp);
  double r = 0.0;
  for (int c = 0; c < g.n; ++c) {
    r = std::max(r, std::abs(vr.V.col(c).norm() - 1.0));
    r = std::max(r, std::abs(vr.W.col(c).norm() - 1.0));
  }
  const SmallMat vtv = vr.V.transpose() * vr.V;
  const SmallMat wtw = vr.W.transpose() * vr.W;
  SmallMat vtw = vr.V.transpose() * vr.W;
  for (int i = 0; i < g.n; ++i) vtw(i, i) -= vr.D[i];
  r = std::max(r, mat_max(vtv - gp.entries));
  r = std::max(r, mat_max(wtw - g.entries));
  r = std::max(r, mat_max(vtw));
  return r;
}

template <class One>
Report gram_pair_suite(const Ctx& c, One one) {
  const auto t = num::sample_tau(c.seed(0), c.n());
  const auto q = num::sample_tetra(c.seed(1), c.n());
  return c.sweep(
      c.n(), [&](long i) { return std::max(one(t[i].span()), one(q[i].span())); },
      [&](long i) {
        Vec v = vec(t[i]);
        v.insert(v.end(), q[i].begin(), q[i].end());
        return v;
      });
}

Report gram_round_trip(const Ctx& c) { return gram_pair_suite(c, gram_round_trip_one); }

Report gram_duality(const Ctx& c) {
  return gram_pair_suite(c, [](std::span<const double> x) {
    const GramMatrix g = gram_from_cosines(GramKind::angles, x);
    return duality_residual(g, dual_gram(g));
  });
}

Report gram_realize(const Ctx& c) { return gram_pair_suite(c, gram_realize_one); }

// ----------------------------------------------------------------- triangle

template <class F>
Report tau_suite(const Ctx& c, F f, double amplitude = num::kDefaultTauAmplitude) {
  const auto x = num::sample_tau(c.seed(0), c.n(), amplitude);
  return c.sweep(
      c.n(), [&](long i) { return f(x[i]); }, [&](long i) { return vec(x[i]); });
}

Report triangle_dual_path(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) {
    return max_abs_diff(tri::phi(x), cosine_law_dual(gram_from_cosines(GramKind::angles, x.span())));
  });
}

Report triangle_fixed_point(const Ctx& c) {
  return c.sweep(1, [](long) {
    const CosTriple z{};
    return std::max({max_abs(tri::phi(z)), max_abs(tri::phi_inv(z)), max_abs(tri::hk_step(z)),
                     max_abs(tri::transform(tri::Transform::jonas, z))});
  });
}

Report triangle_conjugation(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) {
    const CosTriple y = tri::phi(x);
    return max_abs_diff(tri::phi_inv(y), -tri::phi(-y));
  });
}

Report triangle_round_trip(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) { return max_abs_diff(tri::phi_inv(tri::phi(x)), x); });
}

Report triangle_hk_square(const Ctx& c) {
  const auto x = sample_tau_twice(c.seed(0), c.n());
  return c.sweep(
      c.n(), [&](long i) { return max_abs_diff(tri::phi(tri::phi(x[i])), tri::hk_step(x[i])); },
      [&](long i) { return vec(x[i]); });
}

Report triangle_hk_implicit(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) { return tri::hk_implicit_residual(x, tri::hk_step(x)); });
}

Report triangle_invariant_identities(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) {
    const tri::TriangleInvariants inv = tri::invariants(x);
    if (!(inv.d > 0.0)) return kInf;
    return std::abs(inv.E[0] * inv.E[2] / inv.E[1] - 1.0);  // E12 E23 E31
  });
}

Report triangle_sine_law(const Ctx& c) { return tau_suite(c, tri::sine_law_residual); }

enum class OrbitMap { phi, hk, jonas, psi };

struct Orbit {
  OrbitMap map;
  Vec x0;
};

std::array<double, 4> orbit_integrals(OrbitMap m, const Vec& x) {
  if (m == OrbitMap::psi) {
    CosSextuple s;
    std::copy(x.begin(), x.end(), s.begin());
    return tetra::tetra_invariants(s).as_array();
  }
  const auto E = tri::invariants(CosTriple{x[0], x[1], x[2]}).E;
  return {E[0], E[1], E[2], 0.0};
}

Vec orbit_step(OrbitMap m, const Vec& x) {
  if (m == OrbitMap::psi) {
    CosSextuple s;
    std::copy(x.begin(), x.end(), s.begin());
    return vec(tetra::psi(s));
  }
  const CosTriple t{x[0], x[1], x[2]};
  switch (m) {
    case OrbitMap::phi:
      return vec(tri::phi(t));
    case OrbitMap::hk:
      return vec(tri::hk_step(t));
    default:
      return vec(tri::transform(tri::Transform::jonas, t));
  }
}

constexpr int kOrbitSteps = 1000;

// Relative integral drift along an orbit of at most kOrbitSteps steps. The
// orbit ends early when the next point is outside the domain of the map.
double orbit_drift(const Orbit& o, int& length) {
  const auto I0 = orbit_integrals(o.map, o.x0);
  Vec x = o.x0;
  double drift = 0.0;
  length = 0;
  for (; length < kOrbitSteps; ++length) {
    Vec next;
    try {
      next = orbit_step(o.map, x);
    } catch (const Error&) {
      break;
    }
    if (std::any_of(next.begin(), next.end(), [](double v) { return !(std::abs(v) < 1.0); })) break;
    x = std::move(next);
    const auto I = orbit_integrals(o.map, x);
    for (int k = 0; k < 4; ++k) drift = std::max(drift, std::abs(I[k] - I0[k]) / std::max(1.0, std::abs(I0[k])));
  }
  return drift;
}

Report orbit_suite(const Ctx& c, const std::vector<Orbit>& orbits) {
  std::vector<int> length(orbits.size(), 0);
  Report r = c.sweep(
      static_cast<long>(orbits.size()), [&](long i) { return orbit_drift(orbits[i], length[i]); },
      [&](long i) { return orbits[i].x0; });
  r.observed["full_length_orbits"] = static_cast<double>(std::count(length.begin(), length.end(), kOrbitSteps));
  r.observed["mean_orbit_length"] =
      std::accumulate(length.begin(), length.end(), 0.0) / std::max<std::size_t>(1, length.size());
  r.note = "orbits stop early when a point leaves the domain; small-amplitude and sign-pattern families run the full 1000 steps";
  return r;
}

Report triangle_orbit_integrals(const Ctx& c) {
  const int per = std::max(10, c.n() / 10);
  std::vector<Orbit> orbits;
  const auto add = [&](OrbitMap m, const std::vector<CosTriple>& xs) {
    for (const auto& x : xs) orbits.push_back({m, vec(x)});
  };
  add(OrbitMap::phi, num::sample_tau(c.seed(0), per));
  add(OrbitMap::phi, num::sample_tau(c.seed(1), per, 1e-3));
  add(OrbitMap::hk, num::sample_tau(c.seed(2), per));
  add(OrbitMap::hk, num::sample_tau(c.seed(3), per, 1e-4));
  add(OrbitMap::jonas, num::sample_tau(c.seed(4), per));
  // c * (s1, s2, s3) with s1 s2 s3 = -1 stays on that ray and shrinks to 0
  num::Rng rng(c.seed(5));
  constexpr double signs[4][3] = {{-1, -1, -1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
  for (int k = 0; k < per; ++k) {
    const double a = rng.uniform(0.05, 0.9);
    const auto& s = signs[k % 4];
    orbits.push_back({k % 2 ? OrbitMap::hk : OrbitMap::phi, {a * s[0], a * s[1], a * s[2]}});
  }
  return orbit_suite(c, orbits);
}

Report triangle_volume_form(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) {
    const tri::Jacobian3 jac = tri::jacobian_phi(x);
    const CosTriple y = tri::phi(x);
    double r = 0.0;
    for (int w = 0; w < tri::kVolumeDensityCount; ++w) {
      const double vy = tri::volume_density(y, w);
      r = std::max(r, std::abs(jac.det * tri::volume_density(x, w) - vy) / vy);
    }
    return r;
  });
}

Report triangle_domain_map(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) { return tri::in_tau_star(tri::phi(x)) ? 0.0 : 1.0; });
}

Report triangle_symmetric_orbits(const Ctx& c) {
  return c.sweep(1, [](long) {
    double r = 0.0;
    CosTriple a{-0.5, -0.5, -0.5}, b = a;
    for (int n = 1; n <= 20; ++n) {
      a = tri::phi(a);
      b = tri::hk_step(b);
      for (int i = 0; i < 3; ++i) {
        r = std::max(r, std::abs(a[i] + 1.0 / (n + 2)));
        r = std::max(r, std::abs(b[i] + 1.0 / (2 * n + 2)));
      }
    }
    return r;
  });
}

Report triangle_jacobian_fd(const Ctx& c) {
  return tau_suite(c, [](const CosTriple& x) {
    const Eigen::MatrixXd fd =
        num::fd_jacobian([](const Eigen::VectorXd& v) { return num::to_eigen(tri::phi(num::from_eigen<3>(v))); },
                         num::to_eigen(x));
    return (fd - tri::jacobian_phi(x).m).cwiseAbs().maxCoeff();
  });
}

Report triangle_switch_algebra(const Ctx& c) {
  using tri::Transform;
  const auto x = sample_tau_twice(c.seed(0), c.n());
  return c.sweep(
      c.n(),
      [&](long i) {
        const CosTriple& v = x[i];
        const CosTriple s = tri::transform(Transform::switch_map, v);
        const CosTriple pf = tri::transform(Transform::polar, tri::transform(Transform::side_flip, v));
        const CosTriple j = tri::transform(Transform::jonas, v);
        const CosTriple jj = tri::transform(Transform::jonas, j);
        const CosTriple af = tri::transform(Transform::angle_flip, tri::transform(Transform::angle_flip, v));
        const auto i0 = tri::jonas_invariants(v), i1 = tri::jonas_invariants(j);
        double r = std::max({max_abs_diff(s, pf), max_abs_diff(jj, v), max_abs_diff(af, v)});
        for (int k = 0; k < 3; ++k) r = std::max(r, std::abs(i1[k] - i0[k]));
        return r;
      },
      [&](long i) { return vec(x[i]); });
}

Report triangle_jacobi(const Ctx& c) {
  const auto x = num::sample_tau(c.seed(0), c.n());
  num::Rng rng(c.seed(1));
  std::vector<tri::PoissonCoeffs> C(x.size());
  for (auto& cc : C)
    for (double& v : cc.C) v = rng.uniform(-1.0, 1.0);
  return c.sweep(
      c.n(), [&](long i) { return tri::jacobi_identity_residual(C[i], x[i]); },
      [&](long i) {
        Vec v = vec(x[i]);
        v.insert(v.end(), C[i].C.begin(), C[i].C.end());
        return v;
      });
}

Report triangle_poisson_map(const Ctx& c) {
  const auto x = num::sample_tau(c.seed(0), c.n());
  num::Rng rng(c.seed(1));
  std::vector<tri::PoissonCoeffs> C(x.size());
  for (auto& cc : C)
    for (double& v : cc.C) v = rng.uniform(-1.0, 1.0);
  return c.sweep(
      c.n(),
      [&](long i) {
        const Eigen::Matrix3d p = tri::poisson_bracket(C[i], x[i]);
        const double anti = (p + p.transpose()).cwiseAbs().maxCoeff();
        return std::max(anti, tri::poisson_map_residual(C[i], x[i]));
      },
      [&](long i) { return vec(x[i]); });
}

// -------------------------------------------------------------------- tetra

template <class F>
Report tetra_suite(const Ctx& c, F f, int count = -1) {
  const int n = count > 0 ? count : c.n();
  const auto x = num::sample_tetra(c.seed(0), n);
  return c.sweep(
      n, [&](long i) { return f(x[i]); }, [&](long i) { return vec(x[i]); });
}

Report tetra_dual_path(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) {
    return max_abs_diff(tetra::psi(x), cosine_law_dual(gram_from_cosines(GramKind::angles, x.span())));
  });
}

Report tetra_round_trip(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) { return max_abs_diff(tetra::psi_inv(tetra::psi(x)), x); });
}

Report tetra_orbit_integrals(const Ctx& c) {
  const int per = std::max(10, c.n() / 10);
  std::vector<Orbit> orbits;
  for (const auto& x : num::sample_tetra(c.seed(0), per)) orbits.push_back({OrbitMap::psi, vec(x)});
  for (const auto& x : num::sample_tetra(c.seed(1), per, 1e-4)) orbits.push_back({OrbitMap::psi, vec(x)});
  num::Rng rng(c.seed(2));
  for (int k = 0; k < per; ++k) orbits.push_back({OrbitMap::psi, Vec(6, -rng.uniform(0.05, 0.9))});
  return orbit_suite(c, orbits);
}

Report tetra_two_stage(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) {
    const tetra::TwoStageResult r = tetra::two_stage_solve(x);
    return std::max(r.discrepancy, max_abs_diff(r.values, tetra::psi(x)));
  });
}

Report tetra_jacobian_det(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) {
    const double f = tetra::jacobian_det_factorized(x);
    return std::abs(tetra::jacobian_psi(x).det / f - 1.0);
  });
}

Report tetra_volume_form(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) {
    const double det = tetra::jacobian_psi(x).det;
    const CosSextuple y = tetra::psi(x);
    double r = 0.0;
    for (int p = 0; p < 3; ++p)
      r = std::max(r, std::abs(det * tetra::volume_density(x, p) / tetra::volume_density(y, p) - 1.0));
    return r;
  });
}

Report tetra_ggs(const Ctx& c) { return tetra_suite(c, tetra::ggs_residual); }

Report tetra_sine_law(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) {
    const tetra::SineLawResiduals s = tetra::sine_law_residuals(x, tetra::psi(x));
    return std::max(s.products, s.cross);
  });
}

Report tetra_jacobian_fd(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) {
    const Eigen::MatrixXd fd = num::fd_jacobian(
        [](const Eigen::VectorXd& v) { return num::to_eigen(tetra::psi(num::from_eigen<6>(v))); }, num::to_eigen(x));
    return (fd - tetra::jacobian_psi(x).m).cwiseAbs().maxCoeff();
  });
}

Report tetra_schlafli(const Ctx& c) {
  return tetra_suite(
      c,
      [](const CosSextuple& x) {
        std::array<double, 6> alpha{};
        for (int p = 0; p < 6; ++p) alpha[p] = std::acos(x[p]);
        return tetra::schlafli_symmetry_residual(alpha);
      },
      std::min(c.n(), 200));
}

// Slope suites report max(0, threshold - slope) against tolerance 0.
Report slope_suite(const Ctx& c, long count, double threshold, const std::function<double(long)>& slope,
                   const num::InputFn& input) {
  std::vector<double> s(static_cast<std::size_t>(count), kInf);
  Report r = c.sweep(
      count,
      [&](long i) {
        s[i] = slope(i);
        return std::max(0.0, threshold - s[i]);
      },
      input);
  r.observed["min_slope"] = *std::min_element(s.begin(), s.end());
  r.observed["slope_threshold"] = threshold;
  return r;
}

Report tetra_continuum_limit(const Ctx& c) {
  const int n = std::min(c.n(), 200);
  const auto u = num::sample_tetra(c.seed(0), n);
  return slope_suite(
      c, n, 1.9,
      [&](long i) {
        return flow::limit_order(flow::LimitMap::psi_scaled, num::to_eigen(u[i]), flow::kDefaultEpsList).slope;
      },
      [&](long i) { return vec(u[i]); });
}

// ------------------------------------------------------------------ darboux

Report darboux_symmetric_reduction(const Ctx& c) {
  const auto x = num::sample_domain({c.seed(0), c.n(), num::Domain::lax_real, 0.9});
  return c.sweep(
      c.n(),
      [&](long i) {
        using darboux::CubeFaceState;
        const Vec& v = x[i];
        const CubeFaceState s = darboux::darboux_step(CubeFaceState::symmetric(v[0], v[1], v[2]));
        const CubeFaceState g =
            darboux::darboux_step(CubeFaceState::ordered(darboux::Variant::general, v[0], v[1], v[2]));
        double r = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            if (a != b) r = std::max(r, std::abs(g.x[a][b] - s.get(a, b)));
        return r;
      },
      [&](long i) { return x[i]; });
}

Report darboux_consistency(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) { return darboux::consistency_4d(x).residual; });
}

Report darboux_matches_psi(const Ctx& c) {
  return tetra_suite(c, [](const CosSextuple& x) {
    return max_abs_diff(darboux::consistency_4d(x).final_values, tetra::psi(x));
  });
}

darboux::FaceMatrix<4> face_matrix(const CosSextuple& x) {
  darboux::FaceMatrix<4> m{};
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kPairs[p];
    m[i][j] = m[j][i] = x[p];
  }
  return m;
}

Report darboux_general_consistency(const Ctx& c) {
  const auto x = num::sample_domain({c.seed(0), c.n(), num::Domain::lax_real, 0.3});
  num::Rng rng(c.seed(1));
  std::vector<darboux::FaceMatrix<4>> init(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) init[n][i][j] = i == j ? 0.0 : rng.uniform(-0.3, 0.3);
  }
  return c.sweep(
      c.n(), [&](long i) { return darboux::consistency_4d_ordered(darboux::Variant::general, init[i]).residual; },
      [&](long i) {
        Vec v;
        for (const auto& row : init[i]) v.insert(v.end(), row.begin(), row.end());
        return v;
      });
}

Report darboux_alt_report(const Ctx& c) {
  const auto x = num::sample_tetra(c.seed(0), c.n());
  std::vector<double> defect(x.size(), 0.0);
  Report r = c.sweep(
      c.n(),
      [&](long i) {
        const auto o = darboux::consistency_4d_ordered(darboux::Variant::alt, face_matrix(x[i]));
        defect[i] = o.symmetry_defect;
        return o.residual;
      },
      [&](long i) { return vec(x[i]); });
  r.observed["max_consistency_residual"] = r.max_residual;
  r.observed["max_symmetry_defect"] = *std::max_element(defect.begin(), defect.end());
  r.note = "alternative variant on symmetric data: reported only, no tolerance applies";
  return r;
}

constexpr darboux::Extent kLatticeExtent{8, 8, 8};
constexpr double kLatticeAmplitude = 0.1;

Report lattice_evolve(const Ctx& c) {
  using namespace darboux;
  return c.sweep(4, [&](long i) {
    const BoundaryData b = random_boundary(kLatticeExtent, Variant::symmetric, kLatticeAmplitude, c.seed(0) + i);
    const LatticeField s = serial::lattice_evolve(b);
    const LatticeField p = parallel::lattice_evolve(b);
    if (!(s == p)) return kInf;
    return std::max(serial::lattice_residual(s), parallel::lattice_residual(p));
  });
}

Report lattice_general_reduction(const Ctx& c) {
  using namespace darboux;
  return c.sweep(4, [&](long i) {
    const BoundaryData bs = random_boundary(kLatticeExtent, Variant::symmetric, kLatticeAmplitude, c.seed(0) + i);
    BoundaryData bg = bs;
    bg.variant = Variant::general;
    const LatticeField s = serial::lattice_evolve(bs);
    const LatticeField g = serial::lattice_evolve(bg);
    double r = 0.0;
    for (int slot = 0; slot < 6; ++slot) {
      const Slot sym = static_cast<Slot>(slot - slot % 2);
      const auto d = g.shape(static_cast<Slot>(slot));
      for (int a = 0; a < d[0]; ++a)
        for (int b = 0; b < d[1]; ++b)
          for (int k = 0; k < d[2]; ++k)
            r = std::max(r, std::abs(g.at(static_cast<Slot>(slot), a, b, k) - s.at(sym, a, b, k)));
    }
    return r;
  });
}

Report lattice_fill_order(const Ctx& c) {
  using namespace darboux;
  return c.sweep(4, [&](long i) {
    const BoundaryData b = random_boundary(kLatticeExtent, Variant::symmetric, kLatticeAmplitude, c.seed(0) + i);
    // A random valid order: increasing wavefront, shuffled within each front.
    num::Rng rng(c.seed(1) + i);
    std::vector<std::pair<double, Corner>> keyed;
    for (const Corner& k : lexicographic_order(b.extent)) keyed.push_back({k.i + k.j + k.k + rng.uniform(), k});
    std::sort(keyed.begin(), keyed.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    std::vector<Corner> order;
    for (const auto& kv : keyed) order.push_back(kv.second);
    return serial::lattice_evolve_in_order(b, order) == serial::lattice_evolve(b) ? 0.0 : 1.0;
  });
}

// ---------------------------------------------------------------- euler_ref

Report euler_equilibria(const Ctx& c) {
  num::Rng rng(c.seed(0));
  std::vector<flow::FlowState> axis, off;
  for (int k = 0; k < c.n(); ++k) {
    flow::FlowState a = flow::FlowState::Zero(3);
    a[k % 3] = rng.uniform(-1.0, 1.0);
    axis.push_back(a);
    flow::FlowState b(3);
    b << rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), 0.0;
    std::swap(b[2], b[k % 3]);  // exactly one zero component
    off.push_back(b);
  }
  return c.sweep(
      c.n(),
      [&](long i) {
        // axes are equilibria; points off the axes are not
        if (flow::rhs(flow::FlowSystem::euler3, off[i]).cwiseAbs().maxCoeff() == 0.0) return kInf;
        double r = flow::rhs(flow::FlowSystem::euler3, axis[i]).cwiseAbs().maxCoeff();
        for (const auto& s : flow::rk4(flow::FlowSystem::euler3, axis[i], 1e-2, 100))
          r = std::max(r, (s - axis[i]).cwiseAbs().maxCoeff());
        return r;
      },
      [&](long i) { return Vec(axis[i].begin(), axis[i].end()); });
}

template <class F>
Report coupled_suite(const Ctx& c, F f) {
  num::Rng rng(c.seed(0));
  std::vector<flow::FlowState> x(static_cast<std::size_t>(c.n()));
  for (auto& v : x) {
    v.resize(6);
    for (int k = 0; k < 6; ++k) v[k] = rng.uniform(-1.0, 1.0);
  }
  return c.sweep(
      c.n(), [&](long i) { return f(x[i]); }, [&](long i) { return Vec(x[i].begin(), x[i].end()); });
}

Report euler_decouple(const Ctx& c) {
  return coupled_suite(c, [](const flow::FlowState& x) {
    return (flow::recouple(flow::decouple(x)) - x).cwiseAbs().maxCoeff();
  });
}

Report euler_pushforward(const Ctx& c) { return coupled_suite(c, flow::pushforward_residual); }

Report euler_integral_relations(const Ctx& c) { return coupled_suite(c, flow::integral_relation_residual); }

constexpr double kFlowAmplitude = 0.04;

Report euler_rk4_integrals(const Ctx& c) {
  const int per = std::max(4, std::min(c.n(), 1000) / 50);
  num::Rng rng(c.seed(0));
  std::vector<std::pair<flow::FlowSystem, flow::FlowState>> starts;
  for (int k = 0; k < 2 * per; ++k) {
    const auto sys = k < per ? flow::FlowSystem::euler3 : flow::FlowSystem::coupled6;
    flow::FlowState x(flow::dimension(sys));
    for (int j = 0; j < x.size(); ++j) x[j] = rng.uniform(-kFlowAmplitude, kFlowAmplitude);
    starts.push_back({sys, x});
  }
  Report r = c.sweep(
      static_cast<long>(starts.size()),
      [&](long i) {
        const auto& [sys, x0] = starts[i];
        const auto I0 = flow::integrals_continuous(sys, x0);
        flow::FlowState x = x0;
        double drift = 0.0;
        for (int n = 0; n < 10000; ++n) {
          x = flow::rk4_step(sys, x, 1e-3);
          const auto I = flow::integrals_continuous(sys, x);
          for (std::size_t k = 0; k < I.size(); ++k) drift = std::max(drift, std::abs(I[k] - I0[k]));
        }
        return drift;
      },
      [&](long i) { return Vec(starts[i].second.begin(), starts[i].second.end()); });
  r.note = "1e4 steps of size 1e-3 from |x| <= 0.04 (the flows blow up in finite time at larger amplitude)";
  return r;
}

Report euler_rk4_order(const Ctx& c) {
  const int per = 10;
  num::Rng rng(c.seed(0));
  std::vector<std::pair<flow::FlowSystem, flow::FlowState>> starts;
  for (int k = 0; k < 2 * per; ++k) {
    const auto sys = k < per ? flow::FlowSystem::euler3 : flow::FlowSystem::coupled6;
    flow::FlowState x(flow::dimension(sys));
    for (int j = 0; j < x.size(); ++j) x[j] = rng.uniform(-0.5, 0.5);
    starts.push_back({sys, x});
  }
  return slope_suite(
      c, static_cast<long>(starts.size()), 3.8,
      [&](long i) {
        const auto& [sys, x0] = starts[i];
        constexpr double h = 0.1;
        constexpr int n = 10;
        const flow::FlowState ref = flow::rk4(sys, x0, h / 4, 4 * n).back();
        const double e1 = (flow::rk4(sys, x0, h, n).back() - ref).cwiseAbs().maxCoeff();
        const double e2 = (flow::rk4(sys, x0, h / 2, 2 * n).back() - ref).cwiseAbs().maxCoeff();
        return std::log2(e1 / e2);
      },
      [&](long i) { return Vec(starts[i].second.begin(), starts[i].second.end()); });
}

Report euler_limit_phi(const Ctx& c) {
  const int n = std::min(c.n(), 200);
  auto x = num::sample_tau(c.seed(0), n);
  x[0] = CosTriple{0.3, -0.2, 0.1};
  return slope_suite(
      c, n, 1.9,
      [&](long i) { return flow::limit_order(flow::LimitMap::phi_eps, num::to_eigen(x[i]), flow::kDefaultEpsList).slope; },
      [&](long i) { return vec(x[i]); });
}

// ------------------------------------------------------------------ numutil

Report numutil_determinism(const Ctx& c) {
  const num::Domain domains[3] = {num::Domain::tau3, num::Domain::tetra_admissible, num::Domain::lax_real};
  const double amps[3] = {num::kDefaultTauAmplitude, num::kDefaultTetraAmplitude, 0.9};
  return num::serial::sweep(c.info.name, c.info.tolerance, 3, [&](long i) {
    const num::SampleConfig cfg{c.seed(i), std::min(c.n(), 200), domains[i], amps[i]};
    if (num::sample_domain(cfg) != num::sample_domain(cfg)) return 1.0;
    // The parallel sweep reduces in index order and must match the serial one.
    const auto pts = num::sample_domain(cfg);
    const num::ResidualFn f = [&](long k) { return std::abs(pts[k][0] * pts[k][1]); };
    const Report a = num::serial::sweep("a", 1.0, static_cast<long>(pts.size()), f);
    const Report b = num::parallel::sweep("a", 1.0, static_cast<long>(pts.size()), f);
    return a.max_residual == b.max_residual && a.mean_residual == b.mean_residual ? 0.0 : 1.0;
  });
}

// Domain predicates computed without the library predicates.
bool independent_tau(const Vec& x) {
  const double a0 = std::acos(x[0]), a1 = std::acos(x[1]), a2 = std::acos(x[2]);
  const double pi = std::numbers::pi;
  return a0 + a1 + a2 > pi && -a0 + a1 + a2 < pi && a0 - a1 + a2 < pi && a0 + a1 - a2 < pi;
}

bool independent_tetra(const Vec& x) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = kPairs[p];
    g(i, j) = g(j, i) = -x[p];
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(g).eigenvalues().minCoeff() > 0.0;
}

Report numutil_predicate_recheck(const Ctx& c) {
  const auto t = num::sample_domain({c.seed(0), c.n(), num::Domain::tau3, num::kDefaultTauAmplitude});
  const auto q = num::sample_domain({c.seed(1), c.n(), num::Domain::tetra_admissible, num::kDefaultTetraAmplitude});
  const auto l = num::sample_domain({c.seed(2), c.n(), num::Domain::lax_real, 1.0});
  return c.sweep(c.n(), [&](long i) {
    const bool ok = independent_tau(t[i]) && independent_tetra(q[i]) &&
                    std::all_of(l[i].begin(), l[i].end(), [](double v) { return std::abs(v) < 1.0; });
    return ok ? 0.0 : 1.0;
  });
}

Report numutil_fd_jacobian(const Ctx& c) {
  return c.sweep(1, [](long) {
    const Eigen::VectorXd x = Eigen::Vector3d(0.3, -0.7, 0.2);
    const Eigen::MatrixXd id = num::fd_jacobian([](const Eigen::VectorXd& v) { return v; }, x);
    const Eigen::MatrixXd j0 = num::fd_jacobian(
        [](const Eigen::VectorXd& v) { return num::to_eigen(tri::phi(num::from_eigen<3>(v))); }, Eigen::Vector3d::Zero());
    const Eigen::MatrixXd e = Eigen::MatrixXd::Identity(3, 3);
    return std::max((id - e).cwiseAbs().maxCoeff(), (j0 - e).cwiseAbs().maxCoeff());
  });
}

// ----------------------------------------------------------------- registry

struct Suite {
  SuiteInfo info;
  Report (*run)(const Ctx&);
};

const std::vector<Suite>& registry() {
  static const std::vector<Suite> suites = {
      {{"gram.round_trip", "gram_core", "lengths from angles and back recover the angles", 1e-10}, gram_round_trip},
      {{"gram.duality", "gram_core", "G' = D G^-1 D with D_ii = sqrt(det / g_ii)", 1e-10}, gram_duality},
      {{"gram.realize", "gram_core", "realized vertices have unit columns and reproduce both Grams", 1e-12},
       gram_realize},
      {{"triangle.dual_path", "triangle", "phi equals the cofactor cosine law", 1e-13}, triangle_dual_path},
      {{"triangle.fixed_point", "triangle", "phi, phi_inv, hk and jonas fix the origin", 0.0}, triangle_fixed_point},
      {{"triangle.conjugation", "triangle", "phi_inv(y) = -phi(-y)", 1e-13}, triangle_conjugation},
      {{"triangle.round_trip", "triangle", "phi_inv(phi(x)) = x", 1e-12}, triangle_round_trip},
      {{"triangle.hk_square", "triangle", "phi(phi(x)) = hk_step(x)", 1e-12}, triangle_hk_square},
      {{"triangle.hk_implicit", "triangle", "hk_step solves the implicit Euler-top discretization", 1e-12},
       triangle_hk_implicit},
      {{"triangle.invariant_identities", "triangle", "E12 E23 E31 = 1 and d > 0 on tau", 1e-13},
       triangle_invariant_identities},
      {{"triangle.sine_law", "triangle", "sine-law identities for y = phi(x)", 1e-12}, triangle_sine_law},
      {{"triangle.orbit_integrals", "triangle", "E_ij conserved along phi, hk and jonas orbits", 1e-10},
       triangle_orbit_integrals},
      {{"triangle.volume_form", "triangle", "det(dphi) vol(x) = vol(phi(x)) for every density", 1e-11},
       triangle_volume_form},
      {{"triangle.domain_map", "triangle", "phi maps tau into tau*", 0.0}, triangle_domain_map},
      {{"triangle.symmetric_orbits", "triangle", "closed-form symmetric orbits of phi and hk for n <= 20", 1e-14},
       triangle_symmetric_orbits},
      {{"triangle.jacobian_fd", "triangle", "closed-form Jacobian of phi matches central differences", 1e-6},
       triangle_jacobian_fd},
      {{"triangle.switch_algebra", "triangle",
        "switch = polar o side_flip, jonas and angle_flip are involutions, jonas conserves sin^2 l", 1e-12},
       triangle_switch_algebra},
      {{"triangle.jacobi", "triangle", "Jacobi identity of the bracket family (exact derivatives)", 1e-13},
       triangle_jacobi},
      {{"triangle.poisson_map", "triangle", "bracket is antisymmetric and J P J^T = P(phi(x))", 1e-10},
       triangle_poisson_map},
      {{"tetra.dual_path", "tetra", "psi equals the cofactor cosine law", 1e-13}, tetra_dual_path},
      {{"tetra.round_trip", "tetra", "psi_inv(psi(x)) = x", 1e-10}, tetra_round_trip},
      {{"tetra.orbit_integrals", "tetra", "the four integrals conserved along psi orbits", 1e-10},
       tetra_orbit_integrals},
      {{"tetra.two_stage", "tetra", "link-triangle then face-triangle solve equals psi", 1e-10}, tetra_two_stage},
      {{"tetra.jacobian_det", "tetra", "det(dpsi) = (gamma'/d')^5 (relative)", 1e-9}, tetra_jacobian_det},
      {{"tetra.volume_form", "tetra", "det(dpsi) vol(x) = vol(psi(x)) for the three densities (relative)", 1e-9},
       tetra_volume_form},
      {{"tetra.ggs", "tetra", "cofactor-product identity for psi", 1e-10}, tetra_ggs},
      {{"tetra.sine_law", "tetra", "paired sine products and cross-cosine sine laws", 1e-10}, tetra_sine_law},
      {{"tetra.jacobian_fd", "tetra", "closed-form Jacobian of psi matches central differences", 1e-6},
       tetra_jacobian_fd},
      {{"tetra.schlafli", "tetra", "d l_km / d alpha_ij is symmetric", 1e-8}, tetra_schlafli},
      {{"tetra.continuum_limit", "tetra", "psi(eps u) / eps against one RK4 step: slope >= 1.9", 0.0},
       tetra_continuum_limit},
      {{"darboux.symmetric_reduction", "darboux", "general variant on symmetric data equals the symmetric variant",
        0.0},
       darboux_symmetric_reduction},
      {{"darboux.consistency", "darboux", "4D consistency of the symmetric variant", 1e-10}, darboux_consistency},
      {{"darboux.matches_psi", "darboux", "4D cube final values equal psi", 1e-10}, darboux_matches_psi},
      {{"darboux.general_consistency", "darboux", "4D consistency of the general variant on generic data", 1e-10},
       darboux_general_consistency},
      {{"darboux.alt_report", "darboux", "alternative variant on symmetric data (reported, not asserted)",
        std::numeric_limits<double>::infinity()},
       darboux_alt_report},
      {{"lattice.evolve", "darboux", "8x8x8 evolution: serial == parallel, per-cube residual", 1e-12},
       lattice_evolve},
      {{"lattice.general_reduction", "darboux", "general-variant lattice on symmetric data equals symmetric lattice",
        1e-14},
       lattice_general_reduction},
      {{"lattice.fill_order", "darboux", "any valid fill order gives the same field", 0.0}, lattice_fill_order},
      {{"euler.equilibria", "euler_ref", "axes are equilibria and RK4 keeps them", 1e-15}, euler_equilibria},
      {{"euler.decouple", "euler_ref", "recouple(decouple(x)) = x", 1e-15}, euler_decouple},
      {{"euler.pushforward", "euler_ref", "coupled field maps to two Euler tops in p, q", 1e-13}, euler_pushforward},
      {{"euler.integral_relations", "euler_ref", "linear relations between the two integral families", 1e-12},
       euler_integral_relations},
      {{"euler.rk4_integrals", "euler_ref", "integral drift over 1e4 RK4 steps at h = 1e-3", 1e-10},
       euler_rk4_integrals},
      {{"euler.rk4_order", "euler_ref", "RK4 endpoint error order: slope >= 3.8", 0.0}, euler_rk4_order},
      {{"euler.limit_phi", "euler_ref", "phi_eps against one RK4 step: slope >= 1.9", 0.0}, euler_limit_phi},
      {{"numutil.determinism", "numutil", "same seed, same samples; parallel sweep equals serial sweep", 0.0},
       numutil_determinism},
      {{"numutil.predicate_recheck", "numutil", "every sample passes an independent domain check", 0.0},
       numutil_predicate_recheck},
      {{"numutil.fd_jacobian", "numutil", "central differences of identity and of phi at 0", 1e-9},
       numutil_fd_jacobian},
  };
  return suites;
}

}  // namespace

const std::vector<SuiteInfo>& manifest() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const auto& s : registry()) v.push_back(s.info);
    return v;
  }();
  return infos;
}

num::Report run_suite(const std::string& name, const RunOptions& opt) {
  const auto& suites = registry();
  for (std::size_t k = 0; k < suites.size(); ++k) {
    if (suites[k].info.name != name) continue;
    const Ctx ctx{opt, suites[k].info, opt.seed + 1000 * static_cast<std::uint64_t>(k)};
    return suites[k].run(ctx);
  }
  throw DomainError("unknown verification suite: " + name);
}

BatteryResult run_all(const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  BatteryResult out;
  for (const auto& info : manifest()) {
    out.reports.push_back(run_suite(info.name, opt));
    out.passed = out.passed && out.reports.back().passed;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

nlohmann::ordered_json to_json(const BatteryResult& r, const RunOptions& opt) {
  nlohmann::ordered_json j;
  j["seed"] = opt.seed;
  j["samples"] = opt.samples;
  j["passed"] = r.passed;
  j["seconds"] = r.seconds;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& rep : r.reports) suites.push_back(num::to_json(rep));
  j["suites"] = std::move(suites);
  return j;
}

}  // namespace sphlaw::verify

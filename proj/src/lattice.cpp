#include "sphlaw/lattice.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <tuple>

#include "json.hpp"
#include "sphlaw/numutil.hpp"

namespace sphlaw::darboux {
namespace {

constexpr int orientation(Slot s) { return static_cast<int>(s) / 2; }

bool ordered(Variant v) { return v != Variant::symmetric; }

bool lex_less(const Corner& a, const Corner& b) { return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k); }

std::string corner_text(Corner c) {
  return "(" + std::to_string(c.i) + ", " + std::to_string(c.j) + ", " + std::to_string(c.k) + ")";
}

void check_plane(const Plane& p, int rows, int cols, const char* name) {
  if (p.rows != rows || p.cols != cols || p.values.size() != static_cast<std::size_t>(rows) * cols)
    throw DimensionError(std::string("boundary plane ") + name + " has wrong shape");
}

}  // namespace

LatticeDomainError::LatticeDomainError(Corner c, const std::string& what)
    : DomainError("cube at " + corner_text(c) + ": " + what), corner(c) {}

LatticeField::LatticeField(Extent e, Variant v) : extent_(e), variant_(v) {
  if (e.nx <= 0 || e.ny <= 0 || e.nz <= 0) throw DimensionError("lattice extent must be positive");
  for (int s = 0; s < 6; ++s) {
    if (s % 2 == 1 && !ordered(v)) continue;
    const auto d = shape(static_cast<Slot>(s));
    faces_[s].assign(static_cast<std::size_t>(d[0]) * d[1] * d[2], std::numeric_limits<double>::quiet_NaN());
  }
}

std::array<int, 3> LatticeField::shape(Slot s) const {
  const auto& e = extent_;
  switch (orientation(s)) {
    case 0:
      return {e.nx, e.ny, e.nz + 1};
    case 1:
      return {e.nx, e.ny + 1, e.nz};
    default:
      return {e.nx + 1, e.ny, e.nz};
  }
}

std::size_t LatticeField::index(Slot s, int i, int j, int k) const {
  const auto d = shape(s);
  return (static_cast<std::size_t>(i) * d[1] + j) * d[2] + k;
}

CubeFaceState LatticeField::cube_inputs(Corner c) const {
  CubeFaceState s;
  s.variant = variant_;
  s.x[0][1] = at(Slot::x12, c.i, c.j, c.k);
  s.x[0][2] = at(Slot::x13, c.i, c.j, c.k);
  s.x[1][2] = at(Slot::x23, c.i, c.j, c.k);
  if (ordered(variant_)) {
    s.x[1][0] = at(Slot::x21, c.i, c.j, c.k);
    s.x[2][0] = at(Slot::x31, c.i, c.j, c.k);
    s.x[2][1] = at(Slot::x32, c.i, c.j, c.k);
  }
  return s;
}

CubeFaceState LatticeField::cube_outputs(Corner c) const {
  CubeFaceState s;
  s.variant = variant_;
  s.x[0][1] = at(Slot::x12, c.i, c.j, c.k + 1);
  s.x[0][2] = at(Slot::x13, c.i, c.j + 1, c.k);
  s.x[1][2] = at(Slot::x23, c.i + 1, c.j, c.k);
  if (ordered(variant_)) {
    s.x[1][0] = at(Slot::x21, c.i, c.j, c.k + 1);
    s.x[2][0] = at(Slot::x31, c.i, c.j + 1, c.k);
    s.x[2][1] = at(Slot::x32, c.i + 1, c.j, c.k);
  }
  return s;
}

void LatticeField::store_outputs(Corner c, const CubeFaceState& out) {
  at(Slot::x12, c.i, c.j, c.k + 1) = out.x[0][1];
  at(Slot::x13, c.i, c.j + 1, c.k) = out.x[0][2];
  at(Slot::x23, c.i + 1, c.j, c.k) = out.x[1][2];
  if (ordered(variant_)) {
    at(Slot::x21, c.i, c.j, c.k + 1) = out.x[1][0];
    at(Slot::x31, c.i, c.j + 1, c.k) = out.x[2][0];
    at(Slot::x32, c.i + 1, c.j, c.k) = out.x[2][1];
  }
}

LatticeField make_field(const BoundaryData& b) {
  const Extent& e = b.extent;
  LatticeField f(e, b.variant);
  check_plane(b.xy, e.nx, e.ny, "xy");
  check_plane(b.xz, e.nx, e.nz, "xz");
  check_plane(b.yz, e.ny, e.nz, "yz");
  const bool ord = ordered(b.variant);
  const Plane& yx = ord && !b.yx.values.empty() ? b.yx : b.xy;
  const Plane& zx = ord && !b.zx.values.empty() ? b.zx : b.xz;
  const Plane& zy = ord && !b.zy.values.empty() ? b.zy : b.yz;
  if (ord) {
    check_plane(yx, e.nx, e.ny, "yx");
    check_plane(zx, e.nx, e.nz, "zx");
    check_plane(zy, e.ny, e.nz, "zy");
  }
  for (int i = 0; i < e.nx; ++i)
    for (int j = 0; j < e.ny; ++j) {
      f.at(Slot::x12, i, j, 0) = b.xy.at(i, j);
      if (ord) f.at(Slot::x21, i, j, 0) = yx.at(i, j);
    }
  for (int i = 0; i < e.nx; ++i)
    for (int k = 0; k < e.nz; ++k) {
      f.at(Slot::x13, i, 0, k) = b.xz.at(i, k);
      if (ord) f.at(Slot::x31, i, 0, k) = zx.at(i, k);
    }
  for (int j = 0; j < e.ny; ++j)
    for (int k = 0; k < e.nz; ++k) {
      f.at(Slot::x23, 0, j, k) = b.yz.at(j, k);
      if (ord) f.at(Slot::x32, 0, j, k) = zy.at(j, k);
    }
  return f;
}

void fill_cube(LatticeField& field, Corner c) {
  CubeFaceState out;
  try {
    out = darboux_step(field.cube_inputs(c));
  } catch (const DomainError& err) {
    throw LatticeDomainError(c, err.what());
  }
  field.store_outputs(c, out);
}

BoundaryData random_boundary(Extent e, Variant v, double amplitude, std::uint64_t seed, bool independent_reversed) {
  num::Rng rng(seed);
  const auto plane = [&](int rows, int cols) {
    Plane p{rows, cols, {}};
    p.values.resize(static_cast<std::size_t>(rows) * cols);
    for (double& x : p.values) x = rng.uniform(-amplitude, amplitude);
    return p;
  };
  BoundaryData b;
  b.extent = e;
  b.variant = v;
  b.xy = plane(e.nx, e.ny);
  b.xz = plane(e.nx, e.nz);
  b.yz = plane(e.ny, e.nz);
  if (independent_reversed && ordered(v)) {
    b.yx = plane(e.nx, e.ny);
    b.zx = plane(e.nx, e.nz);
    b.zy = plane(e.ny, e.nz);
  }
  return b;
}

std::vector<Corner> lexicographic_order(Extent e) {
  std::vector<Corner> order;
  order.reserve(static_cast<std::size_t>(e.cubes()));
  for (int i = 0; i < e.nx; ++i)
    for (int j = 0; j < e.ny; ++j)
      for (int k = 0; k < e.nz; ++k) order.push_back({i, j, k});
  return order;
}

namespace serial {

LatticeField lattice_evolve(const BoundaryData& b) {
  const auto order = lexicographic_order(b.extent);
  return lattice_evolve_in_order(b, order);
}

LatticeField lattice_evolve_in_order(const BoundaryData& b, std::span<const Corner> order) {
  const Extent& e = b.extent;
  LatticeField f = make_field(b);
  std::vector<char> done(static_cast<std::size_t>(e.cubes()), 0);
  const auto flat = [&](Corner c) { return (static_cast<std::size_t>(c.i) * e.ny + c.j) * e.nz + c.k; };
  for (const Corner& c : order) {
    if (c.i < 0 || c.j < 0 || c.k < 0 || c.i >= e.nx || c.j >= e.ny || c.k >= e.nz)
      throw ConsistencyError("fill order: corner " + corner_text(c) + " outside the box");
    if (done[flat(c)]) throw ConsistencyError("fill order: corner " + corner_text(c) + " repeated");
    const bool ready = (c.i == 0 || done[flat({c.i - 1, c.j, c.k})]) && (c.j == 0 || done[flat({c.i, c.j - 1, c.k})]) &&
                       (c.k == 0 || done[flat({c.i, c.j, c.k - 1})]);
    if (!ready) throw ConsistencyError("fill order: inputs of " + corner_text(c) + " not yet computed");
    fill_cube(f, c);
    done[flat(c)] = 1;
  }
  if (static_cast<long>(std::count(done.begin(), done.end(), 1)) != e.cubes())
    throw ConsistencyError("fill order: not every cube was filled");
  return f;
}

double lattice_residual(const LatticeField& f) {
  double r = 0.0;
  for (const Corner& c : lexicographic_order(f.extent()))
    r = std::max(r, step_residual(f.cube_inputs(c), f.cube_outputs(c)));
  return r;
}

}  // namespace serial

namespace parallel {

LatticeField lattice_evolve(const BoundaryData& b) {
  const Extent& e = b.extent;
  LatticeField f = make_field(b);
  const int last = e.nx + e.ny + e.nz - 3;
  for (int s = 0; s <= last; ++s) {
    bool failed = false;
    Corner worst{};
    std::string message;
    const int i_lo = std::max(0, s - (e.ny - 1) - (e.nz - 1));
    const int i_hi = std::min(e.nx - 1, s);
#pragma omp parallel for schedule(dynamic)
    for (int i = i_lo; i <= i_hi; ++i) {
      const int rest = s - i;
      const int j_lo = std::max(0, rest - (e.nz - 1));
      const int j_hi = std::min(e.ny - 1, rest);
      for (int j = j_lo; j <= j_hi; ++j) {
        const Corner c{i, j, rest - j};
        try {
          fill_cube(f, c);
        } catch (const LatticeDomainError& err) {
#pragma omp critical(sphlaw_lattice_failure)
          {
            if (!failed || lex_less(c, worst)) {
              failed = true;
              worst = c;
              message = err.what();
            }
          }
        }
      }
    }
    if (failed) throw LatticeDomainError(worst, message);
  }
  return f;
}

double lattice_residual(const LatticeField& f) {
  const Extent& e = f.extent();
  double r = 0.0;
  const long n = e.cubes();
#pragma omp parallel for reduction(max : r)
  for (long flat = 0; flat < n; ++flat) {
    const Corner c{static_cast<int>(flat / (static_cast<long>(e.ny) * e.nz)),
                   static_cast<int>((flat / e.nz) % e.ny), static_cast<int>(flat % e.nz)};
    r = std::max(r, step_residual(f.cube_inputs(c), f.cube_outputs(c)));
  }
  return r;
}

}  // namespace parallel

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

Plane read_plane(const json& j, const char* name) {
  if (!j.is_array()) throw DomainError(std::string("plane ") + name + " must be a 2D array");
  Plane p;
  p.rows = static_cast<int>(j.size());
  p.cols = p.rows > 0 ? static_cast<int>(j[0].size()) : 0;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != p.cols)
      throw DomainError(std::string("plane ") + name + " is not rectangular");
    for (const auto& v : row) {
      if (!v.is_number()) throw DomainError(std::string("plane ") + name + " holds a non-number");
      p.values.push_back(v.get<double>());
    }
  }
  return p;
}

ojson plane_json(const Plane& p) {
  ojson rows = ojson::array();
  for (int r = 0; r < p.rows; ++r) {
    ojson row = ojson::array();
    for (int c = 0; c < p.cols; ++c) row.push_back(p.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

BoundaryData parse_boundary(const json& doc, Variant fallback);

}  // namespace

BoundaryData read_boundary_json(std::istream& in, Variant fallback) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& err) {
    throw DomainError(std::string("lattice init: invalid JSON: ") + err.what());
  }
  try {
    return parse_boundary(doc, fallback);
  } catch (const json::exception& err) {
    throw DomainError(std::string("lattice init: ") + err.what());
  }
}

namespace {

BoundaryData parse_boundary(const json& doc, Variant fallback) {
  if (!doc.is_object()) throw DomainError("lattice init: expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "extent" && key != "planes" && key != "variant" && key != "interior" && key != "max_cube_residual")
      throw DomainError("lattice init: unknown key '" + key + "'");
  }
  BoundaryData b;
  const auto& ext = doc.at("extent");
  if (!ext.is_array() || ext.size() != 3) throw DomainError("lattice init: extent must be [nx, ny, nz]");
  b.extent = {ext[0].get<int>(), ext[1].get<int>(), ext[2].get<int>()};
  if (b.extent.nx <= 0 || b.extent.ny <= 0 || b.extent.nz <= 0)
    throw DomainError("lattice init: extent entries must be positive");
  b.variant = doc.contains("variant") ? variant_from_string(doc["variant"].get<std::string>().c_str()) : fallback;
  const auto& planes = doc.at("planes");
  for (const auto& [key, _] : planes.items()) {
    if (key != "xy" && key != "xz" && key != "yz" && key != "yx" && key != "zx" && key != "zy")
      throw DomainError("lattice init: unknown plane '" + key + "'");
  }
  b.xy = read_plane(planes.at("xy"), "xy");
  b.xz = read_plane(planes.at("xz"), "xz");
  b.yz = read_plane(planes.at("yz"), "yz");
  if (planes.contains("yx")) b.yx = read_plane(planes["yx"], "yx");
  if (planes.contains("zx")) b.zx = read_plane(planes["zx"], "zx");
  if (planes.contains("zy")) b.zy = read_plane(planes["zy"], "zy");
  const Extent& e = b.extent;
  check_plane(b.xy, e.nx, e.ny, "xy");
  check_plane(b.xz, e.nx, e.nz, "xz");
  check_plane(b.yz, e.ny, e.nz, "yz");
  if (!b.yx.values.empty()) check_plane(b.yx, e.nx, e.ny, "yx");
  if (!b.zx.values.empty()) check_plane(b.zx, e.nx, e.nz, "zx");
  if (!b.zy.values.empty()) check_plane(b.zy, e.ny, e.nz, "zy");
  return b;
}

}  // namespace

void write_field_json(std::ostream& out, const BoundaryData& b, const LatticeField& f, double residual) {
  ojson doc;
  doc["extent"] = {b.extent.nx, b.extent.ny, b.extent.nz};
  doc["variant"] = to_string(f.variant());
  ojson planes;
  planes["xy"] = plane_json(b.xy);
  planes["xz"] = plane_json(b.xz);
  planes["yz"] = plane_json(b.yz);
  if (!b.yx.values.empty()) planes["yx"] = plane_json(b.yx);
  if (!b.zx.values.empty()) planes["zx"] = plane_json(b.zx);
  if (!b.zy.values.empty()) planes["zy"] = plane_json(b.zy);
  doc["planes"] = std::move(planes);

  static constexpr const char* names[6] = {"x12", "x21", "x13", "x31", "x23", "x32"};
  ojson interior;
  for (int s = 0; s < 6; ++s) {
    const Slot slot = static_cast<Slot>(s);
    if (!f.has_slot(slot)) continue;
    const auto d = f.shape(slot);
    ojson a = ojson::array();
    for (int i = 0; i < d[0]; ++i) {
      ojson plane = ojson::array();
      for (int j = 0; j < d[1]; ++j) {
        ojson line = ojson::array();
        for (int k = 0; k < d[2]; ++k) line.push_back(f.at(slot, i, j, k));
        plane.push_back(std::move(line));
      }
      a.push_back(std::move(plane));
    }
    interior[names[s]] = std::move(a);
  }
  doc["interior"] = std::move(interior);
  doc["max_cube_residual"] = residual;
  out << doc.dump(1) << '\n';
}

}  // namespace sphlaw::darboux

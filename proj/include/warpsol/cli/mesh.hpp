#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "warpsol/errors.hpp"
#include "warpsol/hypersurface.hpp"

namespace warpsol::cli {

/// Vertex grid of a surface in ambient chart coordinates, rows in u, columns in v.
struct SurfaceMesh {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::array<double, 3>> vertices;  // row-major (u outer, v inner)
};

/// Samples psi over [u_lo, u_hi] x [v_lo, v_hi]; only surfaces (n = 2) are supported.
inline SurfaceMesh sample_surface(const Immersion& imm, std::size_t rows, std::size_t cols, double v_lo, double v_hi) {
  if (imm.n() != 2) throw MeshUnsupported("mesh export needs a surface (n = 2), got n = " + std::to_string(imm.n()));
  if (rows < 2 || cols < 2) throw MeshUnsupported("mesh export needs at least 2 samples per axis");
  const auto& box = imm.chart();
  SurfaceMesh m;
  m.rows = rows;
  m.cols = cols;
  m.vertices.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double u = box.lo[0] + (box.hi[0] - box.lo[0]) * static_cast<double>(i) / static_cast<double>(rows - 1);
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = v_lo + (v_hi - v_lo) * static_cast<double>(j) / static_cast<double>(cols - 1);
      const double p[2] = {u, v};
      const AmbientPoint q = imm.map(p);
      m.vertices.push_back({q.t, q.x[0], q.x[1]});
    }
  }
  return m;
}

inline SurfaceMesh sample_surface(const Immersion& imm, std::size_t rows, std::size_t cols) {
  const auto& box = imm.chart();
  if (imm.tag() == CatalogueTag::Rotational) return sample_surface(imm, rows, cols, 0.0, 2.0 * std::numbers::pi);
  return sample_surface(imm, rows, cols, box.lo.size() > 1 ? box.lo[1] : 0.0, box.hi.size() > 1 ? box.hi[1] : 1.0);
}

/// OBJ text: "v t x1 x2" lines, then two triangles per cell split along the
/// diagonal from the lower-left corner. No normals.
inline void write_obj(std::ostream& out, const SurfaceMesh& m) {
  char buf[128];
  out << "# warpsol surface mesh, ambient chart coordinates (t, x1, x2)\n";
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out << buf;
  }
  auto idx = [&](std::size_t i, std::size_t j) { return i * m.cols + j + 1; };
  for (std::size_t i = 0; i + 1 < m.rows; ++i)
    for (std::size_t j = 0; j + 1 < m.cols; ++j) {
      const std::size_t ll = idx(i, j), lr = idx(i + 1, j), ur = idx(i + 1, j + 1), ul = idx(i, j + 1);
      out << "f " << ll << ' ' << lr << ' ' << ur << '\n';
      out << "f " << ll << ' ' << ur << ' ' << ul << '\n';
    }
}

inline void write_obj_file(const std::string& path, const SurfaceMesh& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file '" + path + "'");
  write_obj(out, m);
}

/// Vertex positions read back from OBJ text; faces are returned 1-based.
struct ObjData {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<std::size_t, 3>> faces;
};

inline ObjData read_obj(std::istream& in) {
  ObjData d;
  std::string tag;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ls >> tag;
    if (tag == "v") {
      std::array<double, 3> v{};
      if (!(ls >> v[0] >> v[1] >> v[2])) throw Error("malformed OBJ vertex: " + line);
      d.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<std::size_t, 3> f{};
      if (!(ls >> f[0] >> f[1] >> f[2])) throw Error("malformed OBJ face: " + line);
      for (auto k : f)
        if (k == 0 || k > d.vertices.size()) throw Error("OBJ face index out of range: " + line);
      d.faces.push_back(f);
    } else {
      throw Error("unexpected OBJ record: " + line);
    }
  }
  return d;
}

}  // namespace warpsol::cli

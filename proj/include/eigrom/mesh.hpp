// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_MESH_HPP
#define EIGROM_MESH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "eigrom/error.hpp"

namespace eigrom
{

// Axis-aligned rectangle (x_min, x_max) x (y_min, y_max).
struct Rect
{
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double Width() const { return x_max - x_min; }
  double Height() const { return y_max - y_min; }
  double Area() const { return Width() * Height(); }
  bool IsValid() const { return x_min < x_max && y_min < y_max; }
};

struct Point2
{
  double x = 0.0;
  double y = 0.0;
};

using Triangle = std::array<int, 3>;

//
// Conforming P1 triangulation with Dirichlet boundary identification. Unknowns live on the
// interior vertices only; InteriorIndex() maps a vertex to its unknown, or -1 for boundary
// vertices.
//
class TriMesh
{
public:
  static constexpr int kBoundary = -1;

  TriMesh() = default;
  TriMesh(Rect rect, std::vector<Point2> vertices, std::vector<Triangle> triangles,
          std::vector<bool> is_boundary, double h)
    : rect_(rect), vertices_(std::move(vertices)), triangles_(std::move(triangles)),
      is_boundary_(std::move(is_boundary)), h_(h)
  {
    interior_index_.assign(vertices_.size(), kBoundary);
    for (std::size_t v = 0; v < vertices_.size(); v++)
    {
      if (!is_boundary_[v])
      {
        interior_index_[v] = num_interior_++;
      }
    }
  }

  const Rect &Domain() const { return rect_; }
  const std::vector<Point2> &Vertices() const { return vertices_; }
  const std::vector<Triangle> &Triangles() const { return triangles_; }
  bool IsBoundary(int v) const { return is_boundary_[v]; }
  int InteriorIndex(int v) const { return interior_index_[v]; }
  int NumVertices() const { return static_cast<int>(vertices_.size()); }
  int NumTriangles() const { return static_cast<int>(triangles_.size()); }
  int NumInterior() const { return num_interior_; }
  double MeshSize() const { return h_; }

  // Signed area, positive for counter-clockwise vertex order.
  double SignedArea(const Triangle &t) const
  {
    const auto &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  }

private:
  Rect rect_;
  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<bool> is_boundary_;
  std::vector<int> interior_index_;
  int num_interior_ = 0;
  double h_ = 0.0;
};

// How each grid cell is cut into two triangles.
enum class DiagonalPattern
{
  // Every cell along its lower-left to upper-right diagonal.
  kRight,
  // Checkerboard: cells with i + j even use the lower-left to upper-right diagonal, the
  // others the lower-right to upper-left one. Invariant under the reflections x -> -x and
  // y -> -y of a centered rectangle when the cell counts are even.
  kAlternating,
};

inline const char *ToString(DiagonalPattern p)
{
  return p == DiagonalPattern::kRight ? "right" : "alternating";
}

// Uniform nx x ny grid of rect with each cell split in two triangles along a diagonal.
// Vertices are numbered row-major with x fastest.
inline TriMesh BuildStructuredMesh(const Rect &rect, int nx, int ny,
                                   DiagonalPattern pattern = DiagonalPattern::kRight)
{
  if (!rect.IsValid())
  {
    throw std::invalid_argument("BuildStructuredMesh: degenerate rectangle");
  }
  if (nx < 1 || ny < 1)
  {
    throw std::invalid_argument("BuildStructuredMesh: need at least one cell per axis");
  }
  const double dx = rect.Width() / nx, dy = rect.Height() / ny;
  std::vector<Point2> vertices;
  std::vector<bool> boundary;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  boundary.reserve(vertices.capacity());
  for (int j = 0; j <= ny; j++)
  {
    // Pin the last row/column to the exact rectangle edge.
    const double y = (j == ny) ? rect.y_max : rect.y_min + j * dy;
    for (int i = 0; i <= nx; i++)
    {
      const double x = (i == nx) ? rect.x_max : rect.x_min + i * dx;
      vertices.push_back({x, y});
      boundary.push_back(i == 0 || i == nx || j == 0 || j == ny);
    }
  }
  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; j++)
  {
    for (int i = 0; i < nx; i++)
    {
      if (pattern == DiagonalPattern::kRight || (i + j) % 2 == 0)
      {
        triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
      else
      {
        triangles.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        triangles.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  }
  return {rect, std::move(vertices), std::move(triangles), std::move(boundary),
          std::hypot(dx, dy)};
}

inline TriMesh BuildStructuredMesh(const Rect &rect, int n,
                                   DiagonalPattern pattern = DiagonalPattern::kRight)
{
  return BuildStructuredMesh(rect, n, n, pattern);
}

// Number of cells needed along a span for a target axis step h (rounded to nearest).
inline int CellsForStep(double span, double h)
{
  if (!(h > 0.0) || !(span > 0.0))
  {
    throw std::invalid_argument("CellsForStep: span and step must be positive");
  }
  return std::max(1, static_cast<int>(std::lround(span / h)));
}

struct MeshReport
{
  int vertices = 0;
  int triangles = 0;
  int interior = 0;
  double min_area = 0.0;
  double max_area = 0.0;
  double total_area = 0.0;
  double h = 0.0;
};

inline MeshReport MakeMeshReport(const TriMesh &mesh)
{
  MeshReport r;
  r.vertices = mesh.NumVertices();
  r.triangles = mesh.NumTriangles();
  r.interior = mesh.NumInterior();
  r.h = mesh.MeshSize();
  r.min_area = std::numeric_limits<double>::infinity();
  r.max_area = 0.0;
  for (const auto &t : mesh.Triangles())
  {
    const double a = mesh.SignedArea(t);
    r.min_area = std::min(r.min_area, a);
    r.max_area = std::max(r.max_area, a);
    r.total_area += a;
  }
  if (mesh.NumTriangles() == 0)
  {
    r.min_area = 0.0;
  }
  return r;
}

// Plain-text dump: "ntri nvert", then "x y boundary_flag" per vertex, then "i j k" per
// triangle (0-based).
inline void WriteMesh(std::ostream &os, const TriMesh &mesh)
{
  const auto old_precision = os.precision(17);
  os << mesh.NumTriangles() << ' ' << mesh.NumVertices() << '\n';
  for (int v = 0; v < mesh.NumVertices(); v++)
  {
    const auto &p = mesh.Vertices()[v];
    os << p.x << ' ' << p.y << ' ' << (mesh.IsBoundary(v) ? 1 : 0) << '\n';
  }
  for (const auto &t : mesh.Triangles())
  {
    os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace eigrom

#endif  // EIGROM_MESH_HPP

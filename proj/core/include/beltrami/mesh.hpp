#pragma once

// Triangulations of cross-sections, boundary tracing and axisymmetric
// measures.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "beltrami/xsection.hpp"

namespace beltrami {

// Vertices with r at or below this are treated as lying on the z-axis.
inline constexpr double kAxisTolerance = 1e-12;

enum class VertexKind { interior, outer_boundary, hole_boundary, axis };

struct VertexTag {
  VertexKind kind = VertexKind::interior;
  int hole = -1;  // hole index for hole_boundary

  friend bool operator==(const VertexTag&, const VertexTag&) = default;
};

using Triangle = std::array<int, 3>;

struct TriMesh {
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;  // counterclockwise
  std::vector<VertexTag> tags;
  double h = 0.0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  double area() const;
  double triangle_area(std::size_t t) const;
  bool has_axis() const;
  bool is_boundary(int v) const { return tags[v].kind != VertexKind::interior; }
  // Same connectivity, every coordinate multiplied by s.
  TriMesh scaled(double s) const;

  friend bool operator==(const TriMesh&, const TriMesh&) = default;
};

// Constrained Delaunay triangulation with target edge length h and minimum
// angle >= 20 degrees. Boundary curves are resampled at spacing <= h with
// corners kept, so polygonal inputs are reproduced exactly. Throws
// InvalidInput for invalid geometry or an h too coarse to resolve a curve.
TriMesh triangulate(const CrossSection& cs, double h);

// Splits every triangle into four through its edge midpoints (nested mesh).
TriMesh refine_uniform(const TriMesh& mesh);

// 2*pi * integral of r over the mesh (exact for piecewise-linear r).
double revolved_volume(const TriMesh& mesh);

double min_angle_deg(const TriMesh& mesh);

struct BoundaryEdge {
  int a = 0;
  int b = 0;  // domain lies to the left of a -> b
  double length = 0.0;
  double n_r = 0.0;  // outward unit normal
  double n_z = 0.0;
};

enum class RunKind { outer, hole, axis };

struct BoundaryRun {
  RunKind kind = RunKind::outer;
  int hole = -1;
  bool closed = false;
  std::vector<BoundaryEdge> edges;  // consecutive: edges[i].b == edges[i+1].a

  double length() const;
};

// Outer curve first, then holes by index, then axis runs. Edges on r = 0 are
// reported as axis runs and removed from the outer run (which is then open).
// Throws InvalidInput if the boundary is not a manifold.
std::vector<BoundaryRun> boundary_trace(const TriMesh& mesh);

// Line-oriented text format:
//   format_version 1
//   h <h>
//   vertices <n>
//   <r> <z> <tag>          tag: interior | outer | axis | hole:<k>
//   triangles <m>
//   <i> <j> <k>
std::string write_mesh_text(const TriMesh& mesh);
TriMesh read_mesh_text(std::string_view text);

}  // namespace beltrami

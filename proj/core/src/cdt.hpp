#pragma once

// Incremental constrained Delaunay triangulation (Bowyer-Watson cavities that
// never cross constrained edges) with Ruppert-style quality refinement.
// Internal to the mesh module.

#include <array>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "beltrami/xsection.hpp"

namespace beltrami::detail {

struct CdtTriangle {
  std::array<int, 3> v{};
  std::array<int, 3> nb{-1, -1, -1};  // neighbour across the edge opposite v[i]
  std::array<bool, 3> fixed{};         // constrained edge opposite v[i]
  bool alive = true;
  bool inside = false;
};

class Cdt {
 public:
  // Builds a super triangle enclosing [r0,r1] x [z0,z1] with a wide margin.
  Cdt(double r0, double z0, double r1, double z1);

  // Inserts p; returns the vertex index (an existing one if p coincides
  // with a vertex). `curve` >= 0 marks the vertex as lying on that curve.
  int insert(Point p, int curve = -1);

  // Makes a -> b a constrained edge, splitting it at midpoints until the
  // pieces appear in the triangulation.
  void add_segment(int a, int b, int curve);

  // Flood fill from the super triangle; triangles enclosed by an odd number
  // of constrained edges are marked inside.
  void classify_inside();

  struct RefineLimits {
    double min_angle_deg = 20.5;
    double max_circumradius = 0.0;  // <= 0 disables the size criterion
    double min_segment_length = 0.0;
    std::size_t max_vertices = 0;
  };
  void refine(const RefineLimits& limits);

  const std::vector<Point>& points() const { return pts_; }
  const std::vector<CdtTriangle>& triangles() const { return tris_; }
  // Curve id per vertex, -1 for interior / super vertices.
  const std::vector<int>& vertex_curve() const { return vertex_curve_; }
  bool is_super(int v) const { return v < 3; }

 private:
  struct Located {
    int tri = -1;
    int edge = -1;    // >= 0 when p lies on this edge of tri
    int vertex = -1;  // >= 0 when p coincides with a vertex
    int blocked_tri = -1;
    int blocked_edge = -1;  // constrained edge the walk refused to cross
  };
  struct CavityEdge {
    int a, b;
    int outer;  // neighbour outside the cavity, -1 for none
    bool fixed;
    bool inside;
  };

  Located locate(Point p, int start, bool stop_at_fixed);
  std::vector<int> cavity(Point p, const Located& loc) const;
  std::vector<CavityEdge> cavity_boundary(const std::vector<int>& cav) const;
  int insert_located(Point p, const Located& loc, int curve, bool split_fixed);
  int new_triangle();
  bool find_edge(int a, int b, int& tri, int& edge) const;
  void split_segment(int tri, int edge);
  bool is_bad(int t, const RefineLimits& limits) const;
  static std::uint64_t key(int a, int b);

  std::vector<Point> pts_;
  std::vector<CdtTriangle> tris_;
  std::vector<int> free_;
  std::vector<int> vertex_tri_;
  std::vector<int> vertex_curve_;
  std::unordered_map<std::uint64_t, int> segment_curve_;
  std::vector<int> recent_;  // triangles created by the last insertion
  int hint_ = 0;
  std::uint64_t rng_ = 0x9E3779B97F4A7C15ull;
};

}  // namespace beltrami::detail

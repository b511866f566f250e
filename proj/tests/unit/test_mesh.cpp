#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "beltrami/errors.hpp"
#include "beltrami/mesh.hpp"
#include "beltrami/shapes.hpp"

using namespace beltrami;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_valid(const TriMesh& mesh) {
  ASSERT_EQ(mesh.tags.size(), mesh.vertices.size());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) EXPECT_GT(mesh.triangle_area(t), 0.0);
  // Conformity: interior edges are shared by exactly two triangles and
  // boundary edges join boundary vertices.
  std::map<std::pair<int, int>, int> count;
  for (const Triangle& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [edge, n] : count) {
    EXPECT_LE(n, 2);
    if (n == 1) {
      EXPECT_TRUE(mesh.is_boundary(edge.first));
      EXPECT_TRUE(mesh.is_boundary(edge.second));
    }
  }
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.tags[v].kind == VertexKind::axis) {
      EXPECT_LE(mesh.vertices[v].r, kAxisTolerance);
    } else {
      EXPECT_GT(mesh.vertices[v].r, 0.0);
    }
  }
}

}  // namespace

TEST(Triangulate, RectangleAreaIsExact) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::rectangle(1, 0, 2, 1)), 0.25);
  expect_valid(mesh);
  EXPECT_NEAR(mesh.area(), 1.0, 1e-12);
  EXPECT_GE(min_angle_deg(mesh), 20.0);
  EXPECT_FALSE(mesh.has_axis());
}

TEST(Triangulate, CircleArea) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::circle({2, 0}, 1, 512)), 0.05);
  expect_valid(mesh);
  EXPECT_NEAR(mesh.area(), kPi, 2e-3 * kPi);
  EXPECT_GE(min_angle_deg(mesh), 20.0);
}

TEST(Triangulate, QualityOnAssortedShapes) {
  const std::vector<CrossSection> shapes_{
      CrossSection::make(shapes::half_disc(1, 512)),
      CrossSection::make(shapes::ellipse({3, 0}, 0.2, 1.0, 400)),
      CrossSection::make(shapes::d_shape(1, 1, 256)),
      CrossSection::make(shapes::circle({5, 0}, 3, 512),
                         {shapes::reversed(shapes::circle({5, 0}, 1, 256))}),
      CrossSection::make(shapes::rectangle(0, -1, 0.5, 1))};
  for (const CrossSection& cs : shapes_) {
    for (double h : {0.1, 0.04}) {
      const TriMesh mesh = triangulate(cs, h);
      expect_valid(mesh);
      EXPECT_GE(min_angle_deg(mesh), 20.0);
    }
  }
}

TEST(Triangulate, TagsAxisAndHoles) {
  const TriMesh ball = triangulate(CrossSection::make(shapes::half_disc(1, 256)), 0.1);
  EXPECT_TRUE(ball.has_axis());
  const CrossSection holed = CrossSection::make(
      shapes::circle({5, 0}, 3, 256), {shapes::reversed(shapes::circle({5, 0}, 1, 128))});
  const TriMesh mesh = triangulate(holed, 0.2);
  int hole = 0;
  for (const VertexTag& t : mesh.tags) {
    if (t.kind == VertexKind::hole_boundary) {
      EXPECT_EQ(t.hole, 0);
      ++hole;
    }
  }
  EXPECT_GT(hole, 20);
  EXPECT_NEAR(mesh.area(), 8 * kPi, 0.01 * 8 * kPi);
}

TEST(Triangulate, RejectsUnresolvableInput) {
  const CrossSection tiny_hole = CrossSection::make(
      shapes::circle({5, 0}, 3, 256), {shapes::reversed(shapes::circle({5, 0}, 0.01, 32))});
  EXPECT_THROW(triangulate(tiny_hole, 0.5), InvalidInput);
  EXPECT_THROW(triangulate(CrossSection::make(shapes::rectangle(1, 0, 2, 1)), 0.0), InvalidInput);
  // Invalid geometry never reaches the mesher.
  EXPECT_THROW(CrossSection::make(shapes::circle({5, 0}, 1, 64), {shapes::circle({5, 0}, 2, 64)}),
               InvalidInput);
  EXPECT_THROW(CrossSection::make({{1, 0}, {2, 1}, {2, 0}, {1, 1}}), InvalidInput);
}

TEST(Triangulate, Deterministic) {
  const CrossSection cs = CrossSection::make(shapes::ellipse({2, 0.3}, 0.7, 0.4, 300));
  EXPECT_EQ(triangulate(cs, 0.03), triangulate(cs, 0.03));
}

TEST(Triangulate, ScalesExactlyByPowersOfTwo) {
  const CrossSection cs = CrossSection::make(shapes::circle({2, 0}, 0.5, 512));
  const TriMesh base = triangulate(cs, 0.05);
  for (double s : {2.0, 4.0, 0.5}) EXPECT_EQ(triangulate(cs.scaled(s), 0.05 * s), base.scaled(s));
}

TEST(RevolvedVolume, Rectangle) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::rectangle(1, 0, 2, 1)), 0.25);
  EXPECT_NEAR(revolved_volume(mesh), 3 * kPi, 1e-12);
}

TEST(RevolvedVolume, Ball) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::half_disc(1, 2048)), 0.02);
  EXPECT_NEAR(revolved_volume(mesh), 4 * kPi / 3, 5e-3 * 4 * kPi / 3);
}

TEST(RevolvedVolume, ScalesCubically) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::ellipse({2, 0}, 1, 0.5, 256)), 0.1);
  EXPECT_EQ(revolved_volume(mesh.scaled(2.0)), 8.0 * revolved_volume(mesh));
  EXPECT_NEAR(revolved_volume(mesh.scaled(3.0)), 27.0 * revolved_volume(mesh),
              1e-12 * 27.0 * revolved_volume(mesh));
}

// Chords of width h cut O(h^2) from a circle; the mesh volume follows.
TEST(RevolvedVolume, SecondOrderForCircle) {
  const CrossSection cs = CrossSection::make(shapes::circle({2, 0}, 1, 8192));
  const double exact = 4 * kPi * kPi;
  std::vector<double> err;
  for (double h : {0.2, 0.1, 0.05}) err.push_back(std::abs(revolved_volume(triangulate(cs, h)) - exact));
  EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.9);
}

TEST(BoundaryTrace, RectangleRunsAndNormals) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::rectangle(1, 0, 3, 1)), 0.25);
  const auto runs = boundary_trace(mesh);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_TRUE(runs[0].closed);
  EXPECT_DOUBLE_EQ(runs[0].length(), 6.0);
  // Four straight pieces, one per side.
  std::set<std::pair<int, int>> normals;
  int turns = 0;
  const auto& e = runs[0].edges;
  for (std::size_t i = 0; i < e.size(); ++i) {
    normals.insert({static_cast<int>(std::lround(e[i].n_r)), static_cast<int>(std::lround(e[i].n_z))});
    EXPECT_NEAR(std::abs(e[i].n_r) + std::abs(e[i].n_z), 1.0, 1e-15);
    const auto& next = e[(i + 1) % e.size()];
    if (next.n_r != e[i].n_r || next.n_z != e[i].n_z) ++turns;
  }
  EXPECT_EQ(normals, (std::set<std::pair<int, int>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
  EXPECT_EQ(turns, 4);
}

TEST(BoundaryTrace, CircleNormalsAreRadial) {
  const double h = 0.05;
  const TriMesh mesh = triangulate(CrossSection::make(shapes::circle({2, 0}, 1, 512)), h);
  const auto runs = boundary_trace(mesh);
  ASSERT_EQ(runs.size(), 1u);
  double sum_r = 0, sum_z = 0;
  for (const BoundaryEdge& e : runs[0].edges) {
    const Point a = mesh.vertices[e.a], b = mesh.vertices[e.b];
    const double mr = 0.5 * (a.r + b.r) - 2, mz = 0.5 * (a.z + b.z);
    const double len = std::hypot(mr, mz);
    EXPECT_GT((e.n_r * mr + e.n_z * mz) / len, std::cos(h));
    sum_r += e.n_r * e.length;
    sum_z += e.n_z * e.length;
  }
  EXPECT_NEAR(sum_r, 0.0, 1e-12);
  EXPECT_NEAR(sum_z, 0.0, 1e-12);
}

TEST(BoundaryTrace, AxisEdgesReportedSeparately) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::half_disc(1, 512)), 0.05);
  const auto runs = boundary_trace(mesh);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].kind, RunKind::outer);
  EXPECT_FALSE(runs[0].closed);
  EXPECT_EQ(runs[1].kind, RunKind::axis);
  EXPECT_NEAR(runs[1].length(), 2.0, 1e-12);
  for (const BoundaryEdge& e : runs[1].edges) {
    EXPECT_EQ(e.n_r, -1.0);
    EXPECT_EQ(e.n_z, 0.0);
  }
  // Divergence theorem for the constant field (1, 0).
  double flux = 0.0;
  for (const auto& run : runs) {
    for (const BoundaryEdge& e : run.edges) flux += e.n_r * e.length;
  }
  EXPECT_NEAR(flux, 0.0, 1e-10);
}

TEST(BoundaryTrace, HoleCycle) {
  const TriMesh mesh = triangulate(
      CrossSection::make(shapes::circle({5, 0}, 3, 256),
                         {shapes::reversed(shapes::circle({5, 0}, 1, 128))}),
      0.2);
  const auto runs = boundary_trace(mesh);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[1].kind, RunKind::hole);
  EXPECT_TRUE(runs[1].closed);
  // Hole normals point towards the hole centre (out of the cross-section).
  for (const BoundaryEdge& e : runs[1].edges) {
    const Point a = mesh.vertices[e.a];
    EXPECT_LT(e.n_r * (a.r - 5) + e.n_z * a.z, 0.0);
  }
}

TEST(BoundaryTrace, RejectsNonManifold) {
  // Two triangles touching at a single vertex.
  TriMesh bow;
  bow.vertices = {{1, 0}, {2, 0}, {1.5, 0.5}, {2, 1}, {1, 1}};
  bow.triangles = {{0, 1, 2}, {2, 3, 4}};
  bow.tags.assign(5, VertexTag{VertexKind::outer_boundary, -1});
  EXPECT_THROW(boundary_trace(bow), InvalidInput);
}

TEST(RefineUniform, NestedAndAreaPreserving) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::half_disc(1, 64)), 0.2);
  const TriMesh fine = refine_uniform(mesh);
  expect_valid(fine);
  EXPECT_EQ(fine.num_triangles(), 4 * mesh.num_triangles());
  EXPECT_NEAR(fine.area(), mesh.area(), 1e-13);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    EXPECT_EQ(fine.vertices[v], mesh.vertices[v]);
    EXPECT_EQ(fine.tags[v], mesh.tags[v]);
  }
  EXPECT_EQ(boundary_trace(fine)[1].kind, RunKind::axis);
}

TEST(MeshText, RoundTrip) {
  const TriMesh mesh = triangulate(
      CrossSection::make(shapes::circle({5, 0}, 3, 128),
                         {shapes::reversed(shapes::circle({5, 0}, 1, 64))}),
      0.4);
  EXPECT_EQ(read_mesh_text(write_mesh_text(mesh)), mesh);
  const TriMesh ball = triangulate(CrossSection::make(shapes::half_disc(1, 64)), 0.2);
  EXPECT_EQ(read_mesh_text(write_mesh_text(ball)), ball);
}

TEST(MeshText, ReportsByteOffset) {
  const std::string text = write_mesh_text(
      triangulate(CrossSection::make(shapes::rectangle(1, 0, 2, 1)), 0.5));
  try {
    read_mesh_text(text.substr(0, text.size() / 2));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_LE(e.byte_offset(), text.size() / 2);
  }
  std::string bad = text;
  bad.replace(bad.find("outer"), 5, "ouTer");
  EXPECT_THROW(read_mesh_text(bad), ParseError);
}

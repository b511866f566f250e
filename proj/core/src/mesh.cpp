#include "beltrami/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <unordered_map>

#include "beltrami/errors.hpp"
#include "cdt.hpp"

namespace beltrami {
namespace {

double tri_area(Point a, Point b, Point c) {
  return 0.5 * ((b.r - a.r) * (c.z - a.z) - (b.z - a.z) * (c.r - a.r));
}

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

bool far_from_curve(const Polyline& c, Point p, double clearance) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (distance_to_segment(p, c[i], c[(i + 1) % n]) < clearance) return false;
  }
  return true;
}

double cs_area_estimate(const std::vector<Polyline>& curves) {
  double a = std::abs(signed_area(curves[0]));
  for (std::size_t c = 1; c < curves.size(); ++c) a -= std::abs(signed_area(curves[c]));
  return std::max(a, 0.0);
}

}  // namespace

double TriMesh::triangle_area(std::size_t t) const {
  const Triangle& T = triangles[t];
  return tri_area(vertices[T[0]], vertices[T[1]], vertices[T[2]]);
}

double TriMesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
  return a;
}

bool TriMesh::has_axis() const {
  return std::any_of(tags.begin(), tags.end(),
                     [](const VertexTag& t) { return t.kind == VertexKind::axis; });
}

TriMesh TriMesh::scaled(double s) const {
  TriMesh out = *this;
  for (Point& p : out.vertices) {
    p.r *= s;
    p.z *= s;
  }
  out.h *= s;
  return out;
}

TriMesh triangulate(const CrossSection& cs, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("mesh size h must be positive");
  // Each curve needs a few edges or its interior cannot be meshed.
  if (closed_length(cs.outer()) < 3.0 * h) throw InvalidInput("h too large for the outer curve");
  for (std::size_t k = 0; k < cs.holes().size(); ++k) {
    if (closed_length(cs.holes()[k]) < 3.0 * h) {
      throw InvalidInput("h too large to resolve hole " + std::to_string(k));
    }
  }

  std::vector<Polyline> curves{resample(cs.outer(), h)};
  for (const Polyline& hole : cs.holes()) curves.push_back(resample(hole, h));

  double r0 = curves[0][0].r, r1 = r0, z0 = curves[0][0].z, z1 = z0;
  for (const Point& p : curves[0]) {
    r0 = std::min(r0, p.r);
    r1 = std::max(r1, p.r);
    z0 = std::min(z0, p.z);
    z1 = std::max(z1, p.z);
  }

  detail::Cdt cdt(r0, z0, r1, z1);
  std::vector<std::vector<int>> ids(curves.size());
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (const Point& p : curves[c]) ids[c].push_back(cdt.insert(p, static_cast<int>(c)));
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const std::size_t n = ids[c].size();
    for (std::size_t i = 0; i < n; ++i) {
      cdt.add_segment(ids[c][i], ids[c][(i + 1) % n], static_cast<int>(c));
    }
  }
  cdt.classify_inside();

  // Triangular lattice of interior points, kept clear of the boundary.
  const double dz = h * std::sqrt(3.0) / 2.0;
  const double clearance = 0.55 * h;
  for (long row = 0;; ++row) {
    const double z = z0 + static_cast<double>(row) * dz;
    if (z > z1) break;
    const double offset = (row % 2 == 0) ? 0.0 : 0.5 * h;
    for (long col = 0;; ++col) {
      const double r = r0 + offset + static_cast<double>(col) * h;
      if (r > r1) break;
      const Point p{r, z};
      if (!point_in_polygon(curves[0], p)) continue;
      bool ok = true;
      for (std::size_t c = 0; c < curves.size() && ok; ++c) {
        if (c > 0 && point_in_polygon(curves[c], p)) ok = false;
        if (ok) ok = far_from_curve(curves[c], p, clearance);
      }
      if (ok) cdt.insert(p);
    }
  }

  const double expected = cs_area_estimate(curves) / (0.4 * h * h);
  detail::Cdt::RefineLimits limits;
  limits.max_circumradius = 0.9 * h;
  limits.min_segment_length = 1e-3 * h;
  limits.max_vertices = static_cast<std::size_t>(50.0 * expected) + 100000;
  cdt.refine(limits);

  // Keep inside triangles; renumber vertices in insertion order.
  const auto& tris = cdt.triangles();
  const auto& pts = cdt.points();
  std::vector<int> used(pts.size(), 0);
  for (const auto& t : tris) {
    if (!t.alive || !t.inside) continue;
    for (int v : t.v) used[v] = 1;
  }
  std::vector<int> label(pts.size(), -1);
  TriMesh mesh;
  mesh.h = h;
  for (std::size_t v = 0; v < pts.size(); ++v) {
    if (!used[v]) continue;
    label[v] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(pts[v]);
    const int curve = cdt.vertex_curve()[v];
    VertexTag tag;
    if (curve == 0) {
      tag.kind = pts[v].r <= kAxisTolerance ? VertexKind::axis : VertexKind::outer_boundary;
    } else if (curve > 0) {
      tag.kind = VertexKind::hole_boundary;
      tag.hole = curve - 1;
    }
    mesh.tags.push_back(tag);
  }
  for (const auto& t : tris) {
    if (!t.alive || !t.inside) continue;
    mesh.triangles.push_back({label[t.v[0]], label[t.v[1]], label[t.v[2]]});
  }
  if (mesh.triangles.empty()) throw InvalidInput("triangulation produced no triangles");
  return mesh;
}

TriMesh refine_uniform(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, int> count;
  for (const Triangle& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
  }
  TriMesh out;
  out.h = 0.5 * mesh.h;
  out.vertices = mesh.vertices;
  out.tags = mesh.tags;
  std::unordered_map<std::uint64_t, int> mid;
  auto midpoint = [&](int a, int b) {
    const std::uint64_t k = edge_key(a, b);
    const auto it = mid.find(k);
    if (it != mid.end()) return it->second;
    const Point pa = mesh.vertices[a], pb = mesh.vertices[b];
    const Point m{0.5 * (pa.r + pb.r), 0.5 * (pa.z + pb.z)};
    VertexTag tag;
    if (count[k] == 1) {
      const VertexTag ta = mesh.tags[a], tb = mesh.tags[b];
      if (m.r <= kAxisTolerance) {
        tag.kind = VertexKind::axis;
      } else if (ta.kind == VertexKind::hole_boundary || tb.kind == VertexKind::hole_boundary) {
        tag.kind = VertexKind::hole_boundary;
        tag.hole = ta.kind == VertexKind::hole_boundary ? ta.hole : tb.hole;
      } else {
        tag.kind = VertexKind::outer_boundary;
      }
    }
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(m);
    out.tags.push_back(tag);
    mid.emplace(k, id);
    return id;
  };
  out.triangles.reserve(4 * mesh.triangles.size());
  for (const Triangle& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]);
    const int bc = midpoint(t[1], t[2]);
    const int ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

double revolved_volume(const TriMesh& mesh) {
  double v = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& T = mesh.triangles[t];
    const double rc =
        (mesh.vertices[T[0]].r + mesh.vertices[T[1]].r + mesh.vertices[T[2]].r) / 3.0;
    v += mesh.triangle_area(t) * rc;
  }
  return 2.0 * std::numbers::pi * v;
}

double min_angle_deg(const TriMesh& mesh) {
  double worst = 180.0;
  for (const Triangle& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Point p = mesh.vertices[t[k]];
      const Point a = mesh.vertices[t[(k + 1) % 3]];
      const Point b = mesh.vertices[t[(k + 2) % 3]];
      const double ar = a.r - p.r, az = a.z - p.z, br = b.r - p.r, bz = b.z - p.z;
      const double ang = std::atan2(std::abs(ar * bz - az * br), ar * br + az * bz);
      worst = std::min(worst, ang * 180.0 / std::numbers::pi);
    }
  }
  return worst;
}

double BoundaryRun::length() const {
  double s = 0.0;
  for (const BoundaryEdge& e : edges) s += e.length;
  return s;
}

std::vector<BoundaryRun> boundary_trace(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, int> count;
  for (const Triangle& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
  }

  struct Keyed {
    RunKind kind;
    int hole;
    BoundaryEdge edge;
  };
  std::vector<Keyed> edges;
  for (const Triangle& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (count[edge_key(a, b)] != 1) continue;
      const Point pa = mesh.vertices[a], pb = mesh.vertices[b];
      const double dr = pb.r - pa.r, dz = pb.z - pa.z;
      const double len = std::hypot(dr, dz);
      BoundaryEdge be{a, b, len, dz / len, -dr / len};
      const VertexTag ta = mesh.tags[a], tb = mesh.tags[b];
      if (ta.kind == VertexKind::axis && tb.kind == VertexKind::axis) {
        edges.push_back({RunKind::axis, -1, be});
      } else if (ta.kind == VertexKind::hole_boundary || tb.kind == VertexKind::hole_boundary) {
        edges.push_back({RunKind::hole,
                         ta.kind == VertexKind::hole_boundary ? ta.hole : tb.hole, be});
      } else {
        edges.push_back({RunKind::outer, -1, be});
      }
    }
  }

  // Group edges of equal (kind, hole) into chains.
  std::map<std::pair<int, int>, std::vector<BoundaryEdge>> groups;
  for (const Keyed& k : edges) groups[{static_cast<int>(k.kind), k.hole}].push_back(k.edge);

  std::vector<BoundaryRun> runs;
  for (auto& [key, list] : groups) {
    std::unordered_map<int, std::size_t> from;
    std::unordered_map<int, int> incoming;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!from.emplace(list[i].a, i).second) {
        throw InvalidInput("mesh boundary is not a manifold");
      }
      ++incoming[list[i].b];
    }
    std::vector<char> used(list.size(), 0);
    // Open chains start where no edge of the group arrives.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!incoming.count(list[i].a)) starts.push_back(i);
    }
    std::sort(starts.begin(), starts.end(),
              [&](std::size_t x, std::size_t y) { return list[x].a < list[y].a; });
    auto chain = [&](std::size_t first, bool closed) {
      BoundaryRun run;
      run.kind = static_cast<RunKind>(key.first);
      run.hole = key.second;
      run.closed = closed;
      std::size_t i = first;
      while (!used[i]) {
        used[i] = 1;
        run.edges.push_back(list[i]);
        const auto it = from.find(list[i].b);
        if (it == from.end()) break;
        i = it->second;
      }
      runs.push_back(std::move(run));
    };
    for (std::size_t s : starts) chain(s, false);
    while (true) {
      std::size_t best = list.size();
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (!used[i] && (best == list.size() || list[i].a < list[best].a)) best = i;
      }
      if (best == list.size()) break;
      chain(best, true);
    }
  }
  std::stable_sort(runs.begin(), runs.end(), [](const BoundaryRun& x, const BoundaryRun& y) {
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    return x.hole < y.hole;
  });
  return runs;
}

namespace {

const char* tag_text(const VertexTag& t, char* buf, std::size_t n) {
  switch (t.kind) {
    case VertexKind::interior:
      return "interior";
    case VertexKind::outer_boundary:
      return "outer";
    case VertexKind::axis:
      return "axis";
    case VertexKind::hole_boundary:
      std::snprintf(buf, n, "hole:%d", t.hole);
      return buf;
  }
  return "interior";
}

class Tokens {
 public:
  explicit Tokens(std::string_view s) : s_(s) {}

  std::size_t offset() const { return pos_; }

  std::string_view next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    start_ = pos_;
    if (pos_ >= s_.size()) throw ParseError("unexpected end of mesh text", pos_);
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start_, pos_ - start_);
  }

  void expect(std::string_view word) {
    if (next() != word) throw ParseError("expected '" + std::string(word) + "'", start_);
  }

  double number() {
    const std::string_view t = next();
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v)) {
      throw ParseError("malformed number", start_);
    }
    return v;
  }

  long integer() {
    const std::string_view t = next();
    long v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) throw ParseError("malformed integer", start_);
    return v;
  }

  std::size_t token_start() const { return start_; }

  bool at_end() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return pos_ >= s_.size();
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t start_ = 0;
};

}  // namespace

std::string write_mesh_text(const TriMesh& mesh) {
  std::string out = "format_version 1\n";
  char buf[128];
  char tb[32];
  std::snprintf(buf, sizeof buf, "h %.17g\nvertices %zu\n", mesh.h, mesh.vertices.size());
  out += buf;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %s\n", mesh.vertices[v].r, mesh.vertices[v].z,
                  tag_text(mesh.tags[v], tb, sizeof tb));
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "triangles %zu\n", mesh.triangles.size());
  out += buf;
  for (const Triangle& t : mesh.triangles) {
    std::snprintf(buf, sizeof buf, "%d %d %d\n", t[0], t[1], t[2]);
    out += buf;
  }
  return out;
}

TriMesh read_mesh_text(std::string_view text) {
  Tokens tok(text);
  tok.expect("format_version");
  if (tok.integer() != 1) throw ParseError("unsupported mesh format version", tok.token_start());
  TriMesh mesh;
  tok.expect("h");
  mesh.h = tok.number();
  tok.expect("vertices");
  const long nv = tok.integer();
  if (nv < 0) throw ParseError("negative vertex count", tok.token_start());
  for (long v = 0; v < nv; ++v) {
    const double r = tok.number();
    const double z = tok.number();
    const std::string_view t = tok.next();
    VertexTag tag;
    if (t == "interior") {
    } else if (t == "outer") {
      tag.kind = VertexKind::outer_boundary;
    } else if (t == "axis") {
      tag.kind = VertexKind::axis;
    } else if (t.substr(0, 5) == "hole:") {
      tag.kind = VertexKind::hole_boundary;
      const auto [p, ec] = std::from_chars(t.data() + 5, t.data() + t.size(), tag.hole);
      if (ec != std::errc() || p != t.data() + t.size() || tag.hole < 0) {
        throw ParseError("malformed hole tag", tok.token_start());
      }
    } else {
      throw ParseError("unknown vertex tag", tok.token_start());
    }
    mesh.vertices.push_back({r, z});
    mesh.tags.push_back(tag);
  }
  tok.expect("triangles");
  const long nt = tok.integer();
  if (nt < 0) throw ParseError("negative triangle count", tok.token_start());
  for (long t = 0; t < nt; ++t) {
    Triangle tri{};
    for (int& v : tri) {
      const long id = tok.integer();
      if (id < 0 || id >= nv) throw ParseError("vertex index out of range", tok.token_start());
      v = static_cast<int>(id);
    }
    mesh.triangles.push_back(tri);
  }
  if (!tok.at_end()) throw ParseError("trailing content after mesh", tok.offset());
  return mesh;
}

}  // namespace beltrami

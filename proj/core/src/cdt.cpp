#include "cdt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "beltrami/errors.hpp"
#include "predicates.hpp"

namespace beltrami::detail {
namespace {

Point circumcenter(Point a, Point b, Point c) {
  const double bx = b.r - a.r, by = b.z - a.z;
  const double cx = c.r - a.r, cy = c.z - a.z;
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return {a.r + (cy * b2 - by * c2) / d, a.z + (bx * c2 - cx * b2) / d};
}

double dist2(Point a, Point b) {
  const double dr = a.r - b.r, dz = a.z - b.z;
  return dr * dr + dz * dz;
}

int edge_opposite(const CdtTriangle& t, int a, int b) {
  for (int k = 0; k < 3; ++k) {
    if (t.v[k] != a && t.v[k] != b) return k;
  }
  return -1;
}

}  // namespace

std::uint64_t Cdt::key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

Cdt::Cdt(double r0, double z0, double r1, double z1) {
  const double cr = 0.5 * (r0 + r1), cz = 0.5 * (z0 + z1);
  double ext = std::max(r1 - r0, z1 - z0);
  if (!(ext > 0.0)) ext = 1.0;
  const double big = 64.0 * ext;
  pts_ = {{cr - 2.0 * big, cz - big}, {cr + 2.0 * big, cz - big}, {cr, cz + 2.0 * big}};
  vertex_curve_ = {-1, -1, -1};
  vertex_tri_ = {0, 0, 0};
  CdtTriangle t;
  t.v = {0, 1, 2};
  tris_.push_back(t);
}

int Cdt::new_triangle() {
  if (!free_.empty()) {
    const int t = free_.back();
    free_.pop_back();
    tris_[t] = CdtTriangle{};
    return t;
  }
  tris_.emplace_back();
  return static_cast<int>(tris_.size()) - 1;
}

Cdt::Located Cdt::locate(Point p, int start, bool stop_at_fixed) {
  int t = start;
  if (t < 0 || t >= static_cast<int>(tris_.size()) || !tris_[t].alive) t = hint_;
  if (!tris_[t].alive) {
    t = static_cast<int>(std::find_if(tris_.begin(), tris_.end(),
                                      [](const CdtTriangle& x) { return x.alive; }) -
                         tris_.begin());
  }
  Located loc;
  const std::size_t limit = 4 * tris_.size() + 64;
  bool settled = false;
  for (std::size_t step = 0; step < limit; ++step) {
    rng_ ^= rng_ << 13;
    rng_ ^= rng_ >> 7;
    rng_ ^= rng_ << 17;
    const int r = static_cast<int>(rng_ % 3);
    const CdtTriangle& tri = tris_[t];
    int next = -1;
    for (int j = 0; j < 3; ++j) {
      const int e = (r + j) % 3;
      if (orient2d(pts_[tri.v[(e + 1) % 3]], pts_[tri.v[(e + 2) % 3]], p) < 0.0) {
        if (stop_at_fixed && tri.fixed[e]) {
          loc.blocked_tri = t;
          loc.blocked_edge = e;
          return loc;
        }
        next = tri.nb[e];
        if (next < 0) throw std::logic_error("point outside the triangulation");
        break;
      }
    }
    if (next < 0) {
      settled = true;
      break;
    }
    t = next;
  }
  if (!settled) {
    // Fall back to an exhaustive search.
    t = -1;
    for (std::size_t k = 0; k < tris_.size() && t < 0; ++k) {
      const CdtTriangle& tri = tris_[k];
      if (!tri.alive) continue;
      bool ok = true;
      for (int e = 0; e < 3 && ok; ++e) {
        ok = orient2d(pts_[tri.v[(e + 1) % 3]], pts_[tri.v[(e + 2) % 3]], p) >= 0.0;
      }
      if (ok) t = static_cast<int>(k);
    }
    if (t < 0) throw std::logic_error("point location failed");
  }

  loc.tri = t;
  const CdtTriangle& tri = tris_[t];
  int zeros = 0, z0 = -1, z1 = -1;
  for (int e = 0; e < 3; ++e) {
    if (orient2d(pts_[tri.v[(e + 1) % 3]], pts_[tri.v[(e + 2) % 3]], p) == 0.0) {
      (zeros == 0 ? z0 : z1) = e;
      ++zeros;
    }
  }
  if (zeros >= 2) {
    loc.vertex = tri.v[3 - z0 - z1];
  } else if (zeros == 1) {
    loc.edge = z0;
  }
  return loc;
}

std::vector<int> Cdt::cavity(Point p, const Located& loc) const {
  std::vector<int> cav{loc.tri};
  if (loc.edge >= 0) {
    const int n = tris_[loc.tri].nb[loc.edge];
    if (n >= 0) cav.push_back(n);
  }
  for (std::size_t i = 0; i < cav.size(); ++i) {
    const CdtTriangle& t = tris_[cav[i]];
    for (int e = 0; e < 3; ++e) {
      const int n = t.nb[e];
      if (n < 0 || t.fixed[e]) continue;
      if (std::find(cav.begin(), cav.end(), n) != cav.end()) continue;
      const CdtTriangle& nt = tris_[n];
      if (incircle(pts_[nt.v[0]], pts_[nt.v[1]], pts_[nt.v[2]], p) > 0.0) cav.push_back(n);
    }
  }
  return cav;
}

std::vector<Cdt::CavityEdge> Cdt::cavity_boundary(const std::vector<int>& cav) const {
  std::vector<CavityEdge> out;
  for (int t : cav) {
    const CdtTriangle& tri = tris_[t];
    for (int e = 0; e < 3; ++e) {
      const int n = tri.nb[e];
      if (n >= 0 && std::find(cav.begin(), cav.end(), n) != cav.end()) continue;
      out.push_back({tri.v[(e + 1) % 3], tri.v[(e + 2) % 3], n, tri.fixed[e], tri.inside});
    }
  }
  return out;
}

int Cdt::insert_located(Point p, const Located& loc, int curve, bool split_fixed) {
  if (loc.vertex >= 0) {
    if (curve >= 0 && vertex_curve_[loc.vertex] < 0) vertex_curve_[loc.vertex] = curve;
    return loc.vertex;
  }
  const int vi = static_cast<int>(pts_.size());

  int sa = -1, sb = -1, seg_curve = -1;
  if (loc.edge >= 0 && tris_[loc.tri].fixed[loc.edge]) split_fixed = true;
  if (split_fixed) {
    const CdtTriangle& t = tris_[loc.tri];
    sa = t.v[(loc.edge + 1) % 3];
    sb = t.v[(loc.edge + 2) % 3];
    const auto it = segment_curve_.find(key(sa, sb));
    seg_curve = it != segment_curve_.end() ? it->second : -1;
    if (it != segment_curve_.end()) segment_curve_.erase(it);
  }

  const std::vector<int> cav = cavity(p, loc);
  const std::vector<CavityEdge> bnd = cavity_boundary(cav);
  for (const CavityEdge& ce : bnd) {
    if (orient2d(pts_[ce.a], pts_[ce.b], p) <= 0.0) {
      throw std::logic_error("triangulation cavity is not star-shaped");
    }
  }

  pts_.push_back(p);
  vertex_curve_.push_back(curve >= 0 ? curve : seg_curve);
  vertex_tri_.push_back(-1);

  for (int t : cav) {
    tris_[t].alive = false;
    free_.push_back(t);
  }

  std::vector<int> fan(bnd.size());
  for (std::size_t k = 0; k < bnd.size(); ++k) {
    const CavityEdge& ce = bnd[k];
    const int t = new_triangle();
    fan[k] = t;
    CdtTriangle& tri = tris_[t];
    tri.v = {vi, ce.a, ce.b};
    tri.nb = {ce.outer, -1, -1};
    tri.fixed = {ce.fixed, false, false};
    tri.inside = ce.inside;
    tri.alive = true;
    if (ce.outer >= 0) {
      CdtTriangle& o = tris_[ce.outer];
      o.nb[edge_opposite(o, ce.a, ce.b)] = t;
    }
    vertex_tri_[ce.a] = t;
    vertex_tri_[ce.b] = t;
  }
  vertex_tri_[vi] = fan.front();

  for (std::size_t k = 0; k < bnd.size(); ++k) {
    CdtTriangle& tri = tris_[fan[k]];
    const int a = tri.v[1], b = tri.v[2];
    for (std::size_t j = 0; j < bnd.size(); ++j) {
      if (j == k) continue;
      if (bnd[j].b == a) tri.nb[2] = fan[j];
      if (bnd[j].a == b) tri.nb[1] = fan[j];
    }
    if (split_fixed) {
      if (a == sa || a == sb) tri.fixed[2] = true;
      if (b == sa || b == sb) tri.fixed[1] = true;
    }
  }
  if (split_fixed) {
    segment_curve_[key(sa, vi)] = seg_curve;
    segment_curve_[key(vi, sb)] = seg_curve;
  }
  hint_ = fan.front();
  recent_ = std::move(fan);
  return vi;
}

int Cdt::insert(Point p, int curve) {
  const Located loc = locate(p, hint_, false);
  return insert_located(p, loc, curve, false);
}

bool Cdt::find_edge(int a, int b, int& tri, int& edge) const {
  std::vector<int> stack{vertex_tri_[a]};
  std::vector<int> seen;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    if (t < 0 || std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
    seen.push_back(t);
    const CdtTriangle& T = tris_[t];
    if (!T.alive) continue;
    const bool has_b = T.v[0] == b || T.v[1] == b || T.v[2] == b;
    if (has_b) {
      tri = t;
      edge = edge_opposite(T, a, b);
      return true;
    }
    for (int e = 0; e < 3; ++e) {
      if (T.v[e] != a) stack.push_back(T.nb[e]);
    }
  }
  return false;
}

void Cdt::add_segment(int a, int b, int curve) {
  std::vector<std::pair<int, int>> work{{a, b}};
  const double floor2 = 1e-24 * dist2(pts_[a], pts_[b]);
  while (!work.empty()) {
    const auto [x, y] = work.back();
    work.pop_back();
    int t = -1, e = -1;
    if (find_edge(x, y, t, e)) {
      CdtTriangle& T = tris_[t];
      T.fixed[e] = true;
      const int n = T.nb[e];
      if (n >= 0) tris_[n].fixed[edge_opposite(tris_[n], x, y)] = true;
      segment_curve_[key(x, y)] = curve;
      continue;
    }
    if (dist2(pts_[x], pts_[y]) <= floor2) {
      throw InvalidInput("boundary segment could not be recovered");
    }
    const Point m{0.5 * (pts_[x].r + pts_[y].r), 0.5 * (pts_[x].z + pts_[y].z)};
    const int vm = insert(m, curve);
    work.push_back({vm, y});
    work.push_back({x, vm});
  }
}

void Cdt::classify_inside() {
  std::vector<int> parity(tris_.size(), -1);
  std::deque<int> queue;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    const CdtTriangle& T = tris_[t];
    if (!T.alive) continue;
    if (is_super(T.v[0]) || is_super(T.v[1]) || is_super(T.v[2])) {
      parity[t] = 0;
      queue.push_back(static_cast<int>(t));
    }
  }
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    const CdtTriangle& T = tris_[t];
    for (int e = 0; e < 3; ++e) {
      const int n = T.nb[e];
      if (n < 0 || parity[n] >= 0) continue;
      parity[n] = parity[t] ^ static_cast<int>(T.fixed[e]);
      queue.push_back(n);
    }
  }
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    tris_[t].inside = tris_[t].alive && parity[t] == 1;
  }
}

bool Cdt::is_bad(int t, const RefineLimits& limits) const {
  const CdtTriangle& T = tris_[t];
  const Point a = pts_[T.v[0]], b = pts_[T.v[1]], c = pts_[T.v[2]];
  const double la = std::sqrt(dist2(b, c)), lb = std::sqrt(dist2(c, a)),
               lc = std::sqrt(dist2(a, b));
  const double twice_area = (b.r - a.r) * (c.z - a.z) - (b.z - a.z) * (c.r - a.r);
  if (!(twice_area > 0.0)) return false;
  const double radius = la * lb * lc / (2.0 * twice_area);
  const double shortest = std::min({la, lb, lc});
  const double sin_min = std::sin(limits.min_angle_deg * std::numbers::pi / 180.0);
  if (shortest / (2.0 * radius) < sin_min) return true;
  return limits.max_circumradius > 0.0 && radius > limits.max_circumradius;
}

void Cdt::split_segment(int tri, int edge) {
  const CdtTriangle& T = tris_[tri];
  const Point a = pts_[T.v[(edge + 1) % 3]], b = pts_[T.v[(edge + 2) % 3]];
  Located loc;
  loc.tri = tri;
  loc.edge = edge;
  insert_located({0.5 * (a.r + b.r), 0.5 * (a.z + b.z)}, loc, -1, true);
}

void Cdt::refine(const RefineLimits& limits) {
  std::deque<std::pair<int, std::array<int, 3>>> queue;
  auto enqueue = [&](int t) {
    if (tris_[t].alive && tris_[t].inside) queue.emplace_back(t, tris_[t].v);
  };
  for (std::size_t t = 0; t < tris_.size(); ++t) enqueue(static_cast<int>(t));

  auto segment_ok = [&](int t, int e) {
    const CdtTriangle& T = tris_[t];
    return std::sqrt(dist2(pts_[T.v[(e + 1) % 3]], pts_[T.v[(e + 2) % 3]])) >
           limits.min_segment_length;
  };
  auto split_and_requeue = [&](int t, int e, int bad) {
    split_segment(t, e);
    for (int n : recent_) enqueue(n);
    if (tris_[bad].alive) enqueue(bad);
  };

  while (!queue.empty()) {
    if (limits.max_vertices > 0 && pts_.size() > limits.max_vertices) {
      throw InvalidInput("mesh refinement exceeded its vertex budget");
    }
    const auto [t, verts] = queue.front();
    queue.pop_front();
    const CdtTriangle& T = tris_[t];
    if (!T.alive || !T.inside || T.v != verts) continue;
    if (!is_bad(t, limits)) continue;

    const Point c = circumcenter(pts_[T.v[0]], pts_[T.v[1]], pts_[T.v[2]]);
    const Located loc = locate(c, t, true);
    if (loc.blocked_tri >= 0) {
      if (segment_ok(loc.blocked_tri, loc.blocked_edge)) {
        split_and_requeue(loc.blocked_tri, loc.blocked_edge, t);
      }
      continue;
    }
    if (loc.vertex >= 0 || !tris_[loc.tri].inside) continue;
    if (loc.edge >= 0 && tris_[loc.tri].fixed[loc.edge]) {
      if (segment_ok(loc.tri, loc.edge)) split_and_requeue(loc.tri, loc.edge, t);
      continue;
    }

    // Circumcenters inside the diametral circle of a constrained edge on the
    // cavity boundary are rejected in favour of splitting that edge.
    const std::vector<CavityEdge> bnd = cavity_boundary(cavity(c, loc));
    std::vector<std::pair<int, int>> encroached;
    for (const CavityEdge& ce : bnd) {
      if (!ce.fixed) continue;
      const Point a = pts_[ce.a], b = pts_[ce.b];
      const Point mid{0.5 * (a.r + b.r), 0.5 * (a.z + b.z)};
      if (dist2(c, mid) < 0.25 * dist2(a, b)) encroached.emplace_back(ce.a, ce.b);
    }
    if (!encroached.empty()) {
      for (const auto& [a, b] : encroached) {
        int st = -1, se = -1;
        if (find_edge(a, b, st, se) && tris_[st].fixed[se] && segment_ok(st, se)) {
          split_and_requeue(st, se, t);
        }
      }
      continue;
    }
    insert_located(c, loc, -1, false);
    for (int n : recent_) enqueue(n);
  }
}

}  // namespace beltrami::detail

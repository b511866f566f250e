#include "beltrami/xsection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "beltrami/errors.hpp"
#include "predicates.hpp"

namespace beltrami {

using detail::orient2d;
using detail::segments_intersect;
using detail::sign_of;

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean:
      return "euclidean";
    case MetricKind::hyperbolic:
      return "hyperbolic";
    case MetricKind::spherical:
      return "spherical";
  }
  return "euclidean";
}

std::optional<MetricKind> metric_kind_from_string(const std::string& name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "hyperbolic") return MetricKind::hyperbolic;
  if (name == "spherical") return MetricKind::spherical;
  return std::nullopt;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::not_optimal_axis:
      return "not_optimal_axis";
    case Verdict::not_optimal_length:
      return "not_optimal_length";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double seg_length(Point a, Point b) { return std::hypot(b.r - a.r, b.z - a.z); }

struct Box {
  double r0, r1, z0, z1;
  bool overlaps(const Box& o) const {
    return r0 <= o.r1 && o.r0 <= r1 && z0 <= o.z1 && o.z0 <= z1;
  }
};

Box seg_box(Point a, Point b) {
  return {std::min(a.r, b.r), std::max(a.r, b.r), std::min(a.z, b.z),
          std::max(a.z, b.z)};
}

void check_vertices(const Polyline& c, const char* what) {
  if (c.size() < 3) {
    throw InvalidInput(std::string(what) + " needs at least 3 vertices");
  }
  for (const Point& p : c) {
    if (!std::isfinite(p.r) || !std::isfinite(p.z)) {
      throw InvalidInput(std::string(what) + " has a non-finite coordinate");
    }
    if (p.r < 0.0) {
      throw InvalidInput(std::string(what) + " has a vertex with r < 0");
    }
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == c[(i + 1) % c.size()]) {
      throw InvalidInput(std::string(what) + " has a zero-length edge");
    }
  }
}

// Simple-polygon test: no two non-adjacent edges meet and adjacent edges
// do not fold back onto each other.
void check_simple(const Polyline& c, const char* what) {
  const std::size_t n = c.size();
  std::vector<Box> boxes(n);
  for (std::size_t i = 0; i < n; ++i) boxes[i] = seg_box(c[i], c[(i + 1) % n]);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = c[i], b = c[(i + 1) % n];
    // Fold-back at the shared vertex b.
    const Point nxt = c[(i + 2) % n];
    if (sign_of(orient2d(a, b, nxt)) == 0) {
      const double dot = (b.r - a.r) * (nxt.r - b.r) + (b.z - a.z) * (nxt.z - b.z);
      if (dot < 0.0) throw InvalidInput(std::string(what) + " is self-intersecting");
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      if (!boxes[i].overlaps(boxes[j])) continue;
      if (segments_intersect(a, b, c[j], c[(j + 1) % n])) {
        throw InvalidInput(std::string(what) + " is self-intersecting");
      }
    }
  }
}

bool curves_cross(const Polyline& a, const Polyline& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point p = a[i], q = a[(i + 1) % a.size()];
    const Box bi = seg_box(p, q);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Point u = b[j], v = b[(j + 1) % b.size()];
      if (!bi.overlaps(seg_box(u, v))) continue;
      if (segments_intersect(p, q, u, v)) return true;
    }
  }
  return false;
}

void check_chart(const Polyline& c, MetricKind metric) {
  if (metric == MetricKind::euclidean) return;
  for (const Point& p : c) {
    if (p.r * p.r + p.z * p.z >= 1.0) {
      throw InvalidInput("cross-section leaves the unit-ball chart of the " +
                         std::string(to_string(metric)) + " metric");
    }
  }
}

}  // namespace

double closed_length(const Polyline& curve) {
  double len = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    len += seg_length(curve[i], curve[(i + 1) % curve.size()]);
  }
  return len;
}

double signed_area(const Polyline& curve) {
  double a = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Point p = curve[i], q = curve[(i + 1) % curve.size()];
    a += p.r * q.z - q.r * p.z;
  }
  return 0.5 * a;
}

bool point_in_polygon(const Polyline& curve, Point p) {
  bool inside = false;
  const std::size_t n = curve.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = curve[i], b = curve[j];
    if ((a.z > p.z) != (b.z > p.z)) {
      const double r_cross = (b.r - a.r) * (p.z - a.z) / (b.z - a.z) + a.r;
      if (p.r < r_cross) inside = !inside;
    }
  }
  return inside;
}

double distance_to_segment(Point p, Point a, Point b) {
  const double dr = b.r - a.r, dz = b.z - a.z;
  const double len2 = dr * dr + dz * dz;
  double t = len2 > 0.0 ? ((p.r - a.r) * dr + (p.z - a.z) * dz) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.r - (a.r + t * dr), p.z - (a.z + t * dz));
}

CrossSection CrossSection::make(Polyline outer, std::vector<Polyline> holes,
                                MetricKind metric) {
  check_vertices(outer, "outer curve");
  check_simple(outer, "outer curve");
  check_chart(outer, metric);
  if (signed_area(outer) < 0.0) std::reverse(outer.begin(), outer.end());

  for (std::size_t k = 0; k < holes.size(); ++k) {
    Polyline& h = holes[k];
    const std::string what = "hole " + std::to_string(k);
    check_vertices(h, what.c_str());
    check_simple(h, what.c_str());
    check_chart(h, metric);
    if (curves_cross(outer, h)) {
      throw InvalidInput(what + " intersects the outer curve");
    }
    for (const Point& p : h) {
      if (!point_in_polygon(outer, p)) {
        throw InvalidInput(what + " is not inside the outer curve");
      }
    }
    if (signed_area(h) > 0.0) std::reverse(h.begin(), h.end());
  }
  for (std::size_t i = 0; i < holes.size(); ++i) {
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      if (curves_cross(holes[i], holes[j]) ||
          point_in_polygon(holes[i], holes[j].front()) ||
          point_in_polygon(holes[j], holes[i].front())) {
        throw InvalidInput("holes " + std::to_string(i) + " and " +
                           std::to_string(j) + " overlap");
      }
    }
  }

  CrossSection cs;
  cs.outer_ = std::move(outer);
  cs.holes_ = std::move(holes);
  cs.metric_ = metric;
  return cs;
}

CrossSection CrossSection::translated_z(double dz) const {
  auto shift = [dz](Polyline c) {
    for (Point& p : c) p.z += dz;
    return c;
  };
  std::vector<Polyline> holes;
  for (const auto& h : holes_) holes.push_back(shift(h));
  return make(shift(outer_), std::move(holes), metric_);
}

CrossSection CrossSection::reflected_z() const {
  auto flip = [](Polyline c) {
    for (Point& p : c) p.z = -p.z;
    return c;
  };
  std::vector<Polyline> holes;
  for (const auto& h : holes_) holes.push_back(flip(h));
  return make(flip(outer_), std::move(holes), metric_);
}

CrossSection CrossSection::scaled(double s) const {
  auto scale = [s](Polyline c) {
    for (Point& p : c) {
      p.r *= s;
      p.z *= s;
    }
    return c;
  };
  std::vector<Polyline> holes;
  for (const auto& h : holes_) holes.push_back(scale(h));
  return make(scale(outer_), std::move(holes), metric_);
}

Polyline resample(const Polyline& curve, double spacing) {
  if (curve.size() < 3) throw InvalidInput("resample needs at least 3 vertices");
  const double total = closed_length(curve);
  if (!(total > 0.0)) throw InvalidInput("resample of a zero-length curve");
  if (!(spacing > 0.0) || spacing >= total) {
    throw InvalidInput("resample spacing must be positive and below the curve length");
  }
  const std::size_t n = curve.size();

  std::vector<std::size_t> corners;
  const double cos_limit = std::cos(kCornerAngleDeg * std::numbers::pi / 180.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = curve[(i + n - 1) % n], p = curve[i], next = curve[(i + 1) % n];
    const double ar = p.r - prev.r, az = p.z - prev.z;
    const double br = next.r - p.r, bz = next.z - p.z;
    const double la = std::hypot(ar, az), lb = std::hypot(br, bz);
    if (la == 0.0 || lb == 0.0) continue;
    if ((ar * br + az * bz) / (la * lb) < cos_limit) corners.push_back(i);
  }
  if (corners.empty()) corners.push_back(0);

  Polyline out;
  for (std::size_t c = 0; c < corners.size(); ++c) {
    const std::size_t start = corners[c];
    const std::size_t stop = corners[(c + 1) % corners.size()];
    // Vertices of the arc start..stop (stop == start means the full loop).
    std::vector<Point> arc{curve[start]};
    std::size_t i = start;
    do {
      i = (i + 1) % n;
      arc.push_back(curve[i]);
    } while (i != stop);

    std::vector<double> cum(arc.size(), 0.0);
    for (std::size_t k = 1; k < arc.size(); ++k) {
      cum[k] = cum[k - 1] + seg_length(arc[k - 1], arc[k]);
    }
    const double len = cum.back();
    const auto pieces = static_cast<std::size_t>(
        std::max(1.0, std::ceil(len / spacing - 1e-9)));
    std::size_t seg = 0;
    for (std::size_t k = 0; k < pieces; ++k) {
      if (k == 0) {
        out.push_back(arc.front());
        continue;
      }
      const double s = len * static_cast<double>(k) / static_cast<double>(pieces);
      while (seg + 1 < arc.size() - 1 && cum[seg + 1] <= s) ++seg;
      const double seg_len = cum[seg + 1] - cum[seg];
      const double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
      if (t == 0.0) {
        out.push_back(arc[seg]);
      } else {
        const Point a = arc[seg], b = arc[seg + 1];
        out.push_back({a.r + t * (b.r - a.r), a.z + t * (b.z - a.z)});
      }
    }
  }
  if (out.size() < 3) throw InvalidInput("resample produced fewer than 3 vertices");
  return out;
}

double killing_norm(Point p, MetricKind metric) {
  const double rho2 = p.r * p.r + p.z * p.z;
  switch (metric) {
    case MetricKind::euclidean:
      return p.r;
    case MetricKind::hyperbolic:
      if (rho2 >= 1.0) throw InvalidInput("point outside the Poincare ball chart");
      return 2.0 * p.r / (1.0 - rho2);
    case MetricKind::spherical:
      if (rho2 >= 1.0) throw InvalidInput("point outside the hemisphere chart");
      return 2.0 * p.r / (1.0 + rho2);
  }
  return p.r;
}

double default_n0_tolerance(double d_minus) { return 1e-9 * d_minus + 1e-12; }

AxisDistance min_axis_distance(const CrossSection& cs, double tol) {
  const Polyline& c = cs.outer();
  std::vector<double> norm(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) norm[i] = killing_norm(c[i], cs.metric());
  AxisDistance out;
  out.d_minus = *std::min_element(norm.begin(), norm.end());
  if (!(tol > 0.0)) tol = default_n0_tolerance(out.d_minus);
  bool vertex_on_axis = false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (norm[i] <= out.d_minus + tol) {
      out.n0.push_back(c[i]);
      out.n0_index.push_back(i);
    }
    if (c[i].r <= tol) vertex_on_axis = true;
  }
  out.axis_intersect = out.d_minus <= tol && vertex_on_axis;
  return out;
}

namespace {

// Indices visited walking from `from` to `to` in direction `step` (+1/-1).
std::vector<std::size_t> arc_indices(std::size_t from, std::size_t to, int step,
                                     std::size_t n) {
  std::vector<std::size_t> idx{from};
  std::size_t i = from;
  while (i != to) {
    i = step > 0 ? (i + 1) % n : (i + n - 1) % n;
    idx.push_back(i);
  }
  return idx;
}

double arc_length(const Polyline& c, const std::vector<std::size_t>& idx) {
  double len = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) len += seg_length(c[idx[k - 1]], c[idx[k]]);
  return len;
}

struct SplitDetail {
  BoundarySplit split;
  std::vector<std::size_t> l_minus_idx;
  std::vector<std::size_t> complement_idx;  // closed walk x_minus -> x_plus
};

SplitDetail split_detail(const CrossSection& cs, const AxisDistance& ad) {
  const Polyline& c = cs.outer();
  const std::size_t n = c.size();
  std::size_t ip = ad.n0_index.front(), im = ad.n0_index.front();
  for (std::size_t i : ad.n0_index) {
    if (c[i].z >= c[ip].z) ip = i;  // ties: largest index
    if (c[i].z < c[im].z) im = i;   // ties: smallest index
  }
  std::size_t i_far = 0;
  double far = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = killing_norm(c[i], cs.metric());
    if (v > far) {
      far = v;
      i_far = i;
    }
  }

  SplitDetail d;
  d.split.index_plus = ip;
  d.split.index_minus = im;
  d.split.x_plus = c[ip];
  d.split.x_minus = c[im];
  if (ip == im) {
    d.l_minus_idx = {ip};
    d.complement_idx = arc_indices(ip, (ip + n - 1) % n, +1, n);
    d.complement_idx.push_back(ip);
  } else {
    auto forward = arc_indices(ip, im, +1, n);
    const bool far_inside =
        std::find(forward.begin() + 1, forward.end() - 1, i_far) != forward.end() - 1;
    if (!far_inside) {
      d.l_minus_idx = std::move(forward);
      d.complement_idx = arc_indices(im, ip, +1, n);
    } else {
      d.l_minus_idx = arc_indices(ip, im, -1, n);
      d.complement_idx = arc_indices(im, ip, -1, n);
    }
  }
  for (std::size_t i : d.l_minus_idx) d.split.l_minus.push_back(c[i]);
  d.split.len_l_minus = arc_length(c, d.l_minus_idx);
  return d;
}

int complement_components(const AxisDistance& ad, std::size_t n) {
  std::vector<bool> in_n0(n, false);
  for (std::size_t i : ad.n0_index) in_n0[i] = true;
  if (ad.n0_index.size() == n) return 0;
  int runs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_n0[i] && in_n0[(i + n - 1) % n]) ++runs;
  }
  return runs;
}

}  // namespace

BoundarySplit split_boundary(const CrossSection& cs, double tol) {
  return split_detail(cs, min_axis_distance(cs, tol)).split;
}

CriterionReport criterion(const CrossSection& cs, double tol) {
  const AxisDistance ad = min_axis_distance(cs, tol);
  if (!(tol > 0.0)) tol = default_n0_tolerance(ad.d_minus);
  const SplitDetail sd = split_detail(cs, ad);
  const Polyline& c = cs.outer();
  const MetricKind metric = cs.metric();

  CriterionReport rep;
  rep.metric = metric;
  rep.tol = tol;
  rep.d_minus = ad.d_minus;
  rep.n0_points = ad.n0;
  rep.axis_intersect = ad.axis_intersect;
  rep.x_plus = sd.split.x_plus;
  rep.x_minus = sd.split.x_minus;
  rep.l_minus = sd.split.l_minus;
  rep.len_l_minus = sd.split.len_l_minus;
  rep.complement_components = complement_components(ad, c.size());

  double d_plus = -std::numeric_limits<double>::infinity();
  for (std::size_t i : sd.l_minus_idx) d_plus = std::max(d_plus, killing_norm(c[i], metric));
  for (const Polyline& h : cs.holes()) {
    for (const Point& p : h) d_plus = std::max(d_plus, killing_norm(p, metric));
    rep.len_holes.push_back(closed_length(h));
  }
  rep.d_plus = d_plus;

  // Portion of each complement segment at distance >= d_plus. The Euclidean
  // norm is linear along a segment so the clip is exact there; for the ball
  // charts the norm is interpolated linearly between vertices.
  double len_plus = 0.0;
  const auto& idx = sd.complement_idx;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const Point a = c[idx[k - 1]], b = c[idx[k]];
    const double na = killing_norm(a, metric), nb = killing_norm(b, metric);
    double t0 = 0.0, t1 = 1.0;
    if (na >= d_plus && nb >= d_plus) {
    } else if (na < d_plus && nb < d_plus) {
      continue;
    } else {
      const double t = (d_plus - na) / (nb - na);
      if (na >= d_plus) {
        t1 = t;
      } else {
        t0 = t;
      }
    }
    const Point p0{a.r + t0 * (b.r - a.r), a.z + t0 * (b.z - a.z)};
    const Point p1{a.r + t1 * (b.r - a.r), a.z + t1 * (b.z - a.z)};
    len_plus += seg_length(a, b) * (t1 - t0);
    rep.l_plus.push_back({p0, p1});
  }
  rep.len_l_plus = len_plus;

  double rhs = rep.len_l_minus;
  for (double l : rep.len_holes) rhs += l;

  if (rep.axis_intersect) {
    rep.verdict = Verdict::not_optimal_axis;
  } else if (metric != MetricKind::euclidean) {
    rep.verdict = Verdict::inconclusive;
    rep.length_test_disabled = true;
    rep.reason = "length inequality is only established for the Euclidean metric";
  } else if (rep.len_l_plus >= rhs) {
    rep.verdict = Verdict::not_optimal_length;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

}  // namespace beltrami

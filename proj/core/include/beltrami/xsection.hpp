#pragma once

// Cross-sections of solids of revolution in the (r, z) half-plane and the
// axis-distance criterion for non-optimality of rotationally symmetric
// domains.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace beltrami {

struct Point {
  double r = 0.0;
  double z = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Closed polyline; the closing segment back[n-1] -> front[0] is implicit.
using Polyline = std::vector<Point>;

enum class MetricKind { euclidean, hyperbolic, spherical };

const char* to_string(MetricKind kind);
std::optional<MetricKind> metric_kind_from_string(const std::string& name);

double closed_length(const Polyline& curve);
// Positive for counterclockwise curves in the (r, z) plane.
double signed_area(const Polyline& curve);
bool point_in_polygon(const Polyline& curve, Point p);
double distance_to_segment(Point p, Point a, Point b);

// A validated cross-section. The outer curve is stored counterclockwise and
// holes clockwise; make() reorders input vertices to enforce this.
class CrossSection {
 public:
  // Throws InvalidInput when the curves are degenerate, self-intersecting,
  // overlapping, leave the half-plane r >= 0, or (for the ball charts)
  // leave the open unit disc.
  static CrossSection make(Polyline outer, std::vector<Polyline> holes = {},
                           MetricKind metric = MetricKind::euclidean);

  const Polyline& outer() const { return outer_; }
  const std::vector<Polyline>& holes() const { return holes_; }
  MetricKind metric() const { return metric_; }

  CrossSection translated_z(double dz) const;
  CrossSection reflected_z() const;
  CrossSection scaled(double s) const;

 private:
  CrossSection() = default;
  Polyline outer_;
  std::vector<Polyline> holes_;
  MetricKind metric_ = MetricKind::euclidean;
};

// Vertices whose turning angle exceeds this are kept by resample().
inline constexpr double kCornerAngleDeg = 20.0;

// Arc-length resampling with spacing <= `spacing`. Corner vertices are kept
// exactly; each corner-to-corner arc is split uniformly. Throws InvalidInput
// for fewer than three vertices, zero length, or a non-positive spacing.
Polyline resample(const Polyline& curve, double spacing);

// |R| for the rotation field R = (-y, x, 0) at the cross-section point p,
// measured in the metric of the chosen model chart.
double killing_norm(Point p, MetricKind metric);

double default_n0_tolerance(double d_minus);

struct AxisDistance {
  double d_minus = 0.0;
  std::vector<Point> n0;               // in outer-polyline order
  std::vector<std::size_t> n0_index;   // indices into outer()
  bool axis_intersect = false;
};

AxisDistance min_axis_distance(const CrossSection& cs, double tol);

struct BoundarySplit {
  Point x_plus;
  Point x_minus;
  std::size_t index_plus = 0;
  std::size_t index_minus = 0;
  Polyline l_minus;  // from x_plus to x_minus; a single point when degenerate
  double len_l_minus = 0.0;
};

BoundarySplit split_boundary(const CrossSection& cs, double tol);

enum class Verdict { not_optimal_axis, not_optimal_length, inconclusive };
const char* to_string(Verdict v);

struct LengthPiece {
  Point from;
  Point to;
};

struct CriterionReport {
  MetricKind metric = MetricKind::euclidean;
  double tol = 0.0;
  double d_minus = 0.0;
  double d_plus = 0.0;
  std::vector<Point> n0_points;
  Point x_plus;
  Point x_minus;
  double len_l_minus = 0.0;
  double len_l_plus = 0.0;
  std::vector<double> len_holes;
  bool axis_intersect = false;
  Verdict verdict = Verdict::inconclusive;
  // Number of connected components of the outer curve with N0 removed.
  int complement_components = 0;
  // Set when the length comparison is not available (non-Euclidean metrics).
  bool length_test_disabled = false;
  std::string reason;
  Polyline l_minus;
  std::vector<LengthPiece> l_plus;
};

// tol <= 0 selects default_n0_tolerance(d_minus).
CriterionReport criterion(const CrossSection& cs, double tol = 0.0);

}  // namespace beltrami

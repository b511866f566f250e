#pragma once

// Polygonal cross-sections used by fixtures, sweeps and tests.

#include <cstddef>

#include "beltrami/xsection.hpp"

namespace beltrami::shapes {

// Counterclockwise regular n-gon inscribed in the circle; vertex 0 at angle 0.
Polyline circle(Point center, double radius, std::size_t n);
Polyline ellipse(Point center, double semi_r, double semi_z, std::size_t n);
Polyline rectangle(double r0, double z0, double r1, double z1);

// Half-disc {r >= 0, r^2 + z^2 <= radius^2}: the cross-section of a ball.
// `n_arc` segments on the arc; the axis side is a single segment.
Polyline half_disc(double radius, std::size_t n_arc);

// Segment r = r0, z in [-radius, radius], closed by the right semicircle of
// that radius centred at (r0, 0).
Polyline d_shape(double r0, double radius, std::size_t n_arc);

Polyline reversed(Polyline curve);

}  // namespace beltrami::shapes

#pragma once

// Sign-exact orientation and incircle tests. A floating-point filter with
// Shewchuk's static error bounds decides almost every query; the remainder
// is settled in exact rational arithmetic.

#include "beltrami/xsection.hpp"

namespace beltrami::detail {

// > 0 if a, b, c are counterclockwise, < 0 if clockwise, 0 if collinear.
// Only the sign is exact.
double orient2d(Point a, Point b, Point c);

// > 0 if d lies inside the circle through the counterclockwise a, b, c.
double incircle(Point a, Point b, Point c, Point d);

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// True if open segments [a,b] and [c,d] share any point (touching counts).
bool segments_intersect(Point a, Point b, Point c, Point d);

}  // namespace beltrami::detail

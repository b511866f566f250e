#include "beltrami/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beltrami/errors.hpp"

namespace beltrami::shapes {

Polyline circle(Point center, double radius, std::size_t n) {
  return ellipse(center, radius, radius, n);
}

Polyline ellipse(Point center, double semi_r, double semi_z, std::size_t n) {
  if (n < 3 || !(semi_r > 0.0) || !(semi_z > 0.0)) {
    throw InvalidInput("ellipse needs n >= 3 and positive semi-axes");
  }
  Polyline c;
  c.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    c.push_back({center.r + semi_r * std::cos(t), center.z + semi_z * std::sin(t)});
  }
  return c;
}

Polyline rectangle(double r0, double z0, double r1, double z1) {
  return {{r0, z0}, {r1, z0}, {r1, z1}, {r0, z1}};
}

Polyline half_disc(double radius, std::size_t n_arc) {
  if (n_arc < 2 || !(radius > 0.0)) throw InvalidInput("half_disc needs n_arc >= 2");
  Polyline c;
  c.reserve(n_arc + 1);
  for (std::size_t k = 0; k <= n_arc; ++k) {
    const double t = -std::numbers::pi / 2.0 +
                     std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_arc);
    Point p{radius * std::cos(t), radius * std::sin(t)};
    if (k == 0 || k == n_arc) p.r = 0.0;
    c.push_back(p);
  }
  return c;
}

Polyline d_shape(double r0, double radius, std::size_t n_arc) {
  if (n_arc < 2) throw InvalidInput("d_shape needs n_arc >= 2");
  Polyline c;
  for (std::size_t k = 0; k <= n_arc; ++k) {
    const double t = -std::numbers::pi / 2.0 +
                     std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_arc);
    Point p{r0 + radius * std::cos(t), radius * std::sin(t)};
    if (k == 0 || k == n_arc) p.r = r0;
    c.push_back(p);
  }
  return c;
}

Polyline reversed(Polyline curve) {
  std::reverse(curve.begin(), curve.end());
  return curve;
}

}  // namespace beltrami::shapes

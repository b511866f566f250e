#include "predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace beltrami::detail {
namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

double orient_exact(Point a, Point b, Point c) {
  const Rational acx = Rational(a.r) - Rational(c.r);
  const Rational bcx = Rational(b.r) - Rational(c.r);
  const Rational acy = Rational(a.z) - Rational(c.z);
  const Rational bcy = Rational(b.z) - Rational(c.z);
  const Rational det = acx * bcy - acy * bcx;
  return static_cast<double>(det.sign());
}

double incircle_exact(Point a, Point b, Point c, Point d) {
  const Rational adx = Rational(a.r) - Rational(d.r);
  const Rational ady = Rational(a.z) - Rational(d.z);
  const Rational bdx = Rational(b.r) - Rational(d.r);
  const Rational bdy = Rational(b.z) - Rational(d.z);
  const Rational cdx = Rational(c.r) - Rational(d.r);
  const Rational cdy = Rational(c.z) - Rational(d.z);
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - bdy * cdx) +
                       blift * (cdx * ady - cdy * adx) +
                       clift * (adx * bdy - ady * bdx);
  return static_cast<double>(det.sign());
}

}  // namespace

double orient2d(Point a, Point b, Point c) {
  const double detleft = (a.r - c.r) * (b.z - c.z);
  const double detright = (a.z - c.z) * (b.r - c.r);
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  if (std::abs(det) > kOrientBound * detsum) return det;
  if (detsum == 0.0) return 0.0;
  return orient_exact(a, b, c);
}

double incircle(Point a, Point b, Point c, Point d) {
  const double adx = a.r - d.r, ady = a.z - d.z;
  const double bdx = b.r - d.r, bdy = b.z - d.z;
  const double cdx = c.r - d.r, cdy = c.z - d.z;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent =
      (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
      (std::abs(cdxady) + std::abs(adxcdy)) * blift +
      (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  if (std::abs(det) > kInCircleBound * permanent) return det;
  if (permanent == 0.0) return 0.0;
  return incircle_exact(a, b, c, d);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = sign_of(orient2d(a, b, c));
  const int o2 = sign_of(orient2d(a, b, d));
  const int o3 = sign_of(orient2d(c, d, a));
  const int o4 = sign_of(orient2d(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  auto on_segment = [](Point p, Point q, Point x) {
    return std::min(p.r, q.r) <= x.r && x.r <= std::max(p.r, q.r) &&
           std::min(p.z, q.z) <= x.z && x.z <= std::max(p.z, q.z);
  };
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace beltrami::detail

#include "beltrami/geomfields.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <type_traits>

#include "beltrami/errors.hpp"

namespace beltrami {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::euclidean:
      return "euclidean";
    case ModelKind::hyperbolic_ball:
      return "hyperbolic_ball";
    case ModelKind::spherical_ball:
      return "spherical_ball";
  }
  return "euclidean";
}

bool ModelSpace::in_chart(const Vec3& p) const {
  if (!p.allFinite()) return false;
  return kind_ == ModelKind::euclidean || p.squaredNorm() < 1.0;
}

void ModelSpace::require_chart(const Vec3& p) const {
  if (!in_chart(p)) throw InvalidInput("point outside the model chart");
}

double ModelSpace::phi(const Vec3& p) const { return std::log(conformal_factor(p)); }

double ModelSpace::conformal_factor(const Vec3& p) const {
  require_chart(p);
  const double s = p.squaredNorm();
  switch (kind_) {
    case ModelKind::euclidean:
      return 1.0;
    case ModelKind::hyperbolic_ball:
      return 2.0 / (1.0 - s);
    case ModelKind::spherical_ball:
      return 2.0 / (1.0 + s);
  }
  return 1.0;
}

Vec3 ModelSpace::grad_phi(const Vec3& p) const {
  require_chart(p);
  const double s = p.squaredNorm();
  switch (kind_) {
    case ModelKind::euclidean:
      return Vec3::Zero();
    case ModelKind::hyperbolic_ball:
      return 2.0 * p / (1.0 - s);
    case ModelKind::spherical_ball:
      return -2.0 * p / (1.0 + s);
  }
  return Vec3::Zero();
}

Mat3 ModelSpace::hess_phi(const Vec3& p) const {
  require_chart(p);
  const double s = p.squaredNorm();
  switch (kind_) {
    case ModelKind::euclidean:
      return Mat3::Zero();
    case ModelKind::hyperbolic_ball:
      return 2.0 / (1.0 - s) * Mat3::Identity() + 4.0 / ((1.0 - s) * (1.0 - s)) * p * p.transpose();
    case ModelKind::spherical_ball:
      return -2.0 / (1.0 + s) * Mat3::Identity() + 4.0 / ((1.0 + s) * (1.0 + s)) * p * p.transpose();
  }
  return Mat3::Zero();
}

double ModelSpace::inner(const Vec3& p, const Vec3& x, const Vec3& y) const {
  const double w = conformal_factor(p);
  return w * w * x.dot(y);
}

double ModelSpace::norm(const Vec3& p, const Vec3& x) const {
  return conformal_factor(p) * x.norm();
}

Vec3 ModelSpace::cross(const Vec3& p, const Vec3& x, const Vec3& y) const {
  return conformal_factor(p) * x.cross(y);
}

namespace fields {

FieldSpec constant(const Vec3& v, const std::string& name) {
  return {name, FieldRole::generic, [v](const Vec3&) { return v; },
          [](const Vec3&) { return Mat3(Mat3::Zero()); }};
}

FieldSpec position() {
  return {"position", FieldRole::concircular, [](const Vec3& p) { return p; },
          [](const Vec3&) { return Mat3(Mat3::Identity()); }};
}

FieldSpec rotation() {
  return {"rotation", FieldRole::killing,
          [](const Vec3& p) { return Vec3(-p.y(), p.x(), 0.0); },
          [](const Vec3&) {
            Mat3 j;
            j << 0, -1, 0, 1, 0, 0, 0, 0, 0;
            return j;
          }};
}

// Chart: stereographic projection from the pole w = 1, u = X / (1 - w) for
// (X, w) on the unit 3-sphere, with metric 4 / (1 + |u|^2)^2. The inverse
// is X = 2u / (1 + s), w = (s - 1) / (1 + s); pushing the rotation fields of
// S^3 through the projection gives the expressions below.
FieldSpec hopf() {
  return {"hopf", FieldRole::beltrami,
          [](const Vec3& u) {
            const double s = u.squaredNorm();
            return Vec3(-u[1] + u[0] * u[2], u[0] + u[1] * u[2], 0.5 * (1.0 - s) + u[2] * u[2]);
          },
          [](const Vec3& u) {
            Mat3 j;
            j << u[2], -1.0, u[0], 1.0, u[2], u[1], -u[0], -u[1], u[2];
            return j;
          }};
}

FieldSpec hopf_opposite() {
  return {"hopf_opposite", FieldRole::beltrami,
          [](const Vec3& u) {
            const double s = u.squaredNorm();
            return Vec3(-u[1] - u[0] * u[2], u[0] - u[1] * u[2],
                        -0.5 * (1.0 - s) - u[2] * u[2]);
          },
          [](const Vec3& u) {
            Mat3 j;
            j << -u[2], -1.0, -u[0], 1.0, -u[2], -u[1], u[0], u[1], -u[2];
            return j;
          }};
}

}  // namespace fields

double concircular_potential(ModelKind kind, const Vec3& p) {
  const double s = p.squaredNorm();
  switch (kind) {
    case ModelKind::euclidean:
      return 1.0;
    case ModelKind::hyperbolic_ball:
      return (1.0 + s) / (1.0 - s);
    case ModelKind::spherical_ball:
      return (1.0 - s) / (1.0 + s);
  }
  return 1.0;
}

namespace {

double fd_step(const ModelSpace& space, const Vec3& p) {
  if (space.kind() == ModelKind::euclidean) return 1e-4;
  return 1e-4 * (1.0 - p.norm());
}

template <class F>
auto richardson(const F& f, const Vec3& p, int i, double h) {
  using R = std::decay_t<decltype(f(p))>;
  const Vec3 e = Vec3::Unit(i);
  const R d1 = (f(p + h * e) - f(p - h * e)) / (2.0 * h);
  const R d2 = (f(p + 0.5 * h * e) - f(p - 0.5 * h * e)) / h;
  return R((4.0 * d2 - d1) / 3.0);
}

Vec3 connection(const std::array<Mat3, 3>& gamma, const Vec3& x, const Vec3& y) {
  Vec3 out;
  for (int k = 0; k < 3; ++k) out[k] = x.dot(gamma[k] * y);
  return out;
}

}  // namespace

Mat3 fd_jacobian(const ModelSpace& space, const std::function<Vec3(const Vec3&)>& f,
                 const Vec3& p) {
  space.require_chart(p);
  const double h = fd_step(space, p);
  Mat3 j;
  for (int i = 0; i < 3; ++i) j.col(i) = richardson(f, p, i, h);
  return j;
}

Mat3 field_jacobian(const ModelSpace& space, const FieldSpec& y, const Vec3& p) {
  if (y.jacobian) {
    space.require_chart(p);
    return y.jacobian(p);
  }
  return fd_jacobian(space, y.value, p);
}

std::array<Mat3, 3> christoffel(const ModelSpace& space, const Vec3& p) {
  const Vec3 g = space.grad_phi(p);
  std::array<Mat3, 3> gamma;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        gamma[k](i, j) = (i == k ? g[j] : 0.0) + (j == k ? g[i] : 0.0) - (i == j ? g[k] : 0.0);
      }
    }
  }
  return gamma;
}

std::array<Mat3, 3> christoffel_fd(const ModelSpace& space, const Vec3& p) {
  space.require_chart(p);
  const double h = fd_step(space, p);
  auto g = [&](const Vec3& q) {
    const double w = space.conformal_factor(q);
    return w * w;
  };
  Vec3 dg;
  for (int i = 0; i < 3; ++i) dg[i] = richardson(g, p, i, h);
  const double ginv = 1.0 / g(p);
  std::array<Mat3, 3> gamma;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        gamma[k](i, j) = 0.5 * ginv *
                         ((j == k ? dg[i] : 0.0) + (i == k ? dg[j] : 0.0) -
                          (i == j ? dg[k] : 0.0));
      }
    }
  }
  return gamma;
}

Vec3 covariant_derivative(const ModelSpace& space, const Vec3& x, const FieldSpec& y,
                          const Vec3& p) {
  return field_jacobian(space, y, p) * x + connection(christoffel(space, p), x, y.value(p));
}

Vec3 covariant_derivative(const ModelSpace& space, const FieldSpec& x, const FieldSpec& y,
                          const Vec3& p) {
  return covariant_derivative(space, x.value(p), y, p);
}

ConcircularResidual concircular_residual(const ModelSpace& space, const FieldSpec& z,
                                         const std::function<double(const Vec3&)>& f,
                                         const std::vector<Vec3>& points) {
  ConcircularResidual res;
  for (const Vec3& p : points) {
    const double fp = f(p);
    const Mat3 j = field_jacobian(space, z, p);
    const std::array<Mat3, 3> gamma = christoffel(space, p);
    const Vec3 zp = z.value(p);
    for (int i = 0; i < 3; ++i) {
      const Vec3 e = Vec3::Unit(i);
      const Vec3 d = j * e + connection(gamma, e, zp) - fp * e;
      res.relation = std::max(res.relation, space.norm(p, d));
    }
    const double div = j.trace() + 3.0 * zp.dot(space.grad_phi(p));
    res.divergence = std::max(res.divergence, std::abs(div - 3.0 * fp));
  }
  return res;
}

double killing_residual(const ModelSpace& space, const FieldSpec& y,
                        const std::vector<Vec3>& points) {
  double worst = 0.0;
  for (const Vec3& p : points) {
    const Mat3 j = field_jacobian(space, y, p);
    const std::array<Mat3, 3> gamma = christoffel(space, p);
    const Vec3 yp = y.value(p);
    Mat3 a;  // column i is grad_{e_i} Y
    for (int i = 0; i < 3; ++i) a.col(i) = j.col(i) + connection(gamma, Vec3::Unit(i), yp);
    // Lowering with g = w^2 delta and measuring with g^{-1} cancels the
    // conformal factor.
    worst = std::max(worst, (0.5 * (a + a.transpose())).norm());
  }
  return worst;
}

CurlDiv curl_div(const ModelSpace& space, const FieldSpec& x, const Vec3& p) {
  const Mat3 j = field_jacobian(space, x, p);
  const Vec3 xp = x.value(p);
  const Vec3 g = space.grad_phi(p);
  const Vec3 curl_e(j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1));
  CurlDiv out;
  out.curl = (curl_e + 2.0 * g.cross(xp)) / space.conformal_factor(p);
  out.div = j.trace() + 3.0 * xp.dot(g);
  return out;
}

CurvatureSample sectional_curvature(const ModelSpace& space, const Vec3& p, const Vec3& x,
                                    const Vec3& z) {
  const std::array<Mat3, 3> gamma = christoffel(space, p);
  const Mat3 hess = space.hess_phi(p);
  // dgamma[i][l](j, k) = d_i Gamma^l_jk
  std::array<std::array<Mat3, 3>, 3> dgamma;
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          dgamma[i][l](j, k) = (j == l ? hess(k, i) : 0.0) + (k == l ? hess(j, i) : 0.0) -
                               (j == k ? hess(l, i) : 0.0);
        }
      }
    }
  }
  // R(x, z) z = sum x^i z^j z^k R^l_ijk e_l
  Vec3 rzz = Vec3::Zero();
  for (int l = 0; l < 3; ++l) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          double r = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int m = 0; m < 3; ++m) {
            r += gamma[l](i, m) * gamma[m](j, k) - gamma[l](j, m) * gamma[m](i, k);
          }
          acc += x[i] * z[j] * z[k] * r;
        }
      }
    }
    rzz[l] = acc;
  }
  CurvatureSample cs;
  cs.p = p;
  cs.x = x;
  cs.z = z;
  cs.rm = space.inner(p, rzz, x);
  const double xz = space.inner(p, x, z);
  cs.wedge_norm_sq = space.inner(p, x, x) * space.inner(p, z, z) - xz * xz;
  cs.sec = cs.wedge_norm_sq > 1e-14 ? cs.rm / cs.wedge_norm_sq : 0.0;
  return cs;
}

double killing_identity_residual(const ModelSpace& space, const FieldSpec& x,
                                 const FieldSpec& y, const std::vector<Vec3>& points) {
  if (killing_residual(space, y, points) >= 1e-5) {
    throw InvalidInput("field '" + y.name + "' is not a Killing field at the sample points");
  }
  // grad_Y Y as a closed-form field, differentiated once more numerically.
  const std::function<Vec3(const Vec3&)> w = [&](const Vec3& q) {
    return covariant_derivative(space, y.value(q), y, q);
  };
  double worst = 0.0;
  for (const Vec3& p : points) {
    const Vec3 xp = x.value(p), yp = y.value(p);
    const CurvatureSample cs = sectional_curvature(space, p, xp, yp);
    const Vec3 dxy = covariant_derivative(space, xp, y, p);
    const Vec3 dxw = fd_jacobian(space, w, p) * xp + connection(christoffel(space, p), xp, w(p));
    const double lhs = cs.sec * cs.wedge_norm_sq;
    const double rhs = space.inner(p, dxy, dxy) + space.inner(p, xp, dxw);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

BeltramiFit beltrami_fit(const ModelSpace& space, const FieldSpec& y,
                         const std::vector<Vec3>& points) {
  double cy = 0.0, yy = 0.0;
  for (const Vec3& p : points) {
    const Vec3 c = curl_div(space, y, p).curl;
    const Vec3 v = y.value(p);
    cy += space.inner(p, c, v);
    yy += space.inner(p, v, v);
  }
  if (!(yy > 0.0)) throw InvalidInput("field vanishes at every sample point");
  BeltramiFit fit;
  fit.lambda = cy / yy;
  // Residual summed directly rather than expanded, to avoid cancellation.
  double rr = 0.0;
  for (const Vec3& p : points) {
    const Vec3 d = curl_div(space, y, p).curl - fit.lambda * y.value(p);
    rr += space.inner(p, d, d);
  }
  fit.rel_residual = std::sqrt(rr / yy);
  return fit;
}

std::vector<Vec3> sample_points(ModelKind kind, std::size_t count, std::uint64_t seed,
                                double radius) {
  if (radius <= 0.0) radius = kind == ModelKind::euclidean ? 2.0 : 0.9;
  std::mt19937_64 gen(seed);
  auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<Vec3> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    const Vec3 p(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0);
    if (p.squaredNorm() < 1.0) pts.push_back(radius * p);
  }
  return pts;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> VerificationReport::failed() const {
  std::vector<std::string> out;
  for (const Check& c : checks) {
    if (!c.pass) out.push_back(c.name);
  }
  return out;
}

}  // namespace beltrami

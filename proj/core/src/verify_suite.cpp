#include <algorithm>
#include <cmath>
#include <random>

#include "beltrami/geomfields.hpp"

namespace beltrami {
namespace {

class Suite {
 public:
  explicit Suite(VerificationReport& rep) : rep_(rep) {}

  void below(const std::string& name, double measured, double tol) {
    rep_.checks.push_back({name, "<", tol, measured, measured < tol});
  }
  void above(const std::string& name, double measured, double tol) {
    rep_.checks.push_back({name, ">", tol, measured, measured > tol});
  }

 private:
  VerificationReport& rep_;
};

std::vector<Vec3> random_vectors(std::size_t n, std::mt19937_64& gen) {
  auto u = [&] { return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0; };
  std::vector<Vec3> out;
  while (out.size() < n) {
    const Vec3 v(u(), u(), u());
    if (v.norm() > 0.1) out.push_back(v);
  }
  return out;
}

double max_over(const std::vector<Vec3>& pts, const std::function<double(const Vec3&)>& f) {
  double worst = 0.0;
  for (const Vec3& p : pts) worst = std::max(worst, f(p));
  return worst;
}

}  // namespace

VerificationReport run_verification_suite(const VerifyOptions& options) {
  VerificationReport rep;
  rep.seed = options.seed;
  rep.points = options.points;
  Suite s(rep);

  const ModelSpace euclid(ModelKind::euclidean);
  const ModelSpace hyper(ModelKind::hyperbolic_ball);
  const ModelSpace sphere(ModelKind::spherical_ball);
  const std::array<const ModelSpace*, 3> spaces{&euclid, &hyper, &sphere};
  const std::array<double, 3> expected_sec{0.0, -1.0, 1.0};
  const std::array<const char*, 3> names{"euclidean", "hyperbolic", "spherical"};

  std::mt19937_64 gen(options.seed ^ 0x5DEECE66Dull);
  std::array<std::vector<Vec3>, 3> pts;
  for (int k = 0; k < 3; ++k) {
    pts[k] = sample_points(spaces[k]->kind(), options.points, options.seed + k);
  }

  const FieldSpec position = fields::position();
  const FieldSpec rotation = fields::rotation();
  const FieldSpec hopf = fields::hopf();
  const FieldSpec e1 = fields::constant(Vec3::UnitX(), "e1");

  // Conformal factor gradient against finite differences.
  for (int k = 1; k < 3; ++k) {
    const ModelSpace& m = *spaces[k];
    const double err = max_over(pts[k], [&](const Vec3& p) {
      Vec3 fd;
      const Mat3 j = fd_jacobian(m, [&](const Vec3& q) { return Vec3(m.phi(q), 0.0, 0.0); }, p);
      fd = j.row(0).transpose();
      return (fd - m.grad_phi(p)).norm();
    });
    s.below(std::string("grad_phi.") + names[k], err, 1e-8);
  }

  // Christoffel symbols.
  {
    double e = 0.0;
    for (const Mat3& g : christoffel(euclid, Vec3(0.3, -0.2, 0.7))) e = std::max(e, g.norm());
    s.below("christoffel.euclidean_zero", e, 1e-15);
    e = 0.0;
    for (const Mat3& g : christoffel(hyper, Vec3::Zero())) e = std::max(e, g.norm());
    s.below("christoffel.hyperbolic_origin", e, 1e-15);
    const Vec3 p(0.3, 0.0, 0.0);
    const auto a = christoffel(sphere, p), b = christoffel_fd(sphere, p);
    e = 0.0;
    for (int k = 0; k < 3; ++k) e = std::max(e, (a[k] - b[k]).cwiseAbs().maxCoeff());
    s.below("christoffel.spherical_vs_fd", e, 1e-7);
  }

  // Covariant derivative of the position field at the worked points.
  {
    const Vec3 p(0.5, 0.0, 0.0);
    s.below("covariant_derivative.euclidean_e1",
            (covariant_derivative(euclid, Vec3::UnitX(), position, p) - Vec3::UnitX()).norm(),
            1e-14);
    s.below("covariant_derivative.hyperbolic_5_3",
            (covariant_derivative(hyper, Vec3::UnitY(), position, p) - (5.0 / 3.0) * Vec3::UnitY())
                .norm(),
            1e-12);
    s.below("covariant_derivative.spherical_0_6",
            (covariant_derivative(sphere, Vec3::UnitY(), position, p) - 0.6 * Vec3::UnitY()).norm(),
            1e-12);
  }

  // Sectional curvature over random planes.
  for (int k = 0; k < 3; ++k) {
    const ModelSpace& m = *spaces[k];
    const std::vector<Vec3> xs = random_vectors(options.points, gen);
    const std::vector<Vec3> zs = random_vectors(options.points, gen);
    double err = 0.0;
    for (std::size_t i = 0; i < pts[k].size(); ++i) {
      const CurvatureSample c = sectional_curvature(m, pts[k][i], xs[i], zs[i]);
      err = std::max(err, std::abs(c.sec - expected_sec[k]));
    }
    s.below(std::string("sectional_curvature.") + names[k], err, k == 0 ? 1e-9 : 1e-6);
  }

  // Concircular position field with the chart potentials.
  for (int k = 0; k < 3; ++k) {
    const ModelSpace& m = *spaces[k];
    std::function<double(const Vec3&)> f = [&m](const Vec3& p) {
      return concircular_potential(m.kind(), p);
    };
    if (k == 1 && options.wrong_hyperbolic_potential) f = [](const Vec3&) { return 1.0; };
    s.below(std::string("concircular_residual.") + names[k],
            concircular_residual(m, position, f, pts[k]).max(), k == 0 ? 1e-10 : 1e-7);
  }
  s.above("concircular_residual.euclidean_rotation_control",
          concircular_residual(euclid, rotation, [](const Vec3&) { return 1.0; }, pts[0]).max(),
          0.5);

  // Killing fields.
  s.below("killing_residual.euclidean_rotation", killing_residual(euclid, rotation, pts[0]),
          1e-10);
  s.below("killing_residual.hyperbolic_rotation", killing_residual(hyper, rotation, pts[1]),
          1e-7);
  s.below("killing_residual.spherical_rotation", killing_residual(sphere, rotation, pts[2]),
          1e-7);
  s.below("killing_residual.spherical_hopf", killing_residual(sphere, hopf, pts[2]), 1e-6);
  s.above("killing_residual.euclidean_position_control",
          killing_residual(euclid, position, pts[0]), 0.1);

  // curl / div.
  s.below("curl_div.euclidean_rotation", max_over(pts[0], [&](const Vec3& p) {
            const CurlDiv cd = curl_div(euclid, rotation, p);
            return (cd.curl - Vec3(0, 0, 2)).norm() + std::abs(cd.div);
          }),
          1e-12);
  s.below("curl_div.euclidean_e1", max_over(pts[0], [&](const Vec3& p) {
            const CurlDiv cd = curl_div(euclid, e1, p);
            return cd.curl.norm() + std::abs(cd.div);
          }),
          1e-12);
  s.below("curl_div.spherical_hopf_curl", max_over(pts[2], [&](const Vec3& p) {
            const CurlDiv cd = curl_div(sphere, hopf, p);
            return sphere.norm(p, cd.curl - 2.0 * hopf.value(p)) / sphere.norm(p, hopf.value(p));
          }),
          1e-6);
  s.below("curl_div.spherical_hopf_div",
          max_over(pts[2], [&](const Vec3& p) { return std::abs(curl_div(sphere, hopf, p).div); }),
          1e-6);

  // Beltrami fits.
  const BeltramiFit fit_hopf = beltrami_fit(sphere, hopf, pts[2]);
  s.below("beltrami_fit.spherical_hopf_lambda", std::abs(fit_hopf.lambda - 2.0), 1e-6);
  s.below("beltrami_fit.spherical_hopf_residual", fit_hopf.rel_residual, 1e-6);
  const BeltramiFit fit_opp = beltrami_fit(sphere, fields::hopf_opposite(), pts[2]);
  s.below("beltrami_fit.spherical_hopf_opposite_lambda", std::abs(fit_opp.lambda + 2.0), 1e-6);
  const BeltramiFit fit_e1 = beltrami_fit(euclid, e1, pts[0]);
  s.below("beltrami_fit.euclidean_e1_lambda", std::abs(fit_e1.lambda), 1e-12);
  s.below("beltrami_fit.euclidean_e1_residual", fit_e1.rel_residual, 1e-8);
  s.above("beltrami_fit.hyperbolic_rotation_residual",
          beltrami_fit(hyper, rotation, pts[1]).rel_residual, 0.1);

  // Killing-Beltrami pairs: sec = lambda^2 / 4, grad_X Y = (lambda/2) Y x X
  // (grad Y is skew with axial vector curl(Y) / 2), grad_Y Y = 0.
  struct Pair {
    const char* name;
    const ModelSpace* space;
    const FieldSpec* y;
    const std::vector<Vec3>* pts;
    double lambda;
  };
  const std::array<Pair, 2> kb{{{"euclidean_e1", &euclid, &e1, &pts[0], fit_e1.lambda},
                                {"spherical_hopf", &sphere, &hopf, &pts[2], fit_hopf.lambda}}};
  for (const Pair& pr : kb) {
    const ModelSpace& m = *pr.space;
    const std::vector<Vec3> xs = random_vectors(pr.pts->size(), gen);
    double sec_err = 0.0, conn_err = 0.0, geo = 0.0;
    for (std::size_t i = 0; i < pr.pts->size(); ++i) {
      const Vec3& p = (*pr.pts)[i];
      const Vec3 y = pr.y->value(p);
      const CurvatureSample c = sectional_curvature(m, p, xs[i], y);
      sec_err = std::max(sec_err, std::abs(pr.lambda * pr.lambda / 4.0 - c.sec));
      for (int b = 0; b < 3; ++b) {
        const Vec3 x = Vec3::Unit(b);
        const Vec3 d = covariant_derivative(m, x, *pr.y, p) - 0.5 * pr.lambda * m.cross(p, y, x);
        conn_err = std::max(conn_err, m.norm(p, d));
      }
      geo = std::max(geo, m.norm(p, covariant_derivative(m, y, *pr.y, p)));
    }
    s.below(std::string("killing_beltrami_sec.") + pr.name, sec_err, 1e-5);
    s.below(std::string("killing_beltrami_connection.") + pr.name, conn_err, 1e-5);
    s.below(std::string("killing_beltrami_geodesic.") + pr.name, geo, 1e-5);
  }

  // sec(X,Y)|X^Y|^2 = |grad_X Y|^2 + g(X, grad_X grad_Y Y) for Killing Y.
  struct IdentityPair {
    const char* name;
    const ModelSpace* space;
    FieldSpec y;
    int pts;
  };
  const std::array<IdentityPair, 5> pairs{{{"euclidean_e1", &euclid, e1, 0},
                                 {"euclidean_rotation", &euclid, rotation, 0},
                                 {"spherical_hopf", &sphere, hopf, 2},
                                 {"hyperbolic_rotation", &hyper, rotation, 1},
                                 {"spherical_rotation", &sphere, rotation, 2}}};
  for (const IdentityPair& pr : pairs) {
    double worst = 0.0;
    for (const Vec3& x : random_vectors(3, gen)) {
      worst = std::max(worst, killing_identity_residual(*pr.space, fields::constant(x, "x"), pr.y,
                                            pts[pr.pts]));
    }
    s.below(std::string("killing_identity_residual.") + pr.name, worst, 1e-5);
  }
  return rep;
}

}  // namespace beltrami

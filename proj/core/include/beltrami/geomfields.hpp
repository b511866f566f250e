#pragma once

// Tensor calculus on the conformally flat model charts of Euclidean space,
// the Poincare ball (curvature -1) and the stereographic sphere chart
// (curvature +1), together with a fixed-seed verification suite.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace beltrami {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class ModelKind { euclidean, hyperbolic_ball, spherical_ball };

const char* to_string(ModelKind kind);

// Metric g = exp(2 phi) * delta with exp(phi) = 1, 2/(1-|x|^2), 2/(1+|x|^2).
class ModelSpace {
 public:
  explicit ModelSpace(ModelKind kind) : kind_(kind) {}

  ModelKind kind() const { return kind_; }
  bool in_chart(const Vec3& p) const;
  // Throws InvalidInput outside the chart.
  void require_chart(const Vec3& p) const;

  double phi(const Vec3& p) const;
  Vec3 grad_phi(const Vec3& p) const;
  Mat3 hess_phi(const Vec3& p) const;
  double conformal_factor(const Vec3& p) const;  // exp(phi)

  double inner(const Vec3& p, const Vec3& x, const Vec3& y) const;
  double norm(const Vec3& p, const Vec3& x) const;
  // Cross product built from the metric volume form.
  Vec3 cross(const Vec3& p, const Vec3& x, const Vec3& y) const;

 private:
  ModelKind kind_;
};

enum class FieldRole { concircular, killing, beltrami, generic };

struct FieldSpec {
  std::string name;
  FieldRole role = FieldRole::generic;
  std::function<Vec3(const Vec3&)> value;
  // J(k, i) = d_i Y^k. Optional; finite differences are used when empty.
  std::function<Mat3(const Vec3&)> jacobian;
};

namespace fields {
FieldSpec constant(const Vec3& v, const std::string& name);
FieldSpec position();
FieldSpec rotation();  // R = (-y, x, 0)
// Stereographic image (projection from w = 1) of the Hopf field
// (-y, x, -w, z) on S^3; curl = +2 Y in the sphere chart.
FieldSpec hopf();
// Image of (-y, x, w, -z), the field of the opposite handedness; curl = -2 Y.
FieldSpec hopf_opposite();
}  // namespace fields

// Potential f of the position field on each chart: 1, (1+s)/(1-s),
// (1-s)/(1+s) with s = |x|^2.
double concircular_potential(ModelKind kind, const Vec3& p);

// Fourth-order Richardson central differences with step 1e-4 (scaled by
// 1 - |p| on the ball charts).
Mat3 fd_jacobian(const ModelSpace& space, const std::function<Vec3(const Vec3&)>& f,
                 const Vec3& p);
Mat3 field_jacobian(const ModelSpace& space, const FieldSpec& y, const Vec3& p);

// gamma[k](i, j) = Gamma^k_ij.
std::array<Mat3, 3> christoffel(const ModelSpace& space, const Vec3& p);
// Christoffel symbols by finite differences of g_ij (test oracle).
std::array<Mat3, 3> christoffel_fd(const ModelSpace& space, const Vec3& p);

Vec3 covariant_derivative(const ModelSpace& space, const Vec3& x, const FieldSpec& y,
                          const Vec3& p);
Vec3 covariant_derivative(const ModelSpace& space, const FieldSpec& x, const FieldSpec& y,
                          const Vec3& p);

struct ConcircularResidual {
  double relation = 0.0;    // max |grad_X Z - f X|_g over points and basis X
  double divergence = 0.0;  // max |div Z - 3 f|
  double max() const { return relation > divergence ? relation : divergence; }
};

ConcircularResidual concircular_residual(const ModelSpace& space, const FieldSpec& z,
                                         const std::function<double(const Vec3&)>& f,
                                         const std::vector<Vec3>& points);

// Largest g-norm of the symmetric part of grad Y over the points.
double killing_residual(const ModelSpace& space, const FieldSpec& y,
                        const std::vector<Vec3>& points);

struct CurlDiv {
  Vec3 curl;
  double div = 0.0;
};

CurlDiv curl_div(const ModelSpace& space, const FieldSpec& x, const Vec3& p);

struct CurvatureSample {
  Vec3 p;
  Vec3 x;
  Vec3 z;
  double sec = 0.0;
  double rm = 0.0;
  double wedge_norm_sq = 0.0;
};

CurvatureSample sectional_curvature(const ModelSpace& space, const Vec3& p, const Vec3& x,
                                    const Vec3& z);

// max |sec(X,Y)|X^Y|^2 - |grad_X Y|^2 - g(X, grad_X grad_Y Y)| over the points.
// Throws InvalidInput when Y fails the Killing guard (residual >= 1e-5).
double killing_identity_residual(const ModelSpace& space, const FieldSpec& x,
                                 const FieldSpec& y, const std::vector<Vec3>& points);

struct BeltramiFit {
  double lambda = 0.0;
  double rel_residual = 0.0;
};

// Least-squares lambda in curl Y = lambda Y. Throws InvalidInput when Y
// vanishes at every point.
BeltramiFit beltrami_fit(const ModelSpace& space, const FieldSpec& y,
                         const std::vector<Vec3>& points);

// Uniform points in |p| < radius (0.9 for the ball charts, 2 for Euclidean
// space when radius <= 0).
std::vector<Vec3> sample_points(ModelKind kind, std::size_t count, std::uint64_t seed,
                                double radius = 0.0);

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  std::size_t points = 100;
  // Negative control: use f = 1 for the hyperbolic position field.
  bool wrong_hyperbolic_potential = false;
};

struct Check {
  std::string name;
  std::string comparison;  // "<" or ">"
  double tolerance = 0.0;
  double measured = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::size_t points = 0;
  std::vector<Check> checks;
  bool all_pass() const;
  std::vector<std::string> failed() const;
};

VerificationReport run_verification_suite(const VerifyOptions& options = {});

}  // namespace beltrami

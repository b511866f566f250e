#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "beltrami/diagnose.hpp"
#include "beltrami/errors.hpp"
#include "beltrami/shapes.hpp"
#include "oracles.hpp"

using namespace beltrami;

namespace {

CrossSection ball() { return CrossSection::make(shapes::half_disc(1.0, 2048)); }
CrossSection torus() { return CrossSection::make(shapes::circle({2, 0}, 0.5, 512)); }

struct Solved {
  GSProblem problem;
  EigenSolution sol;
};

Solved solve(const CrossSection& cs, double h, bool constrained = true) {
  const TriMesh mesh = triangulate(cs, h);
  Solved s{assemble(mesh, detect_topology(mesh), constrained), {}};
  s.sol = solve_smallest(s.problem);
  return s;
}

const Solved& ball_02() {
  static const Solved s = solve(ball(), 0.02);
  return s;
}
const Solved& torus_02() {
  static const Solved s = solve(torus(), 0.02);
  return s;
}

}  // namespace

TEST(Constancy, BallIsNearlyConstant) {
  const ConstancyResult c = boundary_constancy(ball_02().problem, ball_02().sol);
  // |X| on the sphere follows sin(theta) and vanishes at the poles.
  EXPECT_GT(c.constancy_score, 0.9);
  EXPECT_FALSE(c.vanishing_warning);
  EXPECT_GT(c.c_estimate, 0.0);
  EXPECT_GE(c.criticality_gap, 0.0);
}

TEST(Constancy, BallProfileMatchesSpheromak) {
  const ConstancyResult c = boundary_constancy(ball_02().problem, ball_02().sol);
  double eq = 0.0;
  for (const BoundarySample& s : c.boundary_speed) eq = std::max(eq, s.value);
  double worst = 0.0;
  for (const BoundarySample& s : c.boundary_speed) {
    const double theta = std::atan2(s.position.r, s.position.z);
    worst = std::max(worst, std::abs(s.value / eq - oracle::spheromak_boundary_speed(theta)));
  }
  EXPECT_LT(worst, 0.03);
}

TEST(Constancy, ScaleInvariant) {
  const Solved a = solve(torus(), 0.05);
  const Solved b = solve(torus().scaled(3.0), 0.15);
  EXPECT_NEAR(boundary_constancy(a.problem, a.sol).constancy_score,
              boundary_constancy(b.problem, b.sol).constancy_score, 1e-9);
}

TEST(Constancy, ZeroFieldRejected) {
  const GSProblem& p = ball_02().problem;
  EXPECT_THROW(boundary_constancy(p, Eigen::VectorXd::Zero(p.mesh.num_vertices()), 4.0),
               InvalidInput);
}

TEST(Rellich, BallAndTorusAgree) {
  for (const Solved* s : {&ball_02(), &torus_02()}) {
    const RellichResult r = rellich_identity(s->problem, s->sol);
    EXPECT_LT(r.residual, 0.02);
    EXPECT_GT(r.volume_side, 0.0);
    const RellichResult shifted = rellich_identity(s->problem, s->sol, 5.0);
    EXPECT_LT(shifted.residual, 0.02);
    EXPECT_EQ(shifted.z_origin, 5.0);
    EXPECT_EQ(shifted.volume_side, r.volume_side);
  }
}

TEST(Rellich, ConvergesUnderRefinement) {
  for (const CrossSection& cs : {ball(), torus()}) {
    std::vector<double> res;
    for (double h : {0.08, 0.04, 0.02}) {
      const Solved s = solve(cs, h);
      res.push_back(rellich_identity(s.problem, s.sol).residual);
    }
    EXPECT_LT(res[1], res[0]);
    EXPECT_LT(res[2], res[1]);
    EXPECT_GT(std::log2(res[1] / res[2]), 0.9);
  }
}

TEST(Rellich, NonEuclideanUnsupported) {
  EXPECT_THROW(rellich_identity(ball_02().problem, ball_02().sol, 0.0, MetricKind::hyperbolic),
               Unsupported);
  EXPECT_THROW(rellich_identity(ball_02().problem, ball_02().sol, 0.0, MetricKind::spherical),
               Unsupported);
}

TEST(Gxr, ConstantOnBoundary) {
  const GxrResult b = g_xr_constancy(ball_02().problem, ball_02().sol);
  EXPECT_EQ(b.c0, 0.0);
  EXPECT_LT(b.deviation, 1e-10);
  const GxrResult t = g_xr_constancy(torus_02().problem, torus_02().sol);
  EXPECT_NEAR(t.c0, torus_02().sol.lambda_plus * torus_02().sol.c_b, 1e-15);
  EXPECT_LT(t.deviation, 1e-10);
}

TEST(Gxr, DetectsNonConstantBoundary) {
  const Solved& t = torus_02();
  Eigen::VectorXd psi = t.sol.psi;
  const double amp = psi.cwiseAbs().maxCoeff();
  for (std::size_t v = 0; v < t.problem.mesh.num_vertices(); ++v) {
    psi[static_cast<Eigen::Index>(v)] += 0.3 * amp * t.problem.mesh.vertices[v].z;
  }
  EXPECT_GT(g_xr_constancy(t.problem, psi, t.sol.lambda_plus, t.sol.c_b).deviation, 0.1);
}

TEST(FluxBalance, ConstrainedTorusBalances) {
  const double constrained = std::abs(flux_balance(torus_02().problem, torus_02().sol));
  const Solved plain = solve(torus(), 0.02, false);
  const double unconstrained = std::abs(flux_balance(plain.problem, plain.sol));
  EXPECT_LT(constrained, 1e-6);
  EXPECT_GE(unconstrained, 100.0 * constrained);
}

TEST(FluxBalance, Rejects) {
  EXPECT_THROW(flux_balance(ball_02().problem, ball_02().sol), InvalidInput);
  const GSProblem& p = torus_02().problem;
  EXPECT_THROW(flux_balance(p, Eigen::VectorXd::Constant(p.mesh.num_vertices(), 2.0), 50.0),
               InvalidInput);
}

TEST(NormalDerivative, BallMatchesSpheromak) {
  // d psi / dn on the unit sphere for psi = rho sin^2 j1(k rho), up to scale.
  const Solved& b = ball_02();
  const Eigen::VectorXd dn = boundary_normal_derivative(b.problem, b.sol.psi, b.sol.mu);
  const double k = oracle::tan_root();
  double num = 0.0, den = 0.0;
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t v = 0; v < b.problem.mesh.num_vertices(); ++v) {
    const Point p = b.problem.mesh.vertices[v];
    if (b.problem.mesh.tags[v].kind != VertexKind::outer_boundary || p.r < 0.2) continue;
    const double s = p.r;  // sin(theta) on the unit sphere
    const double ref = s * s * (oracle::sph_j1(k) + k * oracle::sph_j1_prime(k));
    pairs.emplace_back(dn[static_cast<Eigen::Index>(v)], ref);
    num += dn[static_cast<Eigen::Index>(v)] * ref;
    den += ref * ref;
  }
  const double scale = num / den;
  double worst = 0.0, peak = 0.0;
  for (auto [d, ref] : pairs) {
    worst = std::max(worst, std::abs(d - scale * ref));
    peak = std::max(peak, std::abs(scale * ref));
  }
  EXPECT_LT(worst / peak, 0.03);
}

TEST(Diagnose, ReportFields) {
  const DiagnosticsReport t = diagnose(torus_02().problem, torus_02().sol);
  EXPECT_TRUE(t.has_flux_balance);
  EXPECT_EQ(t.rellich_shifted.z_origin, 5.0);
  EXPECT_NEAR(t.volume, 2 * std::numbers::pi * std::numbers::pi * 2 * 0.25, 0.01 * t.volume);
  EXPECT_DOUBLE_EQ(t.objective, torus_02().sol.lambda_plus * std::cbrt(t.volume));
  const DiagnosticsReport b = diagnose(ball_02().problem, ball_02().sol, {.z_shift = -2.0});
  EXPECT_FALSE(b.has_flux_balance);
  EXPECT_EQ(b.rellich_shifted.z_origin, -2.0);
}

TEST(Diagnose, TranslationInZ) {
  const Solved a = solve(torus(), 0.05);
  const Solved b = solve(torus().translated_z(1.5), 0.05);
  const DiagnosticsReport da = diagnose(a.problem, a.sol), db = diagnose(b.problem, b.sol);
  EXPECT_NEAR(da.objective, db.objective, 1e-10 * da.objective);
  EXPECT_NEAR(da.constancy.constancy_score, db.constancy.constancy_score, 1e-6);
}

namespace {

std::vector<SweepMember> torus_family(const std::vector<double>& centres, double h) {
  std::vector<SweepMember> fam;
  for (double c : centres) {
    fam.push_back({c, CrossSection::make(shapes::circle({c, 0}, 0.5, 512)), h});
  }
  return fam;
}

}  // namespace

TEST(Sweep, MatchesIndividualSolves) {
  const std::vector<double> centres{3.0, 1.5, 2.0};
  const auto rows = sweep(torus_family(centres, 0.05), {}, true, 2);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].parameter, 1.5);
  EXPECT_EQ(rows[0].index, 1u);
  for (const SweepRow& row : rows) {
    const Solved s = solve(CrossSection::make(shapes::circle({row.parameter, 0}, 0.5, 512)), 0.05);
    EXPECT_EQ(row.lambda_plus, s.sol.lambda_plus);
    EXPECT_EQ(row.objective, s.sol.lambda_plus * std::cbrt(revolved_volume(s.problem.mesh)));
  }
  const auto serial = sweep(torus_family(centres, 0.05), {}, true, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(serial[i].objective, rows[i].objective);
}

TEST(Sweep, ScaleFamilyHasConstantObjective) {
  std::vector<SweepMember> fam;
  const CrossSection base = torus();
  for (double s : {1.0, 2.0, 4.0}) fam.push_back({s, base.scaled(s), 0.05 * s});
  const auto rows = sweep(fam, {});
  for (const SweepRow& r : rows) EXPECT_NEAR(r.objective, rows[0].objective, 1e-10 * r.objective);
  const auto raw = sweep(fam, {}, false);
  EXPECT_NEAR(raw[1].objective * 2.0, raw[0].objective, 1e-12 * raw[0].objective);
}

TEST(Sweep, EllipseAgainstFiniteDifferences) {
  std::vector<SweepMember> fam;
  for (double q : {1.0, 2.0}) {
    const double a = std::sqrt(0.25 * q), b = std::sqrt(0.25 / q);
    fam.push_back({q, CrossSection::make(shapes::ellipse({3, 0}, a, b, 1024)), 0.02});
  }
  const auto rows = sweep(fam, {}, false);
  for (const SweepRow& r : rows) {
    const double q = r.parameter;
    const double fd = oracle::fd_torus_lambda(3, std::sqrt(0.25 * q), std::sqrt(0.25 / q), 0.005).lambda;
    EXPECT_LT(std::abs(r.lambda_plus - fd) / fd, 0.01) << "q=" << q;
  }
}

TEST(Sweep, FailingMemberNamesIndex) {
  auto fam = torus_family({2.0, 3.0}, 0.05);
  fam.push_back({9.0, CrossSection::make(shapes::circle({2, 0}, 0.5, 64)), 5.0});
  try {
    sweep(fam, {});
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("member 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(sweep(torus_family({2.0}, 0.05), {}), InvalidInput);
}

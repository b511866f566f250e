#pragma once

// Necessary-condition diagnostics and integral identities evaluated on
// computed eigen-solutions, plus shape sweeps of lambda * vol^(1/3).

#include <string>
#include <vector>

#include "beltrami/gseig.hpp"
#include "beltrami/xsection.hpp"

namespace beltrami {

struct BoundarySample {
  double s = 0.0;  // arclength along the outer boundary (edge midpoints)
  Point position;
  double value = 0.0;
};

struct ConstancyResult {
  std::vector<BoundarySample> boundary_speed;  // |X| on the outer boundary
  double constancy_score = 0.0;                // (max - min) / max
  double c_estimate = 0.0;                     // length-weighted mean |X|
  double boundary_max = 0.0;
  double interior_max = 0.0;
  // Boundary |X| negligible against the interior maximum.
  bool vanishing_warning = false;
  // |int |X|^2 dV - 3 c^2 vol| / int |X|^2 dV; reported, never judged.
  double criticality_gap = 0.0;
};

// Throws InvalidInput for a zero field.
ConstancyResult boundary_constancy(const GSProblem& problem, const Eigen::VectorXd& psi,
                                   double lambda);
ConstancyResult boundary_constancy(const GSProblem& problem, const EigenSolution& sol);

// int |X|^2 dV from the discrete energy 2 pi (psi' K psi + mu psi' M psi).
double field_energy(const GSProblem& problem, const Eigen::VectorXd& psi, double lambda);

// Nodal normal derivative of psi on the boundary recovered from the
// discrete residual (consistent flux); zero away from the boundary and on
// the axis.
Eigen::VectorXd boundary_normal_derivative(const GSProblem& problem, const Eigen::VectorXd& psi,
                                           double mu);

struct RellichResult {
  double volume_side = 0.0;
  double boundary_side = 0.0;
  double residual = 0.0;  // |LHS - RHS| / max(|LHS|, |RHS|)
  double z_origin = 0.0;
};

// Compares int |X|^2 dV with the boundary integral of |X|^2 <Z, N> for the
// position field Z taken about (0, z_origin). Throws Unsupported for
// non-Euclidean metrics.
RellichResult rellich_identity(const GSProblem& problem, const EigenSolution& sol,
                               double z_origin = 0.0,
                               MetricKind metric = MetricKind::euclidean);

struct GxrResult {
  std::vector<BoundarySample> g_xr_boundary;  // g(X, R) = r X_phi
  double c0 = 0.0;
  double deviation = 0.0;  // max |g - c0| / max |lambda psi|
};

GxrResult g_xr_constancy(const GSProblem& problem, const Eigen::VectorXd& psi, double lambda,
                         double c_b);
GxrResult g_xr_constancy(const GSProblem& problem, const EigenSolution& sol);

// Boundary integral of (d psi / dn) / r, normalised by
// max_T(|grad psi| / r) * perimeter. torus_like only; constant psi is
// rejected.
double flux_balance(const GSProblem& problem, const Eigen::VectorXd& psi, double mu);
double flux_balance(const GSProblem& problem, const EigenSolution& sol);

struct DiagnosticsReport {
  ConstancyResult constancy;
  RellichResult rellich;
  RellichResult rellich_shifted;
  GxrResult g_xr;
  bool has_flux_balance = false;
  double flux_balance = 0.0;
  double volume = 0.0;
  double objective = 0.0;  // lambda * vol^(1/3)
};

struct DiagnoseOptions {
  double z_shift = 5.0;  // second origin for the Rellich check
};

DiagnosticsReport diagnose(const GSProblem& problem, const EigenSolution& sol,
                           const DiagnoseOptions& options = {});

struct SweepMember {
  double parameter = 0.0;
  CrossSection section;
  double h = 0.0;
};

struct SweepRow {
  std::size_t index = 0;  // position in the input family
  double parameter = 0.0;
  double lambda_plus = 0.0;
  double volume = 0.0;
  double objective = 0.0;
  int iterations = 0;
};

// Meshes and solves every member (in parallel when threads != 1; 0 picks the
// hardware concurrency). Rows come back sorted by parameter. Any failing
// member aborts the sweep with its index in the message.
std::vector<SweepRow> sweep(const std::vector<SweepMember>& family,
                            const SolverOptions& options, bool volume_normalize = true,
                            unsigned threads = 0);

}  // namespace beltrami

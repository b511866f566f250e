#pragma once

// Smallest positive curl eigenvalue of a solid of revolution through the
// axisymmetric (m = 0) stream-function reduction
//
//   X = grad(psi) x grad(phi) + lambda psi grad(phi),   -Delta* psi = mu psi,
//   mu = lambda^2,
//
// discretised with piecewise-linear elements on a TriMesh. The value
// reported is an upper bound for the eigenvalue over all Fourier modes.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "beltrami/mesh.hpp"

namespace beltrami {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Topology { ball_like, torus_like };

const char* to_string(Topology t);
std::optional<Topology> topology_from_string(const std::string& name);

// ball_like when the mesh touches the axis, torus_like otherwise. Meshes
// with hole boundaries throw Unsupported.
Topology detect_topology(const TriMesh& mesh);

struct GSProblem {
  TriMesh mesh;
  Topology topology = Topology::ball_like;
  // false only for the plain Dirichlet torus (psi = 0 on the boundary, no
  // flux constraint); kept for comparison runs.
  bool constrained = true;

  // Reduced system on the admissible unknowns.
  SparseMatrix K;
  SparseMatrix M;
  Eigen::VectorXd ell;  // constraint row, torus_like only (empty otherwise)

  // Unreduced nodal matrices and load vector int phi_i / r dA.
  SparseMatrix K_full;
  SparseMatrix M_full;
  Eigen::VectorXd ell_full;

  // -1 where psi is fixed to zero: the Dirichlet boundary (ball_like), the
  // axis, and the off-axis vertex of every triangle with an edge on the axis.
  std::vector<int> dof_of_node;
  int boundary_dof = -1;         // shared boundary unknown c_b (torus_like)

  int num_dofs() const { return static_cast<int>(K.rows()); }
  Eigen::VectorXd expand(const Eigen::VectorXd& dofs) const;
};

// Throws InvalidInput when the topology contradicts the mesh tags, and
// Unsupported for meshes with holes.
GSProblem assemble(const TriMesh& mesh, Topology topology, bool constrained = true);

struct SolverOptions {
  int k = 4;
  int max_iter = 500;
  double tol = 1e-10;
  std::uint64_t seed = 20240611;
};

struct EigenSolution {
  double lambda_plus = 0.0;
  double mu = 0.0;
  Eigen::VectorXd psi;       // nodal values
  Eigen::VectorXd psi_dofs;  // reduced unknowns
  double c_b = 0.0;
  std::vector<double> mus;          // k smallest, ascending
  std::vector<double> eigen_gaps;   // sqrt(mus)
  double residual_norm = 0.0;       // relative, worst of the k pairs
  int iterations = 0;
  bool near_degenerate = false;     // mu_2 within 1e-9 relative of mu_1
};

// Shift-invert subspace iteration with Rayleigh-Ritz. Throws NonConvergence
// after max_iter sweeps and InvalidInput for k outside [1, dim].
EigenSolution solve_smallest(const GSProblem& problem, const SolverOptions& options = {});

enum class GradientMode {
  recovered,  // area-weighted nodal averages, interpolated linearly
  element,    // constant gradient of the containing triangle
};

struct FieldSample {
  Point position;
  double x_r = 0.0;
  double x_phi = 0.0;
  double x_z = 0.0;

  double norm() const;
};

// Locates points in a mesh through a uniform bucket grid.
class PointLocator {
 public:
  explicit PointLocator(const TriMesh& mesh);
  // Containing triangle and barycentric weights; points within a relative
  // 1e-9 of the mesh are accepted.
  std::optional<std::pair<int, std::array<double, 3>>> locate(Point p) const;

 private:
  const TriMesh* mesh_;
  double r0_ = 0.0, z0_ = 0.0, cell_ = 1.0;
  int nr_ = 1, nz_ = 1;
  std::vector<std::vector<int>> buckets_;
};

// Per-node gradient of psi, averaged over incident triangles with area
// weights.
std::vector<std::array<double, 2>> recovered_gradients(const TriMesh& mesh,
                                                       const Eigen::VectorXd& psi);

// X at each point from nodal psi and lambda. In triangles next to the axis
// X_r and X_z come from a local fit of psi ~ r^2 f(r, z), which also gives
// the on-axis limit. Throws InvalidInput for points outside the mesh.
std::vector<FieldSample> reconstruct(const GSProblem& problem, const Eigen::VectorXd& psi,
                                     double lambda, const std::vector<Point>& points,
                                     GradientMode mode = GradientMode::recovered);
std::vector<FieldSample> reconstruct(const GSProblem& problem, const EigenSolution& sol,
                                     const std::vector<Point>& points,
                                     GradientMode mode = GradientMode::recovered);

// psi^T K psi / psi^T M psi over reduced unknowns. Throws InvalidInput for a
// zero denominator or (torus_like) a psi violating the constraint.
double rayleigh_quotient(const GSProblem& problem, const Eigen::VectorXd& psi_dofs);

}  // namespace beltrami

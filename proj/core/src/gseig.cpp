#include "beltrami/gseig.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "beltrami/errors.hpp"

namespace beltrami {
namespace {

using Triplet = Eigen::Triplet<double>;

struct ElementGradients {
  double area;
  std::array<double, 3> gr, gz;
};

ElementGradients gradients(const TriMesh& mesh, const Triangle& t) {
  const Point a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
  const double twice = (b.r - a.r) * (c.z - a.z) - (b.z - a.z) * (c.r - a.r);
  ElementGradients g;
  g.area = 0.5 * twice;
  g.gr = {(b.z - c.z) / twice, (c.z - a.z) / twice, (a.z - b.z) / twice};
  g.gz = {(c.r - b.r) / twice, (a.r - c.r) / twice, (b.r - a.r) / twice};
  return g;
}

struct ElementMatrices {
  double k[3][3];
  double m[3][3];
  double l[3];
};

// Off-axis triangles freeze 1/r at the centroid and integrate the polynomial
// parts exactly. Triangles touching the axis use the edge-midpoint rule. A
// midpoint on the axis would weigh 1/r = inf against the gradient of the
// opposite vertex; that vertex is pinned to zero instead (axis_pinned), so
// the term is skipped here and never meets a free unknown.
ElementMatrices element(const TriMesh& mesh, const Triangle& t) {
  const ElementGradients g = gradients(mesh, t);
  ElementMatrices e{};
  bool on_axis = false;
  for (int v : t) on_axis = on_axis || mesh.vertices[v].r <= kAxisTolerance;

  if (!on_axis) {
    const double rc =
        (mesh.vertices[t[0]].r + mesh.vertices[t[1]].r + mesh.vertices[t[2]].r) / 3.0;
    const double w = g.area / rc;
    for (int i = 0; i < 3; ++i) {
      e.l[i] = w / 3.0;
      for (int j = 0; j < 3; ++j) {
        e.k[i][j] = w * (g.gr[i] * g.gr[j] + g.gz[i] * g.gz[j]);
        e.m[i][j] = w * (i == j ? 2.0 : 1.0) / 12.0;
      }
    }
    return e;
  }

  for (int q = 0; q < 3; ++q) {
    const int i0 = (q + 1) % 3, i1 = (q + 2) % 3;
    const double rq = 0.5 * (mesh.vertices[t[i0]].r + mesh.vertices[t[i1]].r);
    if (rq <= kAxisTolerance) continue;
    const double w = g.area / 3.0 / rq;
    double phi[3] = {0.0, 0.0, 0.0};
    phi[i0] = phi[i1] = 0.5;
    for (int i = 0; i < 3; ++i) {
      e.l[i] += w * phi[i];
      for (int j = 0; j < 3; ++j) {
        e.k[i][j] += w * (g.gr[i] * g.gr[j] + g.gz[i] * g.gz[j]);
        e.m[i][j] += w * phi[i] * phi[j];
      }
    }
  }
  return e;
}

// Off-axis vertices of triangles with an edge on the axis.
std::vector<char> axis_pinned(const TriMesh& mesh) {
  std::vector<char> pinned(mesh.num_vertices(), 0);
  for (const Triangle& t : mesh.triangles) {
    int on = 0;
    for (int v : t) on += mesh.vertices[v].r <= kAxisTolerance;
    if (on != 2) continue;
    for (int v : t) {
      if (mesh.vertices[v].r > kAxisTolerance && !mesh.is_boundary(v)) pinned[v] = 1;
    }
  }
  return pinned;
}

Eigen::VectorXd project_off(const Eigen::VectorXd& v, const Eigen::VectorXd& ell) {
  if (ell.size() == 0) return v;
  return v - (ell.dot(v) / ell.squaredNorm()) * ell;
}

}  // namespace

const char* to_string(Topology t) {
  return t == Topology::ball_like ? "ball_like" : "torus_like";
}

std::optional<Topology> topology_from_string(const std::string& name) {
  if (name == "ball_like") return Topology::ball_like;
  if (name == "torus_like") return Topology::torus_like;
  return std::nullopt;
}

Topology detect_topology(const TriMesh& mesh) {
  for (const VertexTag& t : mesh.tags) {
    if (t.kind == VertexKind::hole_boundary) {
      throw Unsupported("multiply-connected cross-sections unsupported");
    }
  }
  return mesh.has_axis() ? Topology::ball_like : Topology::torus_like;
}

Eigen::VectorXd GSProblem::expand(const Eigen::VectorXd& dofs) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_of_node.size()));
  for (std::size_t v = 0; v < dof_of_node.size(); ++v) {
    if (dof_of_node[v] >= 0) out[static_cast<Eigen::Index>(v)] = dofs[dof_of_node[v]];
  }
  return out;
}

GSProblem assemble(const TriMesh& mesh, Topology topology, bool constrained) {
  if (detect_topology(mesh) != topology) {
    throw InvalidInput(topology == Topology::ball_like
                           ? "ball_like topology needs a cross-section touching the axis"
                           : "torus_like topology forbids axis vertices");
  }
  GSProblem p;
  p.mesh = mesh;
  p.topology = topology;
  p.constrained = topology == Topology::torus_like ? constrained : true;

  const int nv = static_cast<int>(mesh.num_vertices());
  p.dof_of_node.assign(static_cast<std::size_t>(nv), -1);
  const std::vector<char> pinned = axis_pinned(mesh);
  int n = 0;
  for (int v = 0; v < nv; ++v) {
    if (!mesh.is_boundary(v) && !pinned[v]) p.dof_of_node[v] = n++;
  }
  if (topology == Topology::torus_like && p.constrained) {
    p.boundary_dof = n++;
    for (int v = 0; v < nv; ++v) {
      if (mesh.is_boundary(v)) p.dof_of_node[v] = p.boundary_dof;
    }
  }
  if (n == 0) throw InvalidInput("mesh has no free unknowns; refine it");

  std::vector<Triplet> kf, mf, kr, mr;
  kf.reserve(9 * mesh.num_triangles());
  mf.reserve(9 * mesh.num_triangles());
  p.ell_full = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd ell = Eigen::VectorXd::Zero(n);
  for (const Triangle& t : mesh.triangles) {
    const ElementMatrices e = element(mesh, t);
    for (int i = 0; i < 3; ++i) {
      p.ell_full[t[i]] += e.l[i];
      const int di = p.dof_of_node[t[i]];
      if (di >= 0) ell[di] += e.l[i];
      for (int j = 0; j < 3; ++j) {
        kf.emplace_back(t[i], t[j], e.k[i][j]);
        mf.emplace_back(t[i], t[j], e.m[i][j]);
        const int dj = p.dof_of_node[t[j]];
        if (di >= 0 && dj >= 0) {
          kr.emplace_back(di, dj, e.k[i][j]);
          mr.emplace_back(di, dj, e.m[i][j]);
        }
      }
    }
  }
  p.K_full.resize(nv, nv);
  p.M_full.resize(nv, nv);
  p.K_full.setFromTriplets(kf.begin(), kf.end());
  p.M_full.setFromTriplets(mf.begin(), mf.end());
  p.K.resize(n, n);
  p.M.resize(n, n);
  p.K.setFromTriplets(kr.begin(), kr.end());
  p.M.setFromTriplets(mr.begin(), mr.end());
  if (p.boundary_dof >= 0) p.ell = ell;
  return p;
}

EigenSolution solve_smallest(const GSProblem& problem, const SolverOptions& options) {
  const Eigen::Index n = problem.num_dofs();
  const bool bordered = problem.ell.size() > 0;
  const Eigen::Index dim = bordered ? n - 1 : n;
  if (options.k < 1 || options.k > dim) {
    throw InvalidInput("k must lie between 1 and the admissible dimension " +
                       std::to_string(dim));
  }
  if (options.max_iter < 1 || !(options.tol > 0.0)) {
    throw InvalidInput("max_iter and tol must be positive");
  }
  const Eigen::Index k = options.k;
  const Eigen::Index p = std::min<Eigen::Index>(std::max<Eigen::Index>(2 * k, k + 8), dim);

  // Operator X -> K^{-1} M X restricted to the admissible space.
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  Eigen::SparseLU<SparseMatrix> lu;
  if (bordered) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(problem.K.nonZeros() + 2 * n));
    for (Eigen::Index c = 0; c < problem.K.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(problem.K, c); it; ++it) {
        t.emplace_back(it.row(), it.col(), it.value());
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      t.emplace_back(i, n, problem.ell[i]);
      t.emplace_back(n, i, problem.ell[i]);
    }
    SparseMatrix B(n + 1, n + 1);
    B.setFromTriplets(t.begin(), t.end());
    lu.compute(B);
    if (lu.info() != Eigen::Success) throw NonConvergence("bordered factorisation failed", 0.0);
  } else {
    ldlt.compute(problem.K);
    if (ldlt.info() != Eigen::Success) throw NonConvergence("stiffness factorisation failed", 0.0);
  }
  auto apply = [&](const Eigen::MatrixXd& X) {
    const Eigen::MatrixXd MX = problem.M * X;
    if (!bordered) return Eigen::MatrixXd(ldlt.solve(MX));
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 1, X.cols());
    rhs.topRows(n) = MX;
    const Eigen::MatrixXd sol = lu.solve(rhs);
    return Eigen::MatrixXd(sol.topRows(n));
  };

  std::mt19937_64 gen(options.seed);
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, j) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    }
  }

  Eigen::VectorXd ritz;
  double worst = 0.0;
  int iter = 0;
  bool converged = false;
  while (iter < options.max_iter) {
    ++iter;
    const Eigen::MatrixXd Y = apply(X);
    Eigen::MatrixXd A = Y.transpose() * (problem.K * Y);
    Eigen::MatrixXd Bm = Y.transpose() * (problem.M * Y);
    A = 0.5 * (A + A.transpose()).eval();
    Bm = 0.5 * (Bm + Bm.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Bm);
    if (es.info() != Eigen::Success) throw NonConvergence("Rayleigh-Ritz step failed", worst);
    ritz = es.eigenvalues();
    X = Y * es.eigenvectors();

    worst = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::VectorXd x = X.col(j);
      const Eigen::VectorXd Mx = problem.M * x;
      const Eigen::VectorXd r = project_off(problem.K * x - ritz[j] * Mx, problem.ell);
      worst = std::max(worst, r.norm() / (std::abs(ritz[j]) * Mx.norm()));
    }
    if (worst <= options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonConvergence("eigensolver did not converge in " + std::to_string(iter) +
                             " iterations",
                         worst);
  }

  EigenSolution s;
  s.iterations = iter;
  s.residual_norm = worst;
  s.mu = ritz[0];
  if (!(s.mu > 0.0)) throw NonConvergence("smallest eigenvalue is not positive", worst);
  s.lambda_plus = std::sqrt(s.mu);
  for (Eigen::Index j = 0; j < k; ++j) {
    s.mus.push_back(ritz[j]);
    s.eigen_gaps.push_back(std::sqrt(ritz[j]));
  }
  if (p > 1) s.near_degenerate = std::abs(ritz[1] - ritz[0]) <= 1e-9 * std::abs(ritz[0]);

  s.psi_dofs = X.col(0);
  s.psi = problem.expand(s.psi_dofs);
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < s.psi.size(); ++i) {
    if (std::abs(s.psi[i]) > std::abs(s.psi[arg])) arg = i;
  }
  if (s.psi[arg] < 0.0) {
    s.psi = -s.psi;
    s.psi_dofs = -s.psi_dofs;
  }
  if (problem.boundary_dof >= 0) s.c_b = s.psi_dofs[problem.boundary_dof];
  return s;
}

double FieldSample::norm() const { return std::sqrt(x_r * x_r + x_phi * x_phi + x_z * x_z); }

PointLocator::PointLocator(const TriMesh& mesh) : mesh_(&mesh) {
  if (mesh.vertices.empty()) return;
  double r1 = mesh.vertices[0].r, z1 = mesh.vertices[0].z;
  r0_ = r1;
  z0_ = z1;
  for (const Point& p : mesh.vertices) {
    r0_ = std::min(r0_, p.r);
    z0_ = std::min(z0_, p.z);
    r1 = std::max(r1, p.r);
    z1 = std::max(z1, p.z);
  }
  const double span = std::max(r1 - r0_, z1 - z0_);
  const double nt = static_cast<double>(std::max<std::size_t>(mesh.num_triangles(), 1));
  cell_ = std::max(span / std::sqrt(nt), 1e-300);
  nr_ = static_cast<int>((r1 - r0_) / cell_) + 1;
  nz_ = static_cast<int>((z1 - z0_) / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(nr_) * static_cast<std::size_t>(nz_));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    double a0 = 1e300, a1 = -1e300, b0 = 1e300, b1 = -1e300;
    for (int v : mesh.triangles[t]) {
      a0 = std::min(a0, mesh.vertices[v].r);
      a1 = std::max(a1, mesh.vertices[v].r);
      b0 = std::min(b0, mesh.vertices[v].z);
      b1 = std::max(b1, mesh.vertices[v].z);
    }
    const int i0 = std::clamp(static_cast<int>((a0 - r0_) / cell_), 0, nr_ - 1);
    const int i1 = std::clamp(static_cast<int>((a1 - r0_) / cell_), 0, nr_ - 1);
    const int j0 = std::clamp(static_cast<int>((b0 - z0_) / cell_), 0, nz_ - 1);
    const int j1 = std::clamp(static_cast<int>((b1 - z0_) / cell_), 0, nz_ - 1);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) {
        buckets_[static_cast<std::size_t>(i) * nz_ + j].push_back(static_cast<int>(t));
      }
    }
  }
}

std::optional<std::pair<int, std::array<double, 3>>> PointLocator::locate(Point p) const {
  if (buckets_.empty()) return std::nullopt;
  const double fi = (p.r - r0_) / cell_, fj = (p.z - z0_) / cell_;
  if (!(fi > -1.0 && fi < nr_ + 1.0 && fj > -1.0 && fj < nz_ + 1.0)) return std::nullopt;
  const int i = std::clamp(static_cast<int>(std::floor(fi)), 0, nr_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fj)), 0, nz_ - 1);
  int best = -1;
  double best_min = -1e300;
  std::array<double, 3> best_w{};
  for (int t : buckets_[static_cast<std::size_t>(i) * nz_ + j]) {
    const Triangle& T = mesh_->triangles[t];
    const Point a = mesh_->vertices[T[0]], b = mesh_->vertices[T[1]], c = mesh_->vertices[T[2]];
    const double twice = (b.r - a.r) * (c.z - a.z) - (b.z - a.z) * (c.r - a.r);
    std::array<double, 3> w{
        ((b.r - p.r) * (c.z - p.z) - (b.z - p.z) * (c.r - p.r)) / twice,
        ((c.r - p.r) * (a.z - p.z) - (c.z - p.z) * (a.r - p.r)) / twice,
        ((a.r - p.r) * (b.z - p.z) - (a.z - p.z) * (b.r - p.r)) / twice};
    const double m = std::min({w[0], w[1], w[2]});
    if (m > best_min) {
      best_min = m;
      best = t;
      best_w = w;
    }
  }
  if (best < 0 || best_min < -1e-9) return std::nullopt;
  return std::make_pair(best, best_w);
}

std::vector<std::array<double, 2>> recovered_gradients(const TriMesh& mesh,
                                                       const Eigen::VectorXd& psi) {
  std::vector<std::array<double, 2>> g(mesh.num_vertices(), {0.0, 0.0});
  std::vector<double> w(mesh.num_vertices(), 0.0);
  for (const Triangle& t : mesh.triangles) {
    const ElementGradients e = gradients(mesh, t);
    double gr = 0.0, gz = 0.0;
    for (int i = 0; i < 3; ++i) {
      gr += psi[t[i]] * e.gr[i];
      gz += psi[t[i]] * e.gz[i];
    }
    for (int v : t) {
      g[v][0] += e.area * gr;
      g[v][1] += e.area * gz;
      w[v] += e.area;
    }
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (w[v] > 0.0) {
      g[v][0] /= w[v];
      g[v][1] /= w[v];
    }
  }
  return g;
}

namespace {

// Near the axis psi ~ r^2 f(r, z) with f smooth, while the P1 field is
// pinned in the first layer and psi_r / r degenerates. Inside triangles
// touching the axis or a pinned vertex, f = psi / r^2 is fitted by least
// squares as a + b dz + c r^2 over the free off-axis vertices within three
// mesh sizes; X_r and X_z come from the fit.
class AxisFit {
 public:
  AxisFit(const GSProblem& problem, const Eigen::VectorXd& psi)
      : mesh_(problem.mesh), psi_(psi) {
    if (!mesh_.has_axis()) return;
    const std::size_t nv = mesh_.num_vertices();
    special_.assign(nv, 0);
    usable_.assign(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) {
      const bool axis = mesh_.vertices[v].r <= kAxisTolerance;
      const bool pinned = !mesh_.is_boundary(static_cast<int>(v)) && problem.dof_of_node[v] < 0;
      special_[v] = axis || pinned;
      usable_[v] = !axis && !pinned;
    }
    incident_.resize(nv);
    for (std::size_t t = 0; t < mesh_.num_triangles(); ++t) {
      for (int v : mesh_.triangles[t]) incident_[v].push_back(static_cast<int>(t));
    }
  }

  bool in_zone(const Triangle& t) const {
    if (special_.empty()) return false;
    return special_[t[0]] || special_[t[1]] || special_[t[2]];
  }

  void sample(const Triangle& t, Point p, FieldSample& s) const {
    // Candidates four rings out; the weight vanishes smoothly at radius R so
    // the fit varies continuously with p.
    double longest = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Point a = mesh_.vertices[t[i]], b = mesh_.vertices[t[(i + 1) % 3]];
      longest = std::max(longest, std::hypot(a.r - b.r, a.z - b.z));
    }
    const double radius = 3.0 * (mesh_.h > 0.0 ? mesh_.h : longest);
    std::vector<int> ring(t.begin(), t.end());
    std::vector<char> seen(mesh_.num_vertices(), 0);
    for (int v : ring) seen[v] = 1;
    for (int pass = 0; pass < 8; ++pass) {
      const std::size_t end = ring.size();
      for (std::size_t i = 0; i < end; ++i) {
        for (int tri : incident_[ring[i]]) {
          for (int v : mesh_.triangles[tri]) {
            if (!seen[v]) {
              seen[v] = 1;
              ring.push_back(v);
            }
          }
        }
      }
    }
    // Nodal psi is depressed for a few layers next to the pinned nodes, so
    // the patch is centred no closer than 6h to the axis and extrapolated.
    const Point centre{std::max(p.r, 2.0 * radius), p.z};
    std::vector<std::pair<int, double>> use;
    for (int v : ring) {
      if (!usable_[v]) continue;
      const Point q = mesh_.vertices[v];
      const double d2 = ((q.r - centre.r) * (q.r - centre.r) + (q.z - centre.z) * (q.z - centre.z)) / (radius * radius);
      if (d2 < 1.0) use.emplace_back(v, (1.0 - d2) * (1.0 - d2));
    }
    if (use.empty()) return;
    // Besides the regular r^2 f terms the pinned layer leaves a defect
    // d + e dz, the homogeneous solution that is constant in r. It is fitted
    // and then discarded.
    const int cols = use.size() >= 5 ? 5 : use.size() >= 3 ? 3 : 1;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(use.size()), cols);
    Eigen::VectorXd b(static_cast<Eigen::Index>(use.size()));
    for (std::size_t i = 0; i < use.size(); ++i) {
      const Point q = mesh_.vertices[use[i].first];
      const double sw = std::sqrt(use[i].second);
      const double dz = q.z - p.z, r2 = q.r * q.r;
      const auto row = static_cast<Eigen::Index>(i);
      a(row, 0) = sw;
      if (cols >= 3) {
        a(row, 1) = sw * dz;
        a(row, 2) = sw * r2;
      }
      if (cols == 5) {
        a(row, 3) = sw / r2;
        a(row, 4) = sw * dz / r2;
      }
      b[row] = sw * psi_[use[i].first] / r2;
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    const double f0 = c[0], fz = cols >= 3 ? c[1] : 0.0, f2 = cols >= 3 ? c[2] : 0.0;
    // psi = r^2 (f0 + fz dz + f2 r^2) evaluated at dz = 0.
    s.x_r = -p.r * fz;
    s.x_z = 2.0 * f0 + 4.0 * f2 * p.r * p.r;
  }

 private:
  const TriMesh& mesh_;
  const Eigen::VectorXd& psi_;
  std::vector<char> special_, usable_;
  std::vector<std::vector<int>> incident_;
};

}  // namespace

std::vector<FieldSample> reconstruct(const GSProblem& problem, const Eigen::VectorXd& psi,
                                     double lambda, const std::vector<Point>& points,
                                     GradientMode mode) {
  const TriMesh& mesh = problem.mesh;
  if (psi.size() != static_cast<Eigen::Index>(mesh.num_vertices())) {
    throw InvalidInput("psi must hold one value per mesh vertex");
  }
  const PointLocator locator(mesh);
  const AxisFit near_axis(problem, psi);
  std::vector<std::array<double, 2>> nodal;
  if (mode == GradientMode::recovered) nodal = recovered_gradients(mesh, psi);

  std::vector<FieldSample> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    const auto hit = locator.locate(p);
    if (!hit) throw InvalidInput("sample point lies outside the mesh");
    const Triangle& T = mesh.triangles[hit->first];
    const auto& w = hit->second;
    FieldSample s;
    s.position = p;
    if (near_axis.in_zone(T)) {
      near_axis.sample(T, p, s);
      // r X_phi = lambda psi holds exactly for the discrete psi.
      if (p.r > kAxisTolerance) {
        double value = 0.0;
        for (int i = 0; i < 3; ++i) value += w[i] * psi[T[i]];
        s.x_phi = lambda * value / p.r;
      }
      out.push_back(s);
      continue;
    }
    double value = 0.0, gr = 0.0, gz = 0.0;
    if (mode == GradientMode::recovered) {
      for (int i = 0; i < 3; ++i) {
        value += w[i] * psi[T[i]];
        gr += w[i] * nodal[T[i]][0];
        gz += w[i] * nodal[T[i]][1];
      }
    } else {
      const ElementGradients e = gradients(mesh, T);
      for (int i = 0; i < 3; ++i) {
        value += w[i] * psi[T[i]];
        gr += psi[T[i]] * e.gr[i];
        gz += psi[T[i]] * e.gz[i];
      }
    }
    s.x_r = -gz / p.r;
    s.x_phi = lambda * value / p.r;
    s.x_z = gr / p.r;
    out.push_back(s);
  }
  return out;
}

std::vector<FieldSample> reconstruct(const GSProblem& problem, const EigenSolution& sol,
                                     const std::vector<Point>& points, GradientMode mode) {
  return reconstruct(problem, sol.psi, sol.lambda_plus, points, mode);
}

double rayleigh_quotient(const GSProblem& problem, const Eigen::VectorXd& psi_dofs) {
  if (psi_dofs.size() != problem.num_dofs()) throw InvalidInput("psi has the wrong size");
  if (problem.ell.size() > 0 &&
      std::abs(problem.ell.dot(psi_dofs)) > 1e-8 * problem.ell.norm() * psi_dofs.norm()) {
    throw InvalidInput("psi violates the flux constraint");
  }
  const double den = psi_dofs.dot(problem.M * psi_dofs);
  if (!(den > 0.0)) throw InvalidInput("Rayleigh quotient of a zero field");
  return psi_dofs.dot(problem.K * psi_dofs) / den;
}

}  // namespace beltrami

#include "beltrami/diagnose.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "beltrami/errors.hpp"

namespace beltrami {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Edges of the outer curve (axis pieces excluded), in boundary order.
std::vector<BoundaryEdge> outer_edges(const TriMesh& mesh) {
  std::vector<BoundaryEdge> out;
  for (const BoundaryRun& run : boundary_trace(mesh)) {
    if (run.kind != RunKind::outer) continue;
    out.insert(out.end(), run.edges.begin(), run.edges.end());
  }
  return out;
}

Point midpoint(const TriMesh& mesh, const BoundaryEdge& e) {
  const Point a = mesh.vertices[e.a], b = mesh.vertices[e.b];
  return {0.5 * (a.r + b.r), 0.5 * (a.z + b.z)};
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

double field_energy(const GSProblem& problem, const Eigen::VectorXd& psi, double lambda) {
  return kTwoPi *
         (psi.dot(problem.K_full * psi) + lambda * lambda * psi.dot(problem.M_full * psi));
}

ConstancyResult boundary_constancy(const GSProblem& problem, const Eigen::VectorXd& psi,
                                   double lambda) {
  if (max_abs(psi) == 0.0) throw InvalidInput("boundary constancy of a zero field");
  const TriMesh& mesh = problem.mesh;
  const std::vector<BoundaryEdge> edges = outer_edges(mesh);
  if (edges.empty()) throw InvalidInput("mesh has no outer boundary off the axis");

  std::vector<Point> pts;
  pts.reserve(edges.size());
  for (const BoundaryEdge& e : edges) pts.push_back(midpoint(mesh, e));
  const std::vector<FieldSample> xs = reconstruct(problem, psi, lambda, pts);

  ConstancyResult res;
  double s = 0.0, weighted = 0.0, total = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double v = xs[i].norm();
    res.boundary_speed.push_back({s + 0.5 * edges[i].length, pts[i], v});
    s += edges[i].length;
    weighted += v * edges[i].length;
    total += edges[i].length;
    res.boundary_max = std::max(res.boundary_max, v);
    lo = std::min(lo, v);
  }
  res.c_estimate = weighted / total;

  std::vector<Point> centroids;
  centroids.reserve(mesh.num_triangles());
  for (const Triangle& t : mesh.triangles) {
    Point c{0.0, 0.0};
    for (int v : t) {
      c.r += mesh.vertices[v].r / 3.0;
      c.z += mesh.vertices[v].z / 3.0;
    }
    centroids.push_back(c);
  }
  for (const FieldSample& x : reconstruct(problem, psi, lambda, centroids)) {
    res.interior_max = std::max(res.interior_max, x.norm());
  }
  if (!(res.boundary_max > 0.0)) {
    res.constancy_score = 1.0;
  } else {
    res.constancy_score = (res.boundary_max - lo) / res.boundary_max;
  }
  res.vanishing_warning = res.boundary_max <= 1e-10 * res.interior_max;

  const double energy = field_energy(problem, psi, lambda);
  if (energy > 0.0) {
    const double vol = revolved_volume(mesh);
    res.criticality_gap =
        std::abs(energy - 3.0 * res.c_estimate * res.c_estimate * vol) / energy;
  }
  return res;
}

ConstancyResult boundary_constancy(const GSProblem& problem, const EigenSolution& sol) {
  return boundary_constancy(problem, sol.psi, sol.lambda_plus);
}

Eigen::VectorXd boundary_normal_derivative(const GSProblem& problem, const Eigen::VectorXd& psi,
                                           double mu) {
  const TriMesh& mesh = problem.mesh;
  const Eigen::VectorXd q = problem.K_full * psi - mu * (problem.M_full * psi);
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(q.size());
  for (const BoundaryRun& run : boundary_trace(mesh)) {
    if (run.kind == RunKind::axis) continue;
    for (const BoundaryEdge& e : run.edges) {
      weight[e.a] += 0.5 * e.length;
      weight[e.b] += 0.5 * e.length;
    }
  }
  Eigen::VectorXd dn = Eigen::VectorXd::Zero(q.size());
  for (Eigen::Index v = 0; v < q.size(); ++v) {
    const double r = mesh.vertices[v].r;
    if (weight[v] > 0.0 && r > kAxisTolerance) dn[v] = r * q[v] / weight[v];
  }
  return dn;
}

RellichResult rellich_identity(const GSProblem& problem, const EigenSolution& sol,
                               double z_origin, MetricKind metric) {
  if (metric != MetricKind::euclidean) {
    throw Unsupported("the Rellich identity check is only available in Euclidean space");
  }
  const TriMesh& mesh = problem.mesh;
  const double lambda = sol.lambda_plus;
  const Eigen::VectorXd dn = boundary_normal_derivative(problem, sol.psi, sol.mu);

  RellichResult res;
  res.z_origin = z_origin;
  res.volume_side = field_energy(problem, sol.psi, lambda);

  const double g = 0.5 / std::sqrt(3.0);
  double boundary = 0.0;
  for (const BoundaryEdge& e : outer_edges(mesh)) {
    const Point a = mesh.vertices[e.a], b = mesh.vertices[e.b];
    for (double t : {0.5 - g, 0.5 + g}) {
      const double r = (1.0 - t) * a.r + t * b.r;
      const double z = (1.0 - t) * a.z + t * b.z;
      const double d = (1.0 - t) * dn[e.a] + t * dn[e.b];
      const double speed2 = (d * d + lambda * lambda * sol.c_b * sol.c_b) / (r * r);
      boundary += 0.5 * e.length * speed2 * (r * e.n_r + (z - z_origin) * e.n_z) * r;
    }
  }
  res.boundary_side = kTwoPi * boundary;
  const double scale = std::max(std::abs(res.volume_side), std::abs(res.boundary_side));
  res.residual = scale > 0.0 ? std::abs(res.volume_side - res.boundary_side) / scale : 0.0;
  return res;
}

GxrResult g_xr_constancy(const GSProblem& problem, const Eigen::VectorXd& psi, double lambda,
                         double c_b) {
  const TriMesh& mesh = problem.mesh;
  const std::vector<BoundaryEdge> edges = outer_edges(mesh);
  std::vector<Point> pts;
  pts.reserve(edges.size());
  for (const BoundaryEdge& e : edges) pts.push_back(midpoint(mesh, e));
  const std::vector<FieldSample> xs = reconstruct(problem, psi, lambda, pts);

  GxrResult res;
  res.c0 = problem.topology == Topology::torus_like ? lambda * c_b : 0.0;
  const double scale = std::abs(lambda) * max_abs(psi);
  double s = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double gxr = pts[i].r * xs[i].x_phi;
    res.g_xr_boundary.push_back({s + 0.5 * edges[i].length, pts[i], gxr});
    s += edges[i].length;
    worst = std::max(worst, std::abs(gxr - res.c0));
  }
  res.deviation = scale > 0.0 ? worst / scale : 0.0;
  return res;
}

GxrResult g_xr_constancy(const GSProblem& problem, const EigenSolution& sol) {
  return g_xr_constancy(problem, sol.psi, sol.lambda_plus, sol.c_b);
}

double flux_balance(const GSProblem& problem, const Eigen::VectorXd& psi, double mu) {
  if (problem.topology != Topology::torus_like) {
    throw InvalidInput("flux balance is defined for torus_like solutions only");
  }
  const TriMesh& mesh = problem.mesh;
  const double span = psi.maxCoeff() - psi.minCoeff();
  if (!(span > 1e-14 * max_abs(psi))) throw InvalidInput("flux balance of a constant psi");

  const Eigen::VectorXd q = problem.K_full * psi - mu * (problem.M_full * psi);
  double flux = 0.0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary(static_cast<int>(v))) flux += q[static_cast<Eigen::Index>(v)];
  }

  double grad_scale = 0.0;
  for (const Triangle& t : mesh.triangles) {
    const Point a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    const double twice = (b.r - a.r) * (c.z - a.z) - (b.z - a.z) * (c.r - a.r);
    const double gr = (psi[t[0]] * (b.z - c.z) + psi[t[1]] * (c.z - a.z) +
                       psi[t[2]] * (a.z - b.z)) / twice;
    const double gz = (psi[t[0]] * (c.r - b.r) + psi[t[1]] * (a.r - c.r) +
                       psi[t[2]] * (b.r - a.r)) / twice;
    const double rc = (a.r + b.r + c.r) / 3.0;
    grad_scale = std::max(grad_scale, std::hypot(gr, gz) / rc);
  }
  double perimeter = 0.0;
  for (const BoundaryRun& run : boundary_trace(mesh)) {
    if (run.kind != RunKind::axis) perimeter += run.length();
  }
  return flux / (grad_scale * perimeter);
}

double flux_balance(const GSProblem& problem, const EigenSolution& sol) {
  return flux_balance(problem, sol.psi, sol.mu);
}

DiagnosticsReport diagnose(const GSProblem& problem, const EigenSolution& sol,
                           const DiagnoseOptions& options) {
  DiagnosticsReport rep;
  rep.constancy = boundary_constancy(problem, sol);
  rep.rellich = rellich_identity(problem, sol, 0.0);
  rep.rellich_shifted = rellich_identity(problem, sol, options.z_shift);
  rep.g_xr = g_xr_constancy(problem, sol);
  if (problem.topology == Topology::torus_like) {
    rep.has_flux_balance = true;
    rep.flux_balance = flux_balance(problem, sol);
  }
  rep.volume = revolved_volume(problem.mesh);
  rep.objective = sol.lambda_plus * std::cbrt(rep.volume);
  return rep;
}

std::vector<SweepRow> sweep(const std::vector<SweepMember>& family, const SolverOptions& options,
                            bool volume_normalize, unsigned threads) {
  if (family.size() < 2) throw InvalidInput("a sweep needs at least two members");
  std::vector<SweepRow> rows(family.size());
  std::vector<std::exception_ptr> errors(family.size());

  auto run = [&](std::size_t i) {
    try {
      const SweepMember& m = family[i];
      const TriMesh mesh = triangulate(m.section, m.h);
      const GSProblem problem = assemble(mesh, detect_topology(mesh));
      const EigenSolution sol = solve_smallest(problem, options);
      SweepRow& row = rows[i];
      row.index = i;
      row.parameter = m.parameter;
      row.lambda_plus = sol.lambda_plus;
      row.volume = revolved_volume(mesh);
      row.objective = volume_normalize ? sol.lambda_plus * std::cbrt(row.volume)
                                       : sol.lambda_plus;
      row.iterations = sol.iterations;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(family.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < family.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < family.size(); i = next++) run(i);
      });
    }
    for (std::thread& th : pool) th.join();
  }

  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!errors[i]) continue;
    const std::string prefix = "sweep member " + std::to_string(i) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const NonConvergence& e) {
      throw NonConvergence(prefix + e.what(), e.residual());
    } catch (const Unsupported& e) {
      throw Unsupported(prefix + e.what());
    } catch (const InvalidInput& e) {
      throw InvalidInput(prefix + e.what());
    } catch (const std::exception& e) {
      throw Error(prefix + e.what());
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.parameter < b.parameter;
  });
  return rows;
}

}  // namespace beltrami

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace oracle {

double tan_root() {
  // f(x) = sin x - x cos x has a single sign change on (pi, 3 pi / 2).
  auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
  double lo = std::numbers::pi, hi = 1.5 * std::numbers::pi;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((f(mid) > 0) == (f(lo) > 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double sph_j1(double x) {
  if (std::abs(x) < 1e-4) return x / 3.0 - x * x * x / 30.0;
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

double sph_j1_prime(double x) {
  if (std::abs(x) < 1e-4) return 1.0 / 3.0 - x * x / 10.0;
  // j1' = j0 - 2 j1 / x
  return std::sin(x) / x - 2.0 * sph_j1(x) / x;
}

double spheromak_psi(double r, double z) {
  const double rho = std::hypot(r, z);
  if (rho == 0.0) return 0.0;
  const double s = r / rho;
  return rho * s * s * sph_j1(tan_root() * rho);
}

double spheromak_boundary_speed(double theta) { return std::abs(std::sin(theta)); }

FdResult fd_torus_lambda(double c, double a, double b, double step) {
  if (!(c > a) || !(step > 0)) throw std::invalid_argument("fd_torus_lambda: bad geometry");
  auto level = [&](double r, double z) {
    const double u = (r - c) / a, v = z / b;
    return u * u + v * v - 1.0;
  };
  auto inside = [&](double r, double z) { return level(r, z) < 0.0; };

  const int ni = static_cast<int>(std::ceil(a / step)) + 1;
  const int nj = static_cast<int>(std::ceil(b / step)) + 1;
  const int wi = 2 * ni + 1;
  auto node_r = [&](int i) { return c + (i - ni) * step; };
  auto node_z = [&](int j) { return (j - nj) * step; };

  std::vector<int> id(static_cast<std::size_t>(wi) * (2 * nj + 1), -1);
  std::vector<std::pair<int, int>> nodes;
  for (int j = 0; j <= 2 * nj; ++j) {
    for (int i = 0; i < wi; ++i) {
      if (inside(node_r(i), node_z(j))) {
        id[static_cast<std::size_t>(j) * wi + i] = static_cast<int>(nodes.size());
        nodes.emplace_back(i, j);
      }
    }
  }
  const int n = static_cast<int>(nodes.size());
  const int cb = n;  // shared boundary value
  auto at = [&](int i, int j) {
    if (i < 0 || i >= wi || j < 0 || j > 2 * nj) return -1;
    return id[static_cast<std::size_t>(j) * wi + i];
  };

  // Distance from (r, z) to the boundary along +-r or +-z.
  auto arm_r = [&](double r, double z, int dir) {
    const double t = std::sqrt(std::max(0.0, 1.0 - (z / b) * (z / b)));
    return dir > 0 ? c + a * t - r : r - (c - a * t);
  };
  auto arm_z = [&](double r, double z, int dir) {
    const double u = (r - c) / a;
    const double t = b * std::sqrt(std::max(0.0, 1.0 - u * u));
    return dir > 0 ? t - z : z + t;
  };

  std::vector<Eigen::Triplet<double>> trip;
  for (int p = 0; p < n; ++p) {
    const auto [i, j] = nodes[p];
    const double r = node_r(i), z = node_z(j);
    double diag = 0.0;
    // r direction: psi_rr - psi_r / r.
    {
      const int L = at(i - 1, j), R = at(i + 1, j);
      const double hl = L >= 0 ? step : std::max(arm_r(r, z, -1), 1e-12 * step);
      const double hr = R >= 0 ? step : std::max(arm_r(r, z, +1), 1e-12 * step);
      const double cl = 2.0 / (hl * (hl + hr)), cr = 2.0 / (hr * (hl + hr)), c0 = -2.0 / (hl * hr);
      const double dl = -hr / (hl * (hl + hr)), dr = hl / (hr * (hl + hr)),
                   d0 = (hr - hl) / (hl * hr);
      trip.emplace_back(p, L >= 0 ? L : cb, -(cl - dl / r));
      trip.emplace_back(p, R >= 0 ? R : cb, -(cr - dr / r));
      diag += -(c0 - d0 / r);
    }
    {
      const int D = at(i, j - 1), U = at(i, j + 1);
      const double hd = D >= 0 ? step : std::max(arm_z(r, z, -1), 1e-12 * step);
      const double hu = U >= 0 ? step : std::max(arm_z(r, z, +1), 1e-12 * step);
      trip.emplace_back(p, D >= 0 ? D : cb, -2.0 / (hd * (hd + hu)));
      trip.emplace_back(p, U >= 0 ? U : cb, -2.0 / (hu * (hd + hu)));
      diag += 2.0 / (hd * hu);
    }
    trip.emplace_back(p, p, diag);
  }

  // Constraint row: int psi / r dA with psi taken piecewise constant on the
  // node cells and equal to the boundary value on the leftover strip.
  const double total = 2.0 * std::numbers::pi * (b / a) * (c - std::sqrt(c * c - a * a));
  double covered = 0.0;
  const int m = 64;
  for (int p = 0; p < n; ++p) {
    const auto [i, j] = nodes[p];
    const double r = node_r(i), z = node_z(j), hs = 0.5 * step;
    double w = 0.0;
    if (inside(r - hs, z - hs) && inside(r + hs, z - hs) && inside(r - hs, z + hs) &&
        inside(r + hs, z + hs)) {
      w = step * std::log((r + hs) / (r - hs));
    } else {
      const double ds = step / m;
      for (int a1 = 0; a1 < m; ++a1) {
        for (int b1 = 0; b1 < m; ++b1) {
          const double rr = r - hs + (a1 + 0.5) * ds, zz = z - hs + (b1 + 0.5) * ds;
          if (inside(rr, zz)) w += ds * ds / rr;
        }
      }
    }
    covered += w;
    trip.emplace_back(cb, p, w);
  }
  trip.emplace_back(cb, cb, total - covered);

  Eigen::SparseMatrix<double> A(n + 1, n + 1);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("fd_torus_lambda: factorisation failed");

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n + 1);
  x[cb] = 0.0;
  double mu = 0.0;
  FdResult res;
  res.unknowns = n + 1;
  for (int it = 1; it <= 1000; ++it) {
    Eigen::VectorXd bx = x;
    bx[cb] = 0.0;
    Eigen::VectorXd y = lu.solve(bx);
    Eigen::VectorXd by = y;
    by[cb] = 0.0;
    const double next = bx.squaredNorm() / bx.dot(by);
    x = y / y.norm();
    res.iterations = it;
    if (it > 3 && std::abs(next - mu) <= 1e-14 * std::abs(next)) {
      mu = next;
      break;
    }
    mu = next;
  }
  res.lambda = std::sqrt(mu);
  return res;
}

std::array<double, 3> fd_curl(const CylField& x, double r, double z, double d) {
  // d/dr and d/dz of each component, fourth order.
  auto ddr = [&](int comp, double rr, double zz, bool weight_r) {
    auto f = [&](double s) {
      const double v = x(s, zz)[comp];
      return weight_r ? s * v : v;
    };
    auto c2 = [&](double h) { return (f(rr + h) - f(rr - h)) / (2.0 * h); };
    return (4.0 * c2(0.5 * d) - c2(d)) / 3.0;
  };
  auto ddz = [&](int comp, double rr, double zz) {
    auto f = [&](double s) { return x(rr, s)[comp]; };
    auto c2 = [&](double h) { return (f(zz + h) - f(zz - h)) / (2.0 * h); };
    return (4.0 * c2(0.5 * d) - c2(d)) / 3.0;
  };
  return {-ddz(1, r, z), ddz(0, r, z) - ddr(2, r, z, false), ddr(1, r, z, true) / r};
}

double richardson(double coarse, double fine, double order) {
  const double f = std::pow(2.0, order);
  return (f * fine - coarse) / (f - 1.0);
}

}  // namespace oracle

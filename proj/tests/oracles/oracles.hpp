#pragma once

// Reference values computed without the finite-element machinery.

#include <array>
#include <functional>
#include <vector>

namespace oracle {

// Smallest positive root of tan x = x, by bisection on (pi, 3 pi / 2).
double tan_root();

// Spherical Bessel j1 and its derivative.
double sph_j1(double x);
double sph_j1_prime(double x);

// Stream function of the unit-ball spheromak: psi = rho sin^2(theta) j1(k rho)
// with k = tan_root(), written in (r, z).
double spheromak_psi(double r, double z);
// |X| on the unit sphere at polar angle theta, normalised to 1 at the equator.
double spheromak_boundary_speed(double theta);

// Five-point finite differences on a Cartesian grid of spacing `step` for
//   -(psi_rr - psi_r / r + psi_zz) = mu psi
// on the ellipse ((r - c) / a)^2 + (z / b)^2 < 1 with psi equal to an unknown
// constant on the boundary and int psi / r dA = 0. Boundary neighbours use
// Shortley-Weller arms. Returns sqrt(mu) of the smallest eigenvalue.
struct FdResult {
  double lambda = 0.0;
  int unknowns = 0;
  int iterations = 0;
};
FdResult fd_torus_lambda(double c, double a, double b, double step);

// Axisymmetric cylindrical curl of a field sampler (X_r, X_phi, X_z)(r, z)
// by fourth-order Richardson central differences with step d.
using CylField = std::function<std::array<double, 3>(double r, double z)>;
std::array<double, 3> fd_curl(const CylField& x, double r, double z, double d);

// Richardson extrapolation for a second-order sequence on h, h/2.
double richardson(double coarse, double fine, double order = 2.0);

}  // namespace oracle

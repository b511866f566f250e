#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"

TEST(Oracle, TanRoot) {
  const double k = oracle::tan_root();
  EXPECT_NEAR(k, 4.493409457909064, 1e-14);
  EXPECT_NEAR(std::tan(k), k, 1e-9);
}

TEST(Oracle, SphericalBessel) {
  EXPECT_NEAR(oracle::sph_j1(1.0), std::sin(1.0) - std::cos(1.0), 1e-15);
  EXPECT_NEAR(oracle::sph_j1(1e-6), 1e-6 / 3, 1e-18);
  const double x = 2.3, d = 1e-5;
  EXPECT_NEAR(oracle::sph_j1_prime(x), (oracle::sph_j1(x + d) - oracle::sph_j1(x - d)) / (2 * d),
              1e-9);
}

TEST(Oracle, SpheromakVanishesOnSphereAndAxis) {
  for (int i = 0; i <= 20; ++i) {
    const double t = std::numbers::pi * i / 20;
    EXPECT_NEAR(oracle::spheromak_psi(std::sin(t), std::cos(t)), 0.0, 1e-14);
  }
  EXPECT_EQ(oracle::spheromak_psi(0.0, 0.4), 0.0);
  EXPECT_GT(oracle::spheromak_psi(0.5, 0.0), 0.0);
  EXPECT_NEAR(oracle::spheromak_boundary_speed(std::numbers::pi / 2), 1.0, 1e-15);
}

// Spheromak psi solves the Grad-Shafranov equation with mu = k^2.
TEST(Oracle, SpheromakSolvesGradShafranov) {
  const double k = oracle::tan_root(), d = 1e-4;
  for (auto [r, z] : {std::pair{0.3, 0.1}, {0.6, -0.4}, {0.2, 0.7}}) {
    auto p = [](double a, double b) { return oracle::spheromak_psi(a, b); };
    const double prr = (p(r + d, z) - 2 * p(r, z) + p(r - d, z)) / (d * d);
    const double pzz = (p(r, z + d) - 2 * p(r, z) + p(r, z - d)) / (d * d);
    const double pr = (p(r + d, z) - p(r - d, z)) / (2 * d);
    EXPECT_NEAR(-(prr - pr / r + pzz), k * k * p(r, z), 1e-5);
  }
}

TEST(Oracle, FdCurlOfKnownField) {
  // X = (0, r, 0) is r e_phi: curl = (0, 0, 2).
  const auto c = oracle::fd_curl([](double r, double) { return std::array<double, 3>{0, r, 0}; },
                                 0.7, 0.2, 0.05);
  EXPECT_NEAR(c[0], 0.0, 1e-12);
  EXPECT_NEAR(c[1], 0.0, 1e-12);
  EXPECT_NEAR(c[2], 2.0, 1e-10);
  // X = (z^2, 0, r^3): curl_phi = 2 z - 3 r^2.
  const auto d = oracle::fd_curl(
      [](double r, double z) { return std::array<double, 3>{z * z, 0, r * r * r}; }, 0.5, 0.3, 0.05);
  EXPECT_NEAR(d[1], 2 * 0.3 - 3 * 0.25, 1e-10);
}

TEST(Oracle, Richardson) {
  // f(h) = 1 + h^2 is reproduced exactly.
  EXPECT_NEAR(oracle::richardson(1 + 0.04, 1 + 0.01), 1.0, 1e-15);
  EXPECT_NEAR(oracle::richardson(1 + 0.2, 1 + 0.1, 1.0), 1.0, 1e-15);
}

TEST(Oracle, FdTorusConvergesSecondOrder) {
  const double l1 = oracle::fd_torus_lambda(2, 0.5, 0.5, 0.02).lambda;
  const double l2 = oracle::fd_torus_lambda(2, 0.5, 0.5, 0.01).lambda;
  const double l3 = oracle::fd_torus_lambda(2, 0.5, 0.5, 0.005).lambda;
  const double order = std::log2(std::abs(l2 - l1) / std::abs(l3 - l2));
  EXPECT_GT(order, 1.7);
  EXPECT_NEAR(l3, 7.4879, 1e-3);
}

TEST(Oracle, FdTorusScalesInverselyWithSize) {
  const double l1 = oracle::fd_torus_lambda(2, 0.5, 0.5, 0.02).lambda;
  const double l2 = oracle::fd_torus_lambda(4, 1.0, 1.0, 0.04).lambda;
  EXPECT_NEAR(2 * l2, l1, 1e-8 * l1);
}

#include "jacobi/error.hpp"
#include "jacobi/flow.hpp"
#include "jacobi/linalg.hpp"
#include "jacobi/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace jacobi;

namespace {

Matrix rotation_flow(int m, double t) {
  Matrix phi(2 * m, 2 * m);
  const Matrix i = Matrix::Identity(m, m);
  phi << std::cos(t) * i, std::sin(t) * i, -std::sin(t) * i, std::cos(t) * i;
  return phi;
}

}  // namespace

TEST(Flow, OmegaIsTheSymplecticPairing) {
  const PhaseVector p(Vector::Unit(2, 0), Vector::Zero(2));
  const PhaseVector q(Vector::Zero(2), Vector::Unit(2, 0));
  EXPECT_DOUBLE_EQ(omega(p, q), 1.0);
  EXPECT_DOUBLE_EQ(omega(q, p), -1.0);
  EXPECT_DOUBLE_EQ(omega(p.stacked(), q.stacked()), 1.0);
  EXPECT_THROW(omega(Vector::Zero(3), Vector::Zero(3)), InvalidArgument);
}

TEST(Flow, UnitSphereFlowIsRotation) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {-1.0, 12.0});
  const auto sol = integrate(f, 0.0, f.domain());
  for (double t : {-1.0, 0.5, std::numbers::pi, 7.0, 12.0})
    EXPECT_LT((sol.transfer(t) - rotation_flow(2, t)).norm(), 1e-8) << "t=" << t;
  EXPECT_LE(sol.symplectic_defect(), 1e-9);
}

TEST(Flow, FlatFlowIsShear) {
  const auto f = CurvatureFamily::constant(Matrix::Zero(1, 1), {0.0, 50.0});
  const auto sol = integrate(f, 0.0, f.domain());
  Matrix expect(2, 2);
  expect << 1.0, 50.0, 0.0, 1.0;
  EXPECT_LT((sol.transfer(50.0) - expect).norm(), 1e-9);
}

TEST(Flow, HyperbolicCoshRelativeError) {
  const auto f = CurvatureFamily::constant(-Matrix::Identity(1, 1), {0.0, 20.0});
  const auto sol = integrate(f, 0.0, f.domain());
  for (double t : {1.0, 5.0, 10.0, 20.0}) {
    const Matrix phi = sol.transfer(t);
    EXPECT_LT(std::abs(phi(0, 0) / std::cosh(t) - 1.0), 1e-8) << "t=" << t;
    EXPECT_LT(std::abs(phi(0, 1) / std::sinh(t) - 1.0), 1e-8) << "t=" << t;
  }
  EXPECT_LE(sol.symplectic_defect(), 1e-9);
}

TEST(Flow, DenseOutputBetweenNodes) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 3.0});
  const auto sol = integrate(f, 0.0, f.domain());
  const auto& g = sol.grid();
  ASSERT_GE(g.size(), 3u);
  const double mid = 0.5 * (g[1] + g[2]);
  EXPECT_LT((sol.transfer(mid) - rotation_flow(1, mid)).norm(), 1e-8);
  EXPECT_THROW(sol.transfer(3.5), DomainError);
}

TEST(Flow, AnchorInsideIntervalRequired) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 3.0});
  EXPECT_THROW(integrate(f, 5.0, {0.0, 3.0}), InvalidArgument);
  EXPECT_THROW(integrate(f, 0.0, {0.0, 4.0}), DomainError);
}

TEST(Flow, OmegaConstantAlongRandomFlows) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto f = random_family({.m = 3, .domain = {-3.0, 3.0}}, seed);
    const auto sol = integrate(f, 0.0, f.domain());
    Vector p(6), q(6);
    for (int i = 0; i < 6; ++i) p(i) = g(rng), q(i) = g(rng);
    const double w0 = omega(p, q);
    for (double t : {-3.0, -1.0, 2.0, 3.0}) {
      const Matrix phi = sol.transfer(t);
      const double scale = (phi * p).norm() * (phi * q).norm();
      EXPECT_LT(std::abs(omega(Vector(phi * p), Vector(phi * q)) - w0) / std::max(1.0, scale), 1e-9);
    }
    EXPECT_LE(sol.symplectic_defect(), 1e-9);
  }
}

TEST(Flow, TransferBetweenComposes) {
  const auto f = random_family({.m = 2, .domain = {-2.0, 2.0}}, 3);
  const auto sol = integrate(f, 0.0, f.domain());
  const Matrix lhs = sol.transfer_between(-1.0, 1.5) * sol.transfer(-1.0);
  EXPECT_LT((lhs - sol.transfer(1.5)).norm(), 1e-8);
}

TEST(Flow, SymplecticCorrectionRestoresGroup) {
  Matrix phi = rotation_flow(2, 0.7);
  phi(0, 0) += 1e-6;
  EXPECT_GT(symplectic_defect(phi), 1e-7);
  EXPECT_LT(symplectic_defect(symplectic_correction(phi)), 1e-13);
}

TEST(Flow, HamiltonianMatrixBlocks) {
  const auto f = CurvatureFamily::constant(2.0 * Matrix::Identity(1, 1), {0.0, 1.0});
  Matrix expect(2, 2);
  expect << 0.0, 1.0, -2.0, 0.0;
  EXPECT_EQ(hamiltonian_matrix(f, 0.5), expect);
  EXPECT_EQ(linalg::symplectic_unit(1), (Matrix(2, 2) << 0.0, 1.0, -1.0, 0.0).finished());
}

#include "jacobi/error.hpp"
#include "jacobi/maslov.hpp"
#include "jacobi/scenarios.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

using namespace jacobi;

constexpr double pi = std::numbers::pi;

TEST(Maslov, SphereLambda0CrossingsMatchIndex) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {-1.0, 12.0});
  const auto l = JacobiSubspace::vanishing_at(2, 0.0);
  const Interval iv{0.1, 3.2 * pi};
  const auto sol = integrate_for(l, f, iv);
  const MaslovResult r = maslov_index(l, sol, iv);
  EXPECT_EQ(r.index, 6);
  ASSERT_EQ(r.crossings.size(), 3u);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(r.crossings[j].time, (j + 1) * pi, 1e-6);
    EXPECT_EQ(r.crossings[j].intersection_dim, 2);
    for (double e : r.crossings[j].eigenvalues) EXPECT_GT(e, 1e-6);
  }
  EXPECT_EQ(winding_index(l, sol, iv), 6);
}

TEST(Maslov, CrossingFormIsPositiveOnJacobiFlow) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {-1.0, 4.0});
  const auto l = JacobiSubspace::vanishing_at(1, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 4.0});
  const Matrix b = crossing_form(l, sol, pi);
  ASSERT_EQ(b.rows(), 1);
  EXPECT_GT(b(0, 0), 0.0);
  EXPECT_THROW(crossing_form(l, sol, 1.0), PreconditionError);
}

TEST(Maslov, FocalEndpointRejected) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {-1.0, 4.0});
  const auto l = JacobiSubspace::vanishing_at(1, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 4.0});
  EXPECT_THROW(maslov_index(l, sol, {0.0, 4.0}), PreconditionError);
}

TEST(Maslov, RequiresLagrangian) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {0.0, 4.0});
  const auto w = random_isotropic(2, 1, 3, 0.0);
  EXPECT_THROW(maslov_index(w, integrate_for(w, f, {0.5, 4.0}), {0.5, 4.0}), PreconditionError);
}

TEST(Maslov, NoCrossingsInFlatSpace) {
  const auto f = CurvatureFamily::constant(Matrix::Zero(2, 2), {-1.0, 30.0});
  const auto l = JacobiSubspace::vanishing_at(2, 0.0);
  const auto sol = integrate_for(l, f, {0.5, 30.0});
  EXPECT_EQ(maslov_index(l, sol, {0.5, 30.0}).index, 0);
  EXPECT_EQ(winding_index(l, sol, {0.5, 30.0}), 0);
}

TEST(Maslov, RandomLagrangiansAgreeWithIndexAndWinding) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int m = 1 + int(seed % 3);
    const auto f = random_family({.m = m, .shift = 1.0}, seed);
    const auto l = random_lagrangian(m, seed + 50, 0.0);
    const Interval iv{0.013, 5.987};
    const auto sol = integrate_for(l, f, iv);
    if (focal_index(l, sol, iv.lo) != 0 || focal_index(l, sol, iv.hi) != 0) continue;
    const MaslovResult r = maslov_index(l, sol, iv);
    EXPECT_EQ(r.index, index(l, sol, iv)) << seed;
    EXPECT_EQ(r.index, winding_index(l, sol, iv)) << seed;
    ++checked;
  }
  EXPECT_GE(checked, 4);
}

#include "jacobi/error.hpp"
#include "jacobi/focal.hpp"
#include "jacobi/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace jacobi;

constexpr double pi = std::numbers::pi;

TEST(Focal, SphereLambda0EventsAtMultiplesOfPi) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {-1.0, 12.0});
  const auto l = JacobiSubspace::vanishing_at(2, 0.0);
  const Interval iv{0.1, 3.2 * pi};
  const auto sol = integrate_for(l, f, iv);
  const IndexReport r = locate_focal_points(l, sol, iv);
  ASSERT_EQ(r.events.size(), 3u);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(r.events[j].time, (j + 1) * pi, 1e-6);
    EXPECT_EQ(r.events[j].multiplicity, 2);
    EXPECT_EQ(r.events[j].kernel_basis.cols(), 2);
    EXPECT_LE(r.events[j].localization_radius, 1e-6);
  }
  EXPECT_EQ(r.total, 6);
  EXPECT_EQ(r.focal_at_lo, 0);
  EXPECT_EQ(r.open_total(), 6);
}

TEST(Focal, ClosedIntervalCountsEndpoints) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {-1.0, 8.0});
  const auto l = JacobiSubspace::vanishing_at(1, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 2 * pi});
  const IndexReport r = locate_focal_points(l, sol, {0.0, 2 * pi});
  EXPECT_EQ(r.total, 3);
  EXPECT_EQ(r.focal_at_lo, 1);
  EXPECT_EQ(r.focal_at_hi, 1);
  EXPECT_EQ(r.open_total(), 1);
}

TEST(Focal, FlatAndHyperbolicHaveNoEventsAwayFromAnchor) {
  for (double kappa : {0.0, -1.0}) {
    const auto f = CurvatureFamily::constant(kappa * Matrix::Identity(3, 3), {-1.0, 20.0});
    const auto l = JacobiSubspace::vanishing_at(3, 0.0);
    const auto sol = integrate_for(l, f, {0.5, 20.0});
    EXPECT_EQ(index(l, sol, {0.5, 20.0}), 0) << kappa;
    const auto p = JacobiSubspace::parallel_at(3, 0.0);
    EXPECT_EQ(index(p, integrate_for(p, f, {0.0, 20.0}), {0.0, 20.0}), 0);
  }
}

TEST(Focal, ParallelFieldsOnSphereVanishAtHalfPi) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {-1.0, 12.0});
  const auto p = JacobiSubspace::parallel_at(2, 0.0);
  const auto sol = integrate_for(p, f, {0.0, 5.0});
  const IndexReport r = locate_focal_points(p, sol, {0.0, 5.0});
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_NEAR(r.events[0].time, pi / 2, 1e-6);
  EXPECT_NEAR(r.events[1].time, 3 * pi / 2, 1e-6);
  EXPECT_EQ(r.total, 4);
}

TEST(Focal, ZeroAndEmptySubspaces) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {0.0, 10.0});
  const auto z = JacobiSubspace::zero(2, 0.0);
  EXPECT_EQ(z.rank(), 0);
  EXPECT_EQ(index(z, integrate_for(z, f, {0.0, 10.0}), {0.0, 10.0}), 0);
}

TEST(Focal, DegenerateIntervalIsSinglePoint) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 4.0});
  const auto l = JacobiSubspace::vanishing_at(1, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 4.0});
  EXPECT_EQ(index(l, sol, {pi, pi}), 1);
  EXPECT_EQ(index(l, sol, {1.0, 1.0}), 0);
  EXPECT_THROW(index(l, sol, {2.0, 1.0}), InvalidArgument);
  EXPECT_THROW(index(l, sol, {0.0, 5.0}), DomainError);
}

TEST(Focal, IndexIsFrameInvariant) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto f = random_family({.m = 3}, seed);
    const auto l = random_lagrangian(3, seed + 100, 0.0);
    const auto sol = integrate_for(l, f, {0.0, 6.0});
    Matrix mix = Matrix::Identity(3, 3);
    mix(0, 1) = 2.5;
    mix(2, 0) = -1.5;
    const JacobiSubspace l2(0.0, l.frame() * mix, SubspaceClass::Lagrangian);
    EXPECT_EQ(index(l, sol, {0.0, 6.0}), index(l2, sol, {0.0, 6.0})) << seed;
  }
}

TEST(Focal, AdditiveOverSplitIntervals) {
  const auto f = random_family({.m = 2, .shift = 1.0}, 8);
  const auto l = random_lagrangian(2, 3, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 8.0});
  const IndexReport whole = locate_focal_points(l, sol, {0.0, 8.0});
  const double cut = 4.123456;
  const int left = index(l, sol, {0.0, cut});
  const int right = index(l, sol, {cut, 8.0});
  EXPECT_EQ(left + right - index(l, sol, {cut, cut}), whole.total);
}

TEST(Focal, DeterministicReports) {
  const auto f = random_family({.m = 3}, 77);
  const auto l = random_lagrangian(3, 78, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 6.0});
  const auto a = locate_focal_points(l, sol, {0.0, 6.0});
  const auto b = locate_focal_points(l, sol, {0.0, 6.0});
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) EXPECT_EQ(a.events[i].time, b.events[i].time);
}

TEST(Focal, ClusterBoundWithinGap) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {0.0, 10.0});
  const auto l = JacobiSubspace::vanishing_at(2, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 10.0});
  EXPECT_TRUE(cluster_index_bound_check(l, sol, {pi - 0.2, pi + 0.2}));
  EXPECT_THROW(cluster_index_bound_check(l, sol, {0.0, 4.0}), PreconditionError);
}

TEST(Focal, NonIsotropicRejected) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 1.0});
  const JacobiSubspace g(0.0, Matrix::Identity(2, 2), SubspaceClass::General);
  EXPECT_THROW(locate_focal_points(g, integrate_for(g, f, {0.0, 1.0}), {0.0, 1.0}), PreconditionError);
}

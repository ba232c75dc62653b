#include "jacobi/error.hpp"
#include "jacobi/focal.hpp"
#include "jacobi/linalg.hpp"
#include "jacobi/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace jacobi;

constexpr double pi = std::numbers::pi;

TEST(Subspace, VanishingFrameIsLagrangian) {
  const auto l = JacobiSubspace::vanishing_at(3, 0.0);
  EXPECT_EQ(l.rank(), 3);
  EXPECT_EQ(l.phase_dim(), 3);
  EXPECT_TRUE(l.is_lagrangian());
  EXPECT_EQ(l.isotropy_defect(), 0.0);
}

TEST(Subspace, RejectsBadFrames) {
  Matrix f(4, 2);
  f << 1, 0, 0, 1, 0, 1, 0, 0;  // omega(c0, c1) = 1: not isotropic
  EXPECT_THROW(JacobiSubspace(0.0, f, SubspaceClass::Isotropic), PreconditionError);
  EXPECT_NO_THROW(JacobiSubspace(0.0, f, SubspaceClass::General));
  Matrix deficient(4, 2);
  deficient << 1, 2, 0, 0, 0, 0, 0, 0;
  EXPECT_THROW(JacobiSubspace(0.0, deficient, SubspaceClass::General), PreconditionError);
  EXPECT_THROW(JacobiSubspace(0.0, Matrix::Zero(3, 1), SubspaceClass::General), InvalidArgument);
  EXPECT_THROW(JacobiSubspace(0.0, Matrix::Identity(4, 1), SubspaceClass::Lagrangian), PreconditionError);
}

TEST(Subspace, SmallDefectIsCorrected) {
  Matrix f = JacobiSubspace::vanishing_at(2, 0.0).frame();
  f(0, 0) = 5e-8;
  f(0, 1) = -2e-8;
  const JacobiSubspace l(0.0, f, SubspaceClass::Lagrangian);
  EXPECT_LE(l.isotropy_defect(), 1e-8);
}

TEST(Subspace, ClassNamesRoundTrip) {
  for (auto c : {SubspaceClass::General, SubspaceClass::Isotropic, SubspaceClass::Lagrangian})
    EXPECT_EQ(subspace_class_from_string(to_string(c)), c);
  EXPECT_THROW(subspace_class_from_string("symplectic"), InvalidArgument);
}

TEST(Subspace, RandomIsotropicHasZeroOmegaGram) {
  for (int m = 1; m <= 4; ++m)
    for (int k = 0; k <= m; ++k) {
      const auto w = random_isotropic(m, k, 17 * m + k, 0.3);
      EXPECT_EQ(w.rank(), k);
      EXPECT_LE(w.isotropy_defect(), 1e-12);
    }
  const auto l = random_lagrangian(3, 4, 0.0);
  EXPECT_TRUE(l.is_lagrangian());
  EXPECT_LE(l.isotropy_defect(), 1e-12);
}

TEST(Subspace, ExtendToLagrangianContainsW) {
  std::mt19937_64 rng(3);
  const auto w = random_isotropic(4, 2, 8, 0.0);
  const auto l = extend_to_lagrangian(w, rng);
  EXPECT_TRUE(l.is_lagrangian());
  EXPECT_LT(containment_residual(l, w), 1e-10);
  EXPECT_EQ(intersection_dimension(l, w), 2);
}

TEST(Subspace, OmegaComplementDimension) {
  const auto w = random_isotropic(3, 1, 2, 0.0);
  const auto c = omega_complement(w);
  EXPECT_EQ(c.rank(), 5);
  EXPECT_LT(linalg::omega_gram(Matrix(w.frame())).norm(), 1e-12);
  const Matrix cross = w.frame().transpose() * linalg::symplectic_unit(3) * c.frame();
  EXPECT_LT(cross.norm(), 1e-10);
}

TEST(Subspace, IntersectionDimension) {
  const auto v = JacobiSubspace::vanishing_at(2, 0.0);
  const auto p = JacobiSubspace::parallel_at(2, 0.0);
  EXPECT_EQ(intersection_dimension(v, p), 0);
  EXPECT_EQ(intersection_dimension(v, v), 2);
  Matrix f(4, 2);
  f << 1, 0, 0, 0, 0, 0, 0, 1;
  EXPECT_EQ(intersection_dimension(v, JacobiSubspace(0.0, f, SubspaceClass::Lagrangian)), 1);
}

TEST(Subspace, FocalIndexOfSphereLambda0) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {-1.0, 10.0});
  const auto l = JacobiSubspace::vanishing_at(2, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 10.0});
  EXPECT_EQ(focal_index(l, sol, 0.0), 2);
  EXPECT_EQ(focal_index(l, sol, pi), 2);
  EXPECT_EQ(focal_index(l, sol, 1.0), 0);
}

TEST(Subspace, FocalIndexIsFrameInvariant) {
  const auto f = random_family({.m = 3}, 21);
  const auto w = random_lagrangian(3, 9, 0.0);
  const auto sol = integrate_for(w, f, {0.0, 6.0});
  Matrix mix = Matrix::Random(3, 3) + 3.0 * Matrix::Identity(3, 3);
  const JacobiSubspace w2(0.0, w.frame() * mix, SubspaceClass::Lagrangian);
  for (double t = 0.05; t < 6.0; t += 0.37) EXPECT_EQ(focal_index(w, sol, t), focal_index(w2, sol, t)) << t;
}

TEST(Subspace, SProductAndGap) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 2.0});
  const auto l = JacobiSubspace::vanishing_at(1, 0.0);
  const auto sol = integrate_for(l, f, {0.0, 2.0});
  EXPECT_NEAR(s_product(l, sol, 1.0, 0, 0), 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(min_focal_gap(2.0), 0.25);
  EXPECT_THROW(min_focal_gap(-1.0), InvalidArgument);
}

TEST(Subspace, ReanchoredIsSameSubspace) {
  const auto f = random_family({.m = 2}, 4);
  const auto w = random_lagrangian(2, 4, 0.0);
  const auto sol = integrate_for(w, f, {0.0, 3.0});
  const auto w1 = w.reanchored(sol, 2.0);
  EXPECT_DOUBLE_EQ(w1.anchor(), 2.0);
  const auto sol1 = integrate_for(w1, f, {0.0, 3.0});
  for (double t : {0.5, 1.7, 2.9})
    EXPECT_LT(linalg::grassmann_distance(phase_evaluation(w, sol, t), phase_evaluation(w1, sol1, t)), 1e-7);
}

TEST(Linalg, BasicsAgreeWithDefinitions) {
  Matrix a(3, 2);
  a << 1, 0, 0, 1, 0, 0;
  EXPECT_EQ(linalg::numerical_rank(a, 1e-12), 2);
  const Matrix c = linalg::orthogonal_complement(a);
  EXPECT_EQ(c.cols(), 1);
  EXPECT_LT((a.transpose() * c).norm(), 1e-14);
  EXPECT_LT(linalg::grassmann_distance(a, a * Matrix::Random(2, 2).cwiseAbs()), 1e-12);
  const Matrix p = linalg::polar_factor(2.0 * a);
  EXPECT_LT((p.transpose() * p - Matrix::Identity(2, 2)).norm(), 1e-14);
}

#include "jacobi/curvature.hpp"
#include "jacobi/error.hpp"
#include "jacobi/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace jacobi;

TEST(Curvature, ConstantEvaluatesAndSymmetrizes) {
  Matrix a(2, 2);
  a << 1.0, 2.0, 0.0, 3.0;
  const auto f = CurvatureFamily::constant(a, {0.0, 1.0});
  const Matrix r = f(0.5);
  EXPECT_EQ(r, r.transpose());
  EXPECT_DOUBLE_EQ(r(0, 1), 1.0);
  EXPECT_EQ(f.dim(), 2);
  EXPECT_EQ(f.kind(), CurvatureKind::Constant);
}

TEST(Curvature, OutsideDomainThrows) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 1.0});
  EXPECT_THROW(f(1.5), DomainError);
  EXPECT_THROW(f(-0.5), DomainError);
}

TEST(Curvature, RejectsMalformedInputs) {
  EXPECT_THROW(CurvatureFamily::constant(Matrix::Zero(2, 3), {0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(CurvatureFamily::constant(Matrix::Zero(2, 2), {1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(CurvatureFamily::sampled(0.0, 0.0, {Matrix::Zero(1, 1), Matrix::Zero(1, 1)}), InvalidArgument);
  EXPECT_THROW(CurvatureFamily::sampled(0.0, 0.1, {}), InvalidArgument);
  EXPECT_THROW(CurvatureFamily::constant(Matrix::Zero(1, 1), {0.0, 1.0}, -1.0), InvalidArgument);
}

TEST(Curvature, DiagonalTrigSeries) {
  TrigSeries s{0.5, 2.0, {1.0}, {0.25}};
  const auto f = CurvatureFamily::diagonal({s, TrigSeries{1.0, 1.0, {}, {}}}, {-1.0, 1.0});
  const double t = 0.3;
  EXPECT_NEAR(f(t)(0, 0), 0.5 + std::cos(2.0 * t) + 0.25 * std::sin(2.0 * t), 1e-15);
  EXPECT_DOUBLE_EQ(f(t)(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(f(t)(0, 1), 0.0);
  double sup = 0.0;
  for (int i = 0; i <= 4000; ++i) sup = std::max(sup, symmetric_op_norm(f(-1.0 + 0.0005 * i)));
  EXPECT_GE(f.norm_bound(), sup);
  EXPECT_LE(f.norm_bound(), 1.75 + 1e-12);
}

TEST(Curvature, FourierMatchesFormula) {
  FourierCurvature d;
  d.freq = 1.5;
  d.c0 = Matrix::Identity(2, 2);
  Matrix c(2, 2);
  c << 0.0, 1.0, 1.0, 0.0;
  d.cos = {c};
  d.sin = {Matrix::Identity(2, 2)};
  const auto f = CurvatureFamily::fourier(d, {-3.0, 3.0});
  const double t = 1.1;
  const Matrix expect = Matrix::Identity(2, 2) + c * std::cos(1.5 * t) + Matrix::Identity(2, 2) * std::sin(1.5 * t);
  EXPECT_LT((f(t) - expect).norm(), 1e-14);
}

TEST(Curvature, SampledInterpolatesNodesExactly) {
  std::vector<Matrix> samples;
  for (int i = 0; i <= 20; ++i) samples.push_back(Matrix::Constant(1, 1, std::sin(0.1 * i)));
  const auto f = CurvatureFamily::sampled(0.0, 0.1, samples);
  EXPECT_DOUBLE_EQ(f.domain().hi, 2.0);
  for (int i = 0; i <= 20; ++i) EXPECT_NEAR(f(0.1 * i)(0, 0), std::sin(0.1 * i), 1e-15);
  EXPECT_NEAR(f(1.05)(0, 0), std::sin(1.05), 1e-4);
  EXPECT_THROW(f.with_domain({0.0, 3.0}), DomainError);
}

TEST(Curvature, SumAddsParts) {
  const auto a = CurvatureFamily::constant(Matrix::Identity(2, 2), {-2.0, 2.0});
  const auto b = CurvatureFamily::constant(2.0 * Matrix::Identity(2, 2), {-1.0, 3.0});
  const auto s = CurvatureFamily::sum({a, b});
  EXPECT_DOUBLE_EQ(s.domain().lo, -1.0);
  EXPECT_DOUBLE_EQ(s.domain().hi, 2.0);
  EXPECT_DOUBLE_EQ(s(0.0)(1, 1), 3.0);
  EXPECT_THROW(CurvatureFamily::sum({a, CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 1.0})}),
               InvalidArgument);
}

TEST(Curvature, ScaledMultipliesValuesAndBound) {
  const auto f = random_family({.m = 3}, 11);
  const auto g = f.scaled(-2.0);
  for (double t : {-5.0, 0.0, 3.3}) EXPECT_LT((g(t) + 2.0 * f(t)).norm(), 1e-13);
  EXPECT_NEAR(g.norm_bound(), 2.0 * f.norm_bound(), 1e-12);
}

TEST(Curvature, NormBoundDominatesSampledNorms) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto f = random_family({.m = 3, .amplitude = 2.0}, seed);
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) sup = std::max(sup, symmetric_op_norm(f(-10.0 + 0.01 * i)));
    EXPECT_GE(f.norm_bound(), sup) << "seed " << seed;
    EXPECT_NEAR(f.curvature_scale(), std::sqrt(f.norm_bound()), 1e-15);
  }
}

TEST(Curvature, WithDomainRestrictsAnalyticKinds) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(1, 1), {0.0, 1.0});
  const auto g = f.with_domain({0.0, 5.0});
  EXPECT_DOUBLE_EQ(g(4.0)(0, 0), 1.0);
}

TEST(Curvature, RandomFamilyIsDeterministic) {
  const auto a = random_family({.m = 2}, 99);
  const auto b = random_family({.m = 2}, 99);
  const auto c = random_family({.m = 2}, 100);
  EXPECT_EQ(a(1.234), b(1.234));
  EXPECT_GT((a(1.234) - c(1.234)).norm(), 1e-6);
}

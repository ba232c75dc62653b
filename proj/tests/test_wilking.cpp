#include "jacobi/error.hpp"
#include "jacobi/linalg.hpp"
#include "jacobi/scenarios.hpp"
#include "jacobi/wilking.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

using namespace jacobi;

constexpr double pi = std::numbers::pi;

namespace {

int span_rank(const Matrix& a, double scale) {
  if (a.cols() == 0) return 0;
  const auto sv = Eigen::JacobiSVD<Matrix>(a).singularValues();
  return int((sv.array() > 1e-7 * scale).count());
}

int meet_dim(const Matrix& a, const Matrix& b, double scale) {
  Matrix ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return span_rank(a, scale) + span_rank(b, scale) - span_rank(ab, scale);
}

// A field vanishing at t_star, expressed at anchor 0.
Vector field_vanishing_at(const FundamentalSolution& sol, double t_star, const Vector& direction) {
  const int m = int(direction.size());
  Vector x(2 * m);
  x << Vector::Zero(m), direction;
  return sol.transfer_between(t_star, 0.0) * x;
}

}  // namespace

TEST(Wilking, HopfReducedCurvatureIsFour) {
  const Scenario s = hopf_scenario();
  const auto& w = s.subspace("vertical");
  const Interval iv{0.0, pi};
  const auto sol = integrate_for(w, s.family, iv);
  const TransversalSystem sys = build_transversal(w, sol, iv);
  ASSERT_EQ(sys.horizontal_dim(), 1);
  double err = 0.0;
  for (double t : sys.times) err = std::max(err, std::abs(sys.reduced(t)(0, 0) - 4.0));
  EXPECT_LE(err, 1e-6);
  EXPECT_LE(sys.parallelism_residual, 1e-7);
}

TEST(Wilking, HopfQuotientFocalAtHalfPi) {
  const Scenario s = hopf_scenario();
  const auto& w = s.subspace("vertical");
  const Interval iv{0.0, pi};
  const auto sol = integrate_for(w, s.family, iv);
  const TransversalSystem sys = build_transversal(w, sol, iv);
  const JacobiSubspace q = project_subspace(s.subspace("lambda"), sys, sol);
  const Interval inner{0.1, pi - 0.1};
  const IndexReport r = locate_focal_points(q, integrate_for(q, sys.reduced, iv), inner);
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_NEAR(r.events[0].time, pi / 2, 1e-6);
}

TEST(Wilking, HopfDecomposition) {
  const Scenario s = hopf_scenario();
  const DecompositionResult d =
      check_decomposition(s.subspace("vertical"), s.subspace("lambda"), s.family, {-0.1, pi + 0.1});
  EXPECT_EQ(d.ind_w, 0);
  EXPECT_EQ(d.ind_quotient, 3);
  EXPECT_EQ(d.ind_lambda, 3);
  EXPECT_TRUE(d.equal);
}

TEST(Wilking, DimensionBookkeeping) {
  const auto f = random_family({.m = 4}, 5);
  for (int k = 0; k <= 3; ++k) {
    const auto w = random_isotropic(4, k, 40 + k, 0.0);
    const auto sol = integrate_for(w, f, {0.0, 1.0});
    const TransversalSystem sys = build_transversal(w, sol, {0.0, 1.0});
    EXPECT_EQ(sys.horizontal_dim(), 4 - k);
    EXPECT_EQ(2 * sys.horizontal_dim(), omega_complement(w).rank() - w.rank());
    for (std::size_t i = 0; i < sys.times.size(); i += 50) {
      EXPECT_LT((sys.wtilde[i].transpose() * sys.frame[i]).norm(), 1e-10);
      EXPECT_LT((sys.frame[i].transpose() * sys.frame[i] - Matrix::Identity(4 - k, 4 - k)).norm(), 1e-10);
    }
  }
}

TEST(Wilking, WtildeKeepsRankAtFocalTimes) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(3, 3), {-1.0, 5.0});
  Matrix frame = Matrix::Zero(6, 2);
  frame(3, 0) = 1.0;
  frame(4, 1) = 1.0;
  const JacobiSubspace w(0.0, frame, SubspaceClass::Isotropic);
  const auto sol = integrate_for(w, f, {0.0, 4.0});
  for (double t : {0.0, pi}) {
    const Matrix q = wtilde_basis(w, sol, t);
    EXPECT_EQ(q.cols(), 2);
    EXPECT_EQ(span_rank(q, 1.0), 2);
    EXPECT_LT((q.transpose() * q - Matrix::Identity(2, 2)).norm(), 1e-10);
  }
}

TEST(Wilking, ProjectionIdentity) {
  const auto f = random_family({.m = 3, .domain = {-1.0, 3.0}}, 12);
  const auto w = random_isotropic(3, 1, 13, 0.0);
  const Interval iv{0.0, 2.0};
  const auto sol = integrate_for(w, f, iv);
  const TransversalSystem sys = build_transversal(w, sol, iv);
  const Matrix perp = omega_complement(w).frame();
  const double h = sys.times[1] - sys.times[0];
  for (int c = 0; c < perp.cols(); ++c) {
    const Vector field = perp.col(c);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 1; i + 1 < sys.times.size(); i += 7) {
      const Vector ym = project_field(field, sys, sol, i - 1);
      const Vector y0 = project_field(field, sys, sol, i);
      const Vector yp = project_field(field, sys, sol, i + 1);
      const int n = sys.horizontal_dim();
      const Vector acc = (yp.head(n) - 2.0 * y0.head(n) + ym.head(n)) / (h * h);
      const Vector vel = (yp.head(n) - ym.head(n)) / (2.0 * h);
      worst = std::max(worst, (acc + sys.reduced(sys.times[i]) * y0.head(n)).norm());
      worst = std::max(worst, (vel - y0.tail(n)).norm());
      scale = std::max(scale, y0.norm());
    }
    EXPECT_LE(worst, 1e-3 * std::max(1.0, scale)) << "column " << c;
  }
}

TEST(Wilking, LambdaMeetsWtildeOnlyInW) {
  const auto f = random_family({.m = 3, .shift = 1.0, .domain = {-1.0, 4.0}}, 31);
  const auto flat = integrate(f, 0.0, {0.0, 3.0});
  const double t_star = 1.3;
  const Vector v = (Vector(3) << 1.0, -0.5, 0.25).finished();
  Matrix wf(6, 1);
  wf.col(0) = field_vanishing_at(flat, t_star, v);
  const JacobiSubspace w(0.0, wf, SubspaceClass::Isotropic);
  std::mt19937_64 rng(2);
  const JacobiSubspace lam = extend_to_lagrangian(w, rng);
  const auto sol = integrate_for(w, f, {0.0, 3.0});
  for (double t : {0.4, t_star, 2.2, 2.9}) {
    const Matrix lt = evaluation_matrix(lam, sol, t);
    const Matrix wt = evaluation_matrix(w, sol, t);
    const Matrix wtilde = wtilde_basis(w, sol, t);
    const double scale = phase_evaluation(lam, sol, t).norm();
    // W~(t) has orthonormal columns; W(t) and Lambda(t) are judged on the phase scale.
    EXPECT_EQ(meet_dim(lt, scale * wtilde, scale), meet_dim(lt, wt, scale)) << "t=" << t;
  }
  EXPECT_EQ(focal_index(w, sol, t_star), 1);
}

TEST(Wilking, QuotientIndexIndependentOfHorizontalBasis) {
  const auto f = random_family({.m = 3, .shift = 1.0, .domain = {-1.0, 6.0}}, 44);
  const auto w = random_isotropic(3, 1, 45, 0.0);
  std::mt19937_64 rng(46);
  const auto lam = extend_to_lagrangian(w, rng);
  const Interval iv{0.0, 5.0};
  const auto sol = integrate_for(w, f, iv);
  const TransversalSystem sys = build_transversal(w, sol, iv);
  const auto q = project_subspace(lam, sys, sol);
  const int base = index(q, integrate_for(q, sys.reduced, iv), iv);

  Matrix o(2, 2);
  const double a = 0.7;
  o << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  TransversalSystem rotated = sys;
  std::vector<Matrix> samples;
  for (std::size_t i = 0; i < sys.times.size(); ++i) {
    rotated.frame[i] = sys.frame[i] * o;
    rotated.oneill[i] = o.transpose() * sys.oneill[i];
    samples.push_back(o.transpose() * sys.reduced(sys.times[i]) * o);
  }
  rotated.reduced = CurvatureFamily::sampled(sys.times.front(), sys.times[1] - sys.times[0], samples);
  const auto q2 = project_subspace(lam, rotated, sol);
  EXPECT_EQ(index(q2, integrate_for(q2, rotated.reduced, iv), iv), base);
}

TEST(Wilking, TrivialCasesKZeroAndKm) {
  const auto f = random_family({.m = 2, .shift = 1.0}, 3);
  const auto lam = random_lagrangian(2, 4, 0.0);
  const Interval iv{0.0, 5.0};
  const DecompositionResult zero = check_decomposition(JacobiSubspace::zero(2, 0.0), lam, f, iv);
  EXPECT_EQ(zero.ind_w, 0);
  EXPECT_TRUE(zero.equal);
  const DecompositionResult full = check_decomposition(lam, lam, f, iv);
  EXPECT_EQ(full.ind_quotient, 0);
  EXPECT_TRUE(full.equal);
}

TEST(Wilking, RandomDecompositions) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const int m = 2 + int(seed % 2);
    const auto f = random_family({.m = m}, seed);
    const auto w = random_isotropic(m, 1, seed + 10, 0.0);
    std::mt19937_64 rng(seed);
    const auto lam = extend_to_lagrangian(w, rng);
    const DecompositionResult d = check_decomposition(w, lam, f, {0.0, 6.0});
    EXPECT_TRUE(d.equal) << "seed " << seed << ": " << d.ind_w << " + " << d.ind_quotient << " vs " << d.ind_lambda;
  }
}

TEST(Wilking, RejectsNonIsotropicAndForeignLagrangian) {
  const auto f = CurvatureFamily::constant(Matrix::Identity(2, 2), {0.0, 3.0});
  Matrix gf = Matrix::Zero(4, 2);
  gf(0, 0) = 1.0;
  gf(2, 1) = 1.0;
  const JacobiSubspace g(0.0, gf, SubspaceClass::General);
  EXPECT_THROW(build_transversal(g, integrate_for(g, f, {0.0, 3.0}), {0.0, 3.0}), PreconditionError);
  const Scenario s = hopf_scenario();
  const auto& w = s.subspace("vertical");
  const auto sol = integrate_for(w, s.family, {0.0, 3.0});
  const auto sys = build_transversal(w, sol, {0.0, 3.0});
  EXPECT_THROW(project_subspace(JacobiSubspace::parallel_at(2, 0.0), sys, sol), PreconditionError);
}

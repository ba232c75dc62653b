#include "jacobi/maslov.hpp"

#include "jacobi/error.hpp"
#include "jacobi/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace jacobi {

namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

void require_lagrangian(const JacobiSubspace& l, const Tolerances& tol) {
  if (l.rank() != l.phase_dim() || l.isotropy_defect() > 10.0 * tol.iso)
    throw PreconditionError("Maslov index requires a Lagrangian subspace");
}

void require_nonfocal_endpoints(const JacobiSubspace& l, const FundamentalSolution& sol, Interval interval,
                                const Tolerances& tol) {
  for (double t : {interval.lo, interval.hi}) {
    if (const int f = focal_index(l, sol, t, tol); f > 0) {
      std::ostringstream os;
      os << "endpoint t=" << t << " is focal (f=" << f << "); Maslov index requires non-focal endpoints";
      throw PreconditionError(os.str());
    }
  }
}

// U U^T for an orthonormalized frame (X; Y) of Lambda(t), U = X + iY.
ComplexMatrix unitary_square(const JacobiSubspace& l, const FundamentalSolution& sol, double t) {
  const int m = l.phase_dim();
  const Matrix q = linalg::polar_factor(phase_evaluation(l, sol, t));
  ComplexMatrix u(m, m);
  u.real() = q.topRows(m);
  u.imag() = q.bottomRows(m);
  return u * u.transpose();
}

Complex det_square(const JacobiSubspace& l, const FundamentalSolution& sol, double t) {
  const ComplexMatrix w = unitary_square(l, sol, t);
  const Complex d = w.determinant();
  return d / std::abs(d);
}

// Sum of principal arguments of the eigenvalues of U U^T. Every eigenvalue must stay
// away from -1, which is where Lambda meets {0} x V.
double principal_argument_sum(const JacobiSubspace& l, const FundamentalSolution& sol, double t) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(unitary_square(l, sol, t), false);
  double sum = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double a = std::arg(es.eigenvalues()(i));
    if (std::numbers::pi - std::abs(a) < 1e-9) {
      std::ostringstream os;
      os << "winding_index: endpoint t=" << t << " lies on the Maslov cycle";
      throw PreconditionError(os.str());
    }
    sum += a;
  }
  return sum;
}

}  // namespace

Matrix crossing_form(const JacobiSubspace& lagrangian, const FundamentalSolution& sol, double t,
                     const Tolerances& tol) {
  require_lagrangian(lagrangian, tol);
  const int m = lagrangian.phase_dim();
  const Matrix z = phase_evaluation(lagrangian, sol, t);
  Eigen::JacobiSVD<Matrix> full(z);
  const double cut = tol.rank * full.singularValues()(0);
  Eigen::JacobiSVD<Matrix> val(z.topRows(m), Eigen::ComputeFullV);
  const auto& s = val.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  const int d = m - rank;
  if (d == 0) {
    std::ostringstream os;
    os << "crossing_form: t=" << t << " is not a crossing";
    throw PreconditionError(os.str());
  }
  // Orthonormal basis of F_t inside Lambda(t); its vectors are (0, w) up to the rank threshold.
  const Matrix x = linalg::polar_factor(z * val.matrixV().rightCols(d));
  const Matrix a = hamiltonian_matrix(sol.family(), t);
  const Matrix j = linalg::symplectic_unit(m);
  const Matrix b = (a * x).transpose() * j * x;
  return 0.5 * (b + b.transpose());
}

MaslovResult maslov_index(const JacobiSubspace& lagrangian, const FundamentalSolution& sol, Interval interval,
                          const Tolerances& tol) {
  require_lagrangian(lagrangian, tol);
  require_nonfocal_endpoints(lagrangian, sol, interval, tol);
  const IndexReport report = locate_focal_points(lagrangian, sol, interval, tol);
  MaslovResult out;
  for (const auto& e : report.events) {
    const Matrix b = crossing_form(lagrangian, sol, e.time, tol);
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    CrossingReport c;
    c.time = e.time;
    c.intersection_dim = int(b.rows());
    int signature = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      const double ev = es.eigenvalues()(i);
      c.eigenvalues.push_back(ev);
      signature += ev > 0.0 ? 1 : (ev < 0.0 ? -1 : 0);
    }
    out.index += signature;
    out.crossings.push_back(std::move(c));
  }
  return out;
}

int winding_index(const JacobiSubspace& lagrangian, const FundamentalSolution& sol, Interval interval,
                  const Tolerances& tol) {
  require_lagrangian(lagrangian, tol);
  require_nonfocal_endpoints(lagrangian, sol, interval, tol);
  if (!sol.range().contains(interval)) throw DomainError("winding_index: interval outside integrated range");

  // Integrator grid restricted to the interval, each cell split in four.
  std::vector<double> nodes{interval.lo};
  double prev = interval.lo;
  auto add_cell = [&](double next) {
    for (int q = 1; q <= 4; ++q) nodes.push_back(prev + (next - prev) * q / 4.0);
    prev = next;
  };
  for (double t : sol.grid())
    if (t > interval.lo && t < interval.hi) add_cell(t);
  add_cell(interval.hi);

  constexpr double kMaxJump = std::numbers::pi / 2.0;
  constexpr int kMaxDepth = 40;
  double total = 0.0;
  // Increment of arg det(U U^T) across [t0, t1], bisecting while a jump reaches pi/2.
  auto increment = [&](auto&& self, double t0, Complex d0, double t1, Complex d1, int depth) -> double {
    const double jump = std::arg(d1 / d0);
    if (std::abs(jump) < kMaxJump) return jump;
    if (depth >= kMaxDepth) {
      std::ostringstream os;
      os << "winding_index: angle jump >= pi/2 near t=" << t0 << "; refine the sample grid";
      throw NumericalError(os.str());
    }
    const double tm = 0.5 * (t0 + t1);
    const Complex dm = det_square(lagrangian, sol, tm);
    return self(self, t0, d0, tm, dm, depth + 1) + self(self, tm, dm, t1, d1, depth + 1);
  };
  Complex d_prev = det_square(lagrangian, sol, nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i] <= nodes[i - 1]) continue;
    const Complex d = det_square(lagrangian, sol, nodes[i]);
    total += increment(increment, nodes[i - 1], d_prev, nodes[i], d, 0);
    d_prev = d;
  }

  // Close the loop from Lambda(b) back to Lambda(a) through the principal-log path of
  // U U^T, which never meets the eigenvalue -1 and so stays transversal to {0} x V.
  const double closure = principal_argument_sum(lagrangian, sol, interval.lo) -
                         principal_argument_sum(lagrangian, sol, interval.hi);
  // Positive crossings turn arg det(U U^T) clockwise.
  const double turns = -(total + closure) / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-3) {
    std::ostringstream os;
    os << "winding_index: non-integral winding " << turns;
    throw NumericalError(os.str());
  }
  return int(rounded);
}

}  // namespace jacobi

#pragma once

#include "jacobi/curvature.hpp"
#include "jacobi/types.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace jacobi {

/// A point (J(t), J'(t)) of the phase space T = V x V.
struct PhaseVector {
  Vector value;
  Vector derivative;

  PhaseVector() = default;
  PhaseVector(Vector v, Vector d);
  /// Splits a stacked 2m-vector (value on top).
  static PhaseVector from_stacked(const Vector& x);

  int dim() const { return int(value.size()); }
  Vector stacked() const;
};

/// omega((v1, v2), (w1, w2)) = <v1, w2> - <v2, w1>.
double omega(const PhaseVector& p, const PhaseVector& q);
double omega(const Vector& p, const Vector& q);

/// A(t) = [[0, I], [-R(t), 0]], the generator of the flow X' = A(t) X.
Matrix hamiltonian_matrix(const CurvatureFamily& family, double t);

struct IntegrationOptions {
  double step_tol = 1e-10;   ///< local error per unit time, relative to max(1, |Phi|)
  double sympl_tol = 1e-9;   ///< symplectic defect ceiling; re-projection above sympl_tol / 2
  std::optional<double> max_step;  ///< extra cap on top of min_focal_gap(C) / 4
  double min_step = 1e-13;
  std::size_t max_steps = 20'000'000;
  bool check_norm_bound = true;

  static IntegrationOptions from(const Tolerances& tol);
};

struct IntegratorDiagnostics {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t projections = 0;
  double max_symplectic_defect = 0.0;
};

/// Transfer matrices Phi(t0 -> t) of X' = A(t) X on a grid with cubic Hermite dense output.
class FundamentalSolution {
 public:
  /// Phi == identity on [t0, t0]; used for frames that need no propagation.
  static FundamentalSolution identity(const CurvatureFamily& family, double t0);

  double anchor() const { return anchor_; }
  Interval range() const { return range_; }
  int dim() const { return family_.dim(); }
  const CurvatureFamily& family() const { return family_; }
  const std::vector<double>& grid() const { return times_; }
  const IntegratorDiagnostics& diagnostics() const { return diag_; }

  /// Phi(t0 -> t); throws DomainError outside range().
  Matrix transfer(double t) const;
  /// Phi(t0 -> t) applied to a 2m x k block.
  Matrix propagate(const Matrix& block, double t) const;
  PhaseVector evaluate(const PhaseVector& x0, double t) const;
  /// Phi(t1 -> t2) = Phi(t0 -> t2) Phi(t0 -> t1)^{-1}, using the symplectic inverse.
  Matrix transfer_between(double t1, double t2) const;

  /// max over grid nodes of symplectic_defect(Phi).
  double symplectic_defect() const;

 private:
  friend FundamentalSolution integrate(const CurvatureFamily&, double, Interval, const IntegrationOptions&);
  FundamentalSolution(CurvatureFamily family, double t0) : family_(std::move(family)), anchor_(t0) {}

  CurvatureFamily family_;
  double anchor_ = 0.0;
  Interval range_;
  std::vector<double> times_;
  std::vector<Matrix> values_;
  std::vector<Matrix> slopes_;
  IntegratorDiagnostics diag_;
};

/// Integrates Phi' = A(t) Phi, Phi(t0) = I, over the interval (which must contain t0).
///
/// Classical RK4 with step doubling: the doubled step gives both a local error
/// estimate and a midpoint that checks the Hermite interpolant, and the
/// Richardson-extrapolated value is kept. Steps are capped at min_focal_gap(C)/4.
/// Whenever the symplectic defect at a node exceeds sympl_tol/2 the node is
/// corrected back onto the symplectic group.
FundamentalSolution integrate(const CurvatureFamily& family, double t0, Interval interval,
                              const IntegrationOptions& opts = {});

/// ||Phi^T J Phi - J||_F, divided by max(1, |Phi|_F^2 / 2m) so growing flows are judged
/// against their round-off floor. Equals the plain defect for orthogonal Phi.
double symplectic_defect(const Matrix& phi);

/// Pulls a near-symplectic matrix back onto Sp(2m) by first-order corrections.
Matrix symplectic_correction(const Matrix& phi, int iterations = 3);

}  // namespace jacobi

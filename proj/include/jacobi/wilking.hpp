#pragma once

#include "jacobi/focal.hpp"

#include <vector>

namespace jacobi {

/// Transversal Jacobi equation of an isotropic subspace W.
///
/// On a uniform grid over the interval this holds an orthonormal basis of
/// W~(t) = W(t) + {J'(t) : J in W, J(t) = 0}, a parallel orthonormal frame E(t)
/// of the horizontal space H(t) = W~(t)^perp, the O'Neill operator
/// A : W~ -> H, A(J(t)) = P J'(t), in those bases, and the reduced curvature
/// R^H = P R + 3 A A^* written in the frame E, packaged as a sampled family.
struct TransversalSystem {
  JacobiSubspace base;
  Interval interval;
  std::vector<double> times;
  std::vector<Matrix> wtilde;   ///< m x k, orthonormal
  std::vector<Matrix> frame;    ///< m x (m - k), orthonormal, parallel for P d/dt
  std::vector<Matrix> oneill;   ///< (m - k) x k
  CurvatureFamily reduced;      ///< dim m - k, sampled on `times`
  double parallelism_residual = 0.0;  ///< max ||P E'|| at interior grid times

  int horizontal_dim() const { return reduced.dim(); }
  std::size_t node_near(double t) const;
};

/// Orthonormal basis of W~(t); rank k at every t, including W-focal times.
Matrix wtilde_basis(const JacobiSubspace& w, const FundamentalSolution& sol, double t, const Tolerances& tol = {});

/// Matrix of A in the pair (wtilde_basis(t), frame), with frame an orthonormal basis of H(t).
Matrix oneill_operator(const JacobiSubspace& w, const FundamentalSolution& sol, double t, const Matrix& frame,
                       const Tolerances& tol = {});

/// Builds W~, the parallel horizontal frame, A and R^H on the interval.
/// `max_spacing` is the initial uniform grid step, by default min(0.005, min_focal_gap(C) / 8);
/// the grid is refined while the parallelism residual exceeds tol.frame (at most 2e5 nodes).
TransversalSystem build_transversal(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                                    const Tolerances& tol = {}, std::optional<double> max_spacing = std::nullopt);

/// R^H as a sampled curvature family of dimension m - k.
CurvatureFamily transversal_family(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                                   const Tolerances& tol = {});

/// Projects a Lagrangian Lambda containing W to a Lagrangian of the transversal system.
/// The result is anchored at the grid time nearest the midpoint of the largest W-focal-free
/// gap; its frame holds (E^T J, E^T J' - A-hat Q^T J) for fields J completing W to Lambda.
JacobiSubspace project_subspace(const JacobiSubspace& lagrangian, const TransversalSystem& system,
                                const FundamentalSolution& sol, const Tolerances& tol = {});

/// Projection of a single field J (phase vector at the anchor of sol) onto the transversal
/// system at grid node i: returns (E^T J(t_i), E^T J'(t_i) - A-hat Q^T J(t_i)).
Vector project_field(const Vector& field, const TransversalSystem& system, const FundamentalSolution& sol,
                     std::size_t node, const Tolerances& tol = {});

struct DecompositionResult {
  int ind_w = 0;
  int ind_quotient = 0;
  int ind_lambda = 0;
  bool equal = false;
  double parallelism_residual = 0.0;
};

/// ind_W(I) + ind_{Lambda/W}(I) == ind_Lambda(I), the quotient index computed by
/// integrating the reduced family independently.
DecompositionResult check_decomposition(const JacobiSubspace& w, const JacobiSubspace& lagrangian,
                                        const CurvatureFamily& family, Interval interval, const Tolerances& tol = {});

}  // namespace jacobi

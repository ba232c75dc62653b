#pragma once

#include "jacobi/focal.hpp"

#include <vector>

namespace jacobi {

/// A crossing of Lambda(t) with the reference Lagrangian {0} x V.
struct CrossingReport {
  double time = 0.0;
  int intersection_dim = 0;
  std::vector<double> eigenvalues;  ///< eigenvalues of the crossing form on F_t, ascending
};

struct MaslovResult {
  int index = 0;  ///< sum of crossing form signatures over interior crossings
  std::vector<CrossingReport> crossings;
};

/// Matrix of B(x, y) = omega(A(t) x, y) on an orthonormal basis of F_t = Lambda(t) cap ({0} x V).
/// Throws PreconditionError when t is not a crossing.
Matrix crossing_form(const JacobiSubspace& lagrangian, const FundamentalSolution& sol, double t,
                     const Tolerances& tol = {});

/// Maslov-Arnold index of t -> Lambda(t) on [a, b] via crossing forms. Endpoints must be non-focal.
MaslovResult maslov_index(const JacobiSubspace& lagrangian, const FundamentalSolution& sol, Interval interval,
                          const Tolerances& tol = {});

/// Maslov-Arnold index as a winding number: the continuous argument of det(U U^T),
/// U = X + iY for an orthonormal frame (X; Y) of Lambda(t), closed through the
/// chart of Lagrangians transversal to {0} x V.
int winding_index(const JacobiSubspace& lagrangian, const FundamentalSolution& sol, Interval interval,
                  const Tolerances& tol = {});

}  // namespace jacobi

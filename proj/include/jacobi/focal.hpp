#pragma once

#include "jacobi/subspace.hpp"

#include <vector>

namespace jacobi {

/// A located W-focal time.
struct FocalEvent {
  double time = 0.0;
  int multiplicity = 0;         ///< f^W(time) = dim of the kernel below
  Matrix kernel_basis;          ///< k x multiplicity, coefficient vectors c with W(time) c = 0
  double localization_radius = 0.0;
};

/// Focal events in a closed interval and their total multiplicity.
struct IndexReport {
  Interval interval;
  std::vector<FocalEvent> events;
  int total = 0;          ///< sum over t in [lo, hi] of f^W(t)
  int focal_at_lo = 0;    ///< f^W(lo)
  int focal_at_hi = 0;    ///< f^W(hi)

  /// Total over the open interval (lo, hi).
  int open_total() const { return total - focal_at_lo - focal_at_hi; }
};

/// Scans sigma_min(W(t)) for zeros on [lo, hi] and refines each to the localization tolerance.
///
/// Cells of the integrator grid are discarded when a Lipschitz lower bound on
/// sigma_min keeps it above the rank threshold; the remaining cells are bisected
/// down to tol.loc, grouped, and minimized by golden section. Throws
/// PreconditionError for non-isotropic W and NumericalError when two distinct
/// events fall within the localization radius of each other.
IndexReport locate_focal_points(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                                const Tolerances& tol = {});

/// ind_W([lo, hi]), endpoints included.
int index(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval, const Tolerances& tol = {});

/// ind_W(interval) <= dim W, for intervals no longer than min_focal_gap(C).
bool cluster_index_bound_check(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                               const Tolerances& tol = {});

}  // namespace jacobi

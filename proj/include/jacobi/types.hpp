#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>

namespace jacobi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Closed interval [lo, hi] of the time axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
  double midpoint() const { return 0.5 * (lo + hi); }

  static Interval hull(const Interval& a, double t) {
    return {std::min(a.lo, t), std::max(a.hi, t)};
  }
};

/// Numerical tolerances shared by every module. Defaults follow the documented contract.
struct Tolerances {
  double sympl = 1e-9;   ///< max ||Phi^T J Phi - J||_F at grid nodes
  double step = 1e-10;   ///< integrator local error per unit time
  double rank = 1e-7;    ///< relative singular value threshold for rank decisions
  double iso = 1e-8;     ///< isotropy threshold on the normalized omega-Gram
  double loc = 1e-9;     ///< localization radius for focal times
  double frame = 1e-7;   ///< horizontal frame parallelism residual
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace jacobi

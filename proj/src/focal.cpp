#include "jacobi/focal.hpp"

#include "jacobi/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jacobi {

namespace {

struct Sample {
  double t = 0.0;
  double sigma_min = 0.0;   // smallest singular value of W(t)
  double scale = 0.0;       // largest singular value of the phase evaluation
  double value_norm = 0.0;  // ||W(t)||_2
  double slope_norm = 0.0;  // ||W'(t)||_2
};

class Scanner {
 public:
  Scanner(const JacobiSubspace& w, const FundamentalSolution& sol, const Tolerances& tol)
      : w_(w), sol_(sol), tol_(tol), m_(w.phase_dim()), k_(w.rank()),
        c2_(sol.family().norm_bound()) {}

  Sample sample(double t) const {
    const Matrix z = phase_evaluation(w_, sol_, t);
    Sample s;
    s.t = t;
    Eigen::JacobiSVD<Matrix> val(z.topRows(m_));
    const auto& sv = val.singularValues();
    s.value_norm = sv(0);
    s.sigma_min = k_ > m_ ? 0.0 : sv(k_ - 1);
    Eigen::JacobiSVD<Matrix> der(z.bottomRows(m_));
    s.slope_norm = der.singularValues()(0);
    Eigen::JacobiSVD<Matrix> full(z);
    s.scale = full.singularValues()(0);
    return s;
  }

  double threshold(const Sample& a, const Sample& b) const {
    return tol_.rank * std::max(a.scale, b.scale);
  }

  // Lower bound of sigma_min over [a.t, b.t] from the Lipschitz constant of W(t).
  bool may_vanish(const Sample& a, const Sample& b) const {
    const double h = b.t - a.t;
    const double lip =
        1.25 * (std::max(a.slope_norm, b.slope_norm) + c2_ * std::max(a.value_norm, b.value_norm) * h);
    const double lower = 0.5 * (a.sigma_min + b.sigma_min - lip * h);
    return lower <= 2.0 * threshold(a, b);
  }

  void subdivide(const Sample& a, const Sample& b, std::vector<Interval>& out) const {
    std::vector<std::pair<Sample, Sample>> stack{{a, b}};
    while (!stack.empty()) {
      auto [lo, hi] = stack.back();
      stack.pop_back();
      if (!may_vanish(lo, hi)) continue;
      // Cells shorter than loc, or lying inside the rank-threshold band, are candidates as they are;
      // golden-section minimization localizes the event afterwards.
      const double band = 2.0 * threshold(lo, hi);
      if (hi.t - lo.t <= tol_.loc || (lo.sigma_min <= band && hi.sigma_min <= band)) {
        out.push_back({lo.t, hi.t});
        continue;
      }
      const Sample mid = sample(0.5 * (lo.t + hi.t));
      // Right half first so candidates come off the stack in increasing time.
      stack.push_back({mid, hi});
      stack.push_back({lo, mid});
    }
  }

  // Golden-section minimization of sigma_min over [lo, hi].
  double minimize(double lo, double hi) const {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = sample(x1).sigma_min, f2 = sample(x2).sigma_min;
    const double stop = std::max(0.05 * tol_.loc, 1e-15 * std::max(1.0, std::abs(lo)));
    while (b - a > stop) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = sample(x1).sigma_min;
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = sample(x2).sigma_min;
      }
    }
    double best = 0.5 * (a + b);
    double fbest = sample(best).sigma_min;
    for (double edge : {lo, hi}) {
      const double fe = sample(edge).sigma_min;
      if (fe < fbest) {
        fbest = fe;
        best = edge;
      }
    }
    return best;
  }

  std::optional<FocalEvent> event_at(double t, double radius) const {
    const Matrix z = phase_evaluation(w_, sol_, t);
    Eigen::JacobiSVD<Matrix> full(z);
    const double cut = tol_.rank * full.singularValues()(0);
    Eigen::JacobiSVD<Matrix> val(z.topRows(m_), Eigen::ComputeFullV);
    const auto& sv = val.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++rank;
    const int mult = k_ - rank;
    if (mult <= 0) return std::nullopt;
    FocalEvent e;
    e.time = t;
    e.multiplicity = mult;
    e.kernel_basis = val.matrixV().rightCols(mult);
    e.localization_radius = radius;
    return e;
  }

 private:
  const JacobiSubspace& w_;
  const FundamentalSolution& sol_;
  const Tolerances& tol_;
  int m_;
  int k_;
  double c2_;
};

}  // namespace

IndexReport locate_focal_points(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                                const Tolerances& tol) {
  if (!(interval.hi >= interval.lo)) throw InvalidArgument("locate_focal_points: empty interval");
  if (w.rank() > w.phase_dim() || w.isotropy_defect() > 10.0 * tol.iso) {
    std::ostringstream os;
    os << "locate_focal_points: subspace is not isotropic (omega-Gram defect " << w.isotropy_defect()
       << "); focal indices are defined only for isotropic subspaces";
    throw PreconditionError(os.str());
  }
  if (!sol.range().contains(interval)) throw DomainError("locate_focal_points: interval outside integrated range");

  IndexReport report;
  report.interval = interval;
  if (w.rank() == 0) return report;

  Scanner scan(w, sol, tol);
  report.focal_at_lo = focal_index(w, sol, interval.lo, tol);
  report.focal_at_hi = focal_index(w, sol, interval.hi, tol);

  // Scan nodes: integrator grid restricted to the interval, plus its endpoints.
  std::vector<double> nodes{interval.lo};
  for (double t : sol.grid())
    if (t > interval.lo && t < interval.hi) nodes.push_back(t);
  if (interval.hi > interval.lo) nodes.push_back(interval.hi);

  std::vector<Interval> candidates;
  if (nodes.size() == 1) {
    candidates.push_back({interval.lo, interval.lo});
  } else {
    Sample prev = scan.sample(nodes.front());
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      Sample cur = scan.sample(nodes[i]);
      scan.subdivide(prev, cur, candidates);
      prev = cur;
    }
  }

  // Merge touching candidate cells into groups.
  std::vector<Interval> groups;
  for (const auto& c : candidates) {
    if (!groups.empty() && c.lo <= groups.back().hi + tol.loc) groups.back().hi = std::max(groups.back().hi, c.hi);
    else groups.push_back(c);
  }

  for (const auto& g : groups) {
    const double lo = std::max(interval.lo, g.lo - tol.loc);
    const double hi = std::min(interval.hi, g.hi + tol.loc);
    const double t = lo == hi ? lo : scan.minimize(lo, hi);
    const double radius = std::max(tol.loc, 0.5 * (hi - lo));
    if (auto e = scan.event_at(t, radius)) {
      if (!report.events.empty()) {
        const auto& last = report.events.back();
        if (e->time - last.time <= last.localization_radius + e->localization_radius) {
          std::ostringstream os;
          os << "locate_focal_points: unresolvable cluster of focal events near t=" << e->time
             << "; tighten the localization tolerance";
          throw NumericalError(os.str());
        }
      }
      report.total += e->multiplicity;
      report.events.push_back(std::move(*e));
    }
  }
  return report;
}

int index(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval, const Tolerances& tol) {
  return locate_focal_points(w, sol, interval, tol).total;
}

bool cluster_index_bound_check(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                               const Tolerances& tol) {
  if (interval.length() > min_focal_gap(sol.family().curvature_scale()))
    throw PreconditionError("cluster_index_bound_check: interval longer than min_focal_gap(C)");
  return index(w, sol, interval, tol) <= w.rank();
}

}  // namespace jacobi

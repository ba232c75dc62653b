#include "jacobi/wilking.hpp"

#include "jacobi/error.hpp"
#include "jacobi/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jacobi {

namespace {

// W~(t) basis Q and the ambient images A(q_j) = P J_j'(t) / sigma_j of its columns.
struct LocalGeometry {
  Matrix q;      // m x k
  Matrix a_amb;  // m x k, columns in H(t)
};

LocalGeometry local_geometry(const JacobiSubspace& w, const FundamentalSolution& sol, double t,
                             const Tolerances& tol) {
  const int m = w.phase_dim();
  const int k = w.rank();
  LocalGeometry g;
  if (k == 0) {
    g.q = Matrix(m, 0);
    g.a_amb = Matrix(m, 0);
    return g;
  }
  const Matrix z = phase_evaluation(w, sol, t);
  const double scale = Eigen::JacobiSVD<Matrix>(z).singularValues()(0);
  Eigen::JacobiSVD<Matrix> svd(z.topRows(m), Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Matrix& v = svd.matrixV();
  int r = 0;
  while (r < s.size() && s(r) > tol.rank * scale) ++r;

  g.q = Matrix(m, k);
  Matrix images = Matrix::Zero(m, k);
  const Matrix zd = z.bottomRows(m);
  for (int j = 0; j < r; ++j) {
    g.q.col(j) = svd.matrixU().col(j);
    images.col(j) = zd * v.col(j) / s(j);
  }
  if (r < k) {
    // W-focal: complete with derivative directions J'(t) of the vanishing fields,
    // which are orthogonal to W(t) by isotropy; A vanishes on them.
    Matrix deriv = zd * v.rightCols(k - r);
    const Matrix head = g.q.leftCols(r);
    deriv -= head * (head.transpose() * deriv);
    Eigen::JacobiSVD<Matrix> dsvd(deriv, Eigen::ComputeThinU);
    const auto& ds = dsvd.singularValues();
    if (ds.size() < k - r || !(ds(k - r - 1) > tol.rank * scale)) {
      std::ostringstream os;
      os << "wtilde_basis: value/derivative system has rank < " << k << " at t=" << t;
      throw NumericalError(os.str());
    }
    g.q.rightCols(k - r) = dsvd.matrixU().leftCols(k - r);
  }
  const Matrix p = Matrix::Identity(m, m) - g.q * g.q.transpose();
  g.a_amb = p * images;
  return g;
}

double default_spacing(const FundamentalSolution& sol) {
  return std::min(0.005, min_focal_gap(sol.family().curvature_scale()) / 8.0);
}

// Projector onto H(t).
Matrix horizontal_projector(const Matrix& q) {
  return Matrix::Identity(q.rows(), q.rows()) - q * q.transpose();
}

}  // namespace

std::size_t TransversalSystem::node_near(double t) const {
  if (times.empty()) throw InvalidArgument("transversal system has no grid");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  const std::size_t i = std::size_t(it - times.begin());
  if (i > 0 && std::abs(times[i - 1] - t) <= std::abs(times[i] - t)) return i - 1;
  return i;
}

Matrix wtilde_basis(const JacobiSubspace& w, const FundamentalSolution& sol, double t, const Tolerances& tol) {
  if (w.isotropy_defect() > 10.0 * tol.iso) throw PreconditionError("wtilde_basis: subspace is not isotropic");
  return local_geometry(w, sol, t, tol).q;
}

Matrix oneill_operator(const JacobiSubspace& w, const FundamentalSolution& sol, double t, const Matrix& frame,
                       const Tolerances& tol) {
  const LocalGeometry g = local_geometry(w, sol, t, tol);
  if (frame.rows() != w.phase_dim() || frame.cols() != w.phase_dim() - w.rank())
    throw InvalidArgument("oneill_operator: frame must be m x (m - k)");
  return frame.transpose() * g.a_amb;
}

namespace {

TransversalSystem build_on_grid(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                                const Tolerances& tol, double spacing) {
  const int m = w.phase_dim();
  const int k = w.rank();
  const int n = m - k;
  const auto cells = static_cast<std::size_t>(std::max(4.0, std::ceil(interval.length() / spacing)));
  const double h = interval.length() / double(cells);

  std::vector<double> times(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) times[i] = interval.lo + h * double(i);
  times.back() = interval.hi;

  std::vector<Matrix> wt(cells + 1), frame(cells + 1), oneill(cells + 1), reduced(cells + 1);
  LocalGeometry g = local_geometry(w, sol, times[0], tol);
  Matrix e = linalg::orthogonal_complement(g.q);

  // E' = -Q A^T E keeps E in H(t) with P E' = 0; RK4 between nodes, then polar re-projection onto H.
  auto rhs = [&](const LocalGeometry& lg, const Matrix& ee) -> Matrix { return -lg.q * (lg.a_amb.transpose() * ee); };

  for (std::size_t i = 0;; ++i) {
    const Matrix ahat = e.transpose() * g.a_amb;
    wt[i] = g.q;
    frame[i] = e;
    oneill[i] = ahat;
    Matrix rh = e.transpose() * sol.family()(times[i]) * e + 3.0 * ahat * ahat.transpose();
    reduced[i] = 0.5 * (rh + rh.transpose());
    if (i == cells) break;

    const double t = times[i];
    const double dt = times[i + 1] - t;
    const LocalGeometry gm = local_geometry(w, sol, t + 0.5 * dt, tol);
    const LocalGeometry g1 = local_geometry(w, sol, times[i + 1], tol);
    const Matrix k1 = rhs(g, e);
    const Matrix k2 = rhs(gm, e + 0.5 * dt * k1);
    const Matrix k3 = rhs(gm, e + 0.5 * dt * k2);
    const Matrix k4 = rhs(g1, e + dt * k3);
    Matrix next = e + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next = horizontal_projector(g1.q) * next;
    if (n > 0 && linalg::numerical_rank(next, 1e-6) < n) {
      std::ostringstream os;
      os << "build_transversal: horizontal dimension collapsed near t=" << times[i + 1];
      throw NumericalError(os.str());
    }
    e = linalg::polar_factor(next);
    g = g1;
  }

  // Parallelism residual ||P E'|| from fourth-order central differences.
  double residual = 0.0;
  for (std::size_t i = 2; i + 2 <= cells; ++i) {
    const Matrix de = (-frame[i + 2] + 8.0 * frame[i + 1] - 8.0 * frame[i - 1] + frame[i - 2]) / (12.0 * h);
    residual = std::max(residual, (horizontal_projector(wt[i]) * de).norm());
  }

  TransversalSystem sys{w,
                        interval,
                        std::move(times),
                        std::move(wt),
                        std::move(frame),
                        std::move(oneill),
                        CurvatureFamily::sampled(interval.lo, h, std::move(reduced)),
                        residual};
  return sys;
}

constexpr double kMaxNodes = 2e5;

}  // namespace

TransversalSystem build_transversal(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                                    const Tolerances& tol, std::optional<double> max_spacing) {
  if (w.rank() > w.phase_dim() || w.isotropy_defect() > 10.0 * tol.iso)
    throw PreconditionError("transversal system requires an isotropic subspace");
  if (!sol.range().contains(interval)) throw DomainError("build_transversal: interval outside integrated range");
  if (!(interval.length() > 0.0)) throw InvalidArgument("build_transversal: interval must have positive length");

  // The residual is a fourth-order difference quotient, so it scales like spacing^4.
  const double finest = interval.length() / kMaxNodes;
  double spacing = max_spacing.value_or(default_spacing(sol));
  TransversalSystem sys = build_on_grid(w, sol, interval, tol, spacing);
  for (int round = 0; round < 4 && sys.parallelism_residual > tol.frame && spacing > finest; ++round) {
    const double shrink = std::clamp(0.8 * std::pow(tol.frame / sys.parallelism_residual, 0.25), 1.0 / 16.0, 0.5);
    spacing = std::max(finest, spacing * shrink);
    sys = build_on_grid(w, sol, interval, tol, spacing);
  }
  return sys;
}

CurvatureFamily transversal_family(const JacobiSubspace& w, const FundamentalSolution& sol, Interval interval,
                                   const Tolerances& tol) {
  return build_transversal(w, sol, interval, tol).reduced;
}

Vector project_field(const Vector& field, const TransversalSystem& system, const FundamentalSolution& sol,
                     std::size_t node, const Tolerances& tol) {
  const int m = system.base.phase_dim();
  const double t = system.times.at(node);
  const Vector x = sol.transfer(t) * field;
  const LocalGeometry g = local_geometry(system.base, sol, t, tol);
  const Matrix& e = system.frame[node];
  const int n = int(e.cols());
  Vector y(2 * n);
  y.head(n) = e.transpose() * x.head(m);
  y.tail(n) = e.transpose() * x.tail(m) - e.transpose() * g.a_amb * (g.q.transpose() * x.head(m));
  return y;
}

JacobiSubspace project_subspace(const JacobiSubspace& lagrangian, const TransversalSystem& system,
                                const FundamentalSolution& sol, const Tolerances& tol) {
  const JacobiSubspace& w = system.base;
  const int m = w.phase_dim();
  const int k = w.rank();
  if (lagrangian.phase_dim() != m || lagrangian.rank() != m)
    throw PreconditionError("project_subspace: expected a Lagrangian of the same dimension");

  Matrix lframe = lagrangian.frame();
  if (lagrangian.anchor() != w.anchor()) lframe = sol.transfer_between(lagrangian.anchor(), w.anchor()) * lframe;
  const JacobiSubspace lam(w.anchor(), lframe, SubspaceClass::General, tol);
  if (const double res = containment_residual(lam, w); res > std::max(10.0 * tol.iso, 1e-7)) {
    std::ostringstream os;
    os << "project_subspace: W is not contained in Lambda (residual " << res << ")";
    throw PreconditionError(os.str());
  }

  // Anchor: grid time nearest the midpoint of the largest W-focal-free gap.
  const IndexReport wf = locate_focal_points(w, sol, system.interval, tol);
  std::vector<double> cuts{system.interval.lo};
  for (const auto& ev : wf.events) cuts.push_back(ev.time);
  cuts.push_back(system.interval.hi);
  double best_len = -1.0, tau = system.interval.midpoint();
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] - cuts[i - 1] > best_len) {
      best_len = cuts[i] - cuts[i - 1];
      tau = 0.5 * (cuts[i] + cuts[i - 1]);
    }
  }
  if (!(best_len > 0.0)) throw NumericalError("project_subspace: no W-focal-free anchor in the interval");
  const std::size_t node = system.node_near(tau);
  if (focal_index(w, sol, system.times[node], tol) > 0)
    throw NumericalError("project_subspace: nearest grid node to the anchor is W-focal");

  // Fields completing W to Lambda: orthogonal complement of span(W) inside span(Lambda).
  const Matrix qw = linalg::orthonormal_basis(w.frame(), 1e-12);
  Matrix rest = linalg::orthonormal_basis(lframe, 1e-12);
  if (k > 0) rest -= qw * (qw.transpose() * rest);
  const Matrix complement = linalg::orthonormal_basis(rest, 1e-6);
  if (complement.cols() != m - k) throw NumericalError("project_subspace: could not complete W to Lambda");

  const int n = m - k;
  Matrix projected(2 * n, n);
  for (int c = 0; c < n; ++c) {
    Vector y = project_field(complement.col(c), system, sol, node, tol);
    projected.col(c) = y / y.norm();
  }
  Tolerances loose = tol;
  loose.iso = std::max(tol.iso, 1e-6);
  return {system.times[node], std::move(projected), SubspaceClass::Lagrangian, loose};
}

DecompositionResult check_decomposition(const JacobiSubspace& w, const JacobiSubspace& lagrangian,
                                        const CurvatureFamily& family, Interval interval, const Tolerances& tol) {
  const FundamentalSolution sol = integrate_for(w, family, interval, tol);
  JacobiSubspace lam = lagrangian;
  if (lagrangian.anchor() != w.anchor())
    lam = JacobiSubspace(w.anchor(), sol.transfer_between(lagrangian.anchor(), w.anchor()) * lagrangian.frame(),
                         SubspaceClass::Lagrangian, Tolerances{.iso = 1e-6});

  DecompositionResult out;
  out.ind_w = index(w, sol, interval, tol);
  out.ind_lambda = index(lam, sol, interval, tol);
  if (w.rank() == w.phase_dim()) {
    out.ind_quotient = 0;
  } else {
    const TransversalSystem sys = build_transversal(w, sol, interval, tol);
    out.parallelism_residual = sys.parallelism_residual;
    const JacobiSubspace quotient = project_subspace(lam, sys, sol, tol);
    const FundamentalSolution reduced_sol = integrate_for(quotient, sys.reduced, interval, tol);
    out.ind_quotient = index(quotient, reduced_sol, interval, tol);
  }
  out.equal = out.ind_w + out.ind_quotient == out.ind_lambda;
  return out;
}

}  // namespace jacobi

#include "jacobi/flow.hpp"

#include "jacobi/error.hpp"
#include "jacobi/linalg.hpp"
#include "jacobi/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jacobi {

PhaseVector::PhaseVector(Vector v, Vector d) : value(std::move(v)), derivative(std::move(d)) {
  if (value.size() != derivative.size()) throw InvalidArgument("phase vector: value and derivative dimensions differ");
}

PhaseVector PhaseVector::from_stacked(const Vector& x) {
  if (x.size() % 2 != 0) throw InvalidArgument("phase vector: stacked length must be even");
  const auto m = x.size() / 2;
  return {x.head(m), x.tail(m)};
}

Vector PhaseVector::stacked() const {
  Vector x(2 * value.size());
  x << value, derivative;
  return x;
}

double omega(const PhaseVector& p, const PhaseVector& q) {
  if (p.dim() != q.dim()) throw InvalidArgument("omega: dimension mismatch");
  return p.value.dot(q.derivative) - p.derivative.dot(q.value);
}

double omega(const Vector& p, const Vector& q) {
  if (p.size() != q.size() || p.size() % 2 != 0) throw InvalidArgument("omega: dimension mismatch");
  const auto m = p.size() / 2;
  return p.head(m).dot(q.tail(m)) - p.tail(m).dot(q.head(m));
}

Matrix hamiltonian_matrix(const CurvatureFamily& family, double t) {
  const int m = family.dim();
  Matrix a = Matrix::Zero(2 * m, 2 * m);
  a.topRightCorner(m, m).setIdentity();
  a.bottomLeftCorner(m, m) = -family(t);
  return a;
}

IntegrationOptions IntegrationOptions::from(const Tolerances& tol) {
  IntegrationOptions o;
  o.step_tol = tol.step;
  o.sympl_tol = tol.sympl;
  return o;
}

double symplectic_defect(const Matrix& phi) {
  const int m = int(phi.rows()) / 2;
  if (m == 0) return 0.0;
  const Matrix j = linalg::symplectic_unit(m);
  // Round-off in Phi^T J Phi grows like |Phi|^2, so the defect is measured relative to that scale.
  const double scale = std::max(1.0, phi.squaredNorm() / double(2 * m));
  return (phi.transpose() * j * phi - j).norm() / scale;
}

Matrix symplectic_correction(const Matrix& phi, int iterations) {
  const int m = int(phi.rows()) / 2;
  const Matrix j = linalg::symplectic_unit(m);
  const Matrix id = Matrix::Identity(2 * m, 2 * m);
  Matrix out = phi;
  for (int it = 0; it < iterations; ++it) {
    // With S = Phi^T J Phi = J + E (E antisymmetric), X = I + J E / 2 gives X^T S X = J + O(E^2).
    const Matrix e = out.transpose() * j * out - j;
    if (e.norm() == 0.0) break;
    out = out * (id + 0.5 * j * e);
  }
  return out;
}

namespace {

// Product A(t) Phi without forming A: rows [Phi_d; -R Phi_v].
Matrix apply_generator(const Matrix& r, const Matrix& phi) {
  const int m = int(r.rows());
  Matrix out(phi.rows(), phi.cols());
  out.topRows(m) = phi.bottomRows(m);
  out.bottomRows(m).noalias() = -r * phi.topRows(m);
  return out;
}

Matrix rk4(const CurvatureFamily& family, double t, const Matrix& y, double h, const Matrix& r0) {
  const Matrix rh = family(t + 0.5 * h);
  const Matrix k1 = apply_generator(r0, y);
  const Matrix k2 = apply_generator(rh, y + 0.5 * h * k1);
  const Matrix k3 = apply_generator(rh, y + 0.5 * h * k2);
  const Matrix k4 = apply_generator(family(t + h), y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Matrix hermite(double u, double h, const Matrix& y0, const Matrix& f0, const Matrix& y1, const Matrix& f1) {
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Node {
  double t;
  Matrix y;
  Matrix f;
};

// Integrates from t0 towards t_end (either direction) and returns nodes after t0.
std::vector<Node> integrate_leg(const CurvatureFamily& family, double t0, double t_end,
                                const IntegrationOptions& opts, double h_cap, IntegratorDiagnostics& diag) {
  std::vector<Node> nodes;
  const int n = 2 * family.dim();
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t_end - t0);
  if (span == 0.0) return nodes;
  const double bound = family.norm_bound();
  const double dense_tol = 10.0 * opts.step_tol;

  double t = t0;
  Matrix y = Matrix::Identity(n, n);
  Matrix r = family(t);
  double h = std::min({h_cap, span, 0.01});
  std::size_t steps = 0;

  while (dir * (t_end - t) > 0.0) {
    if (++steps > opts.max_steps) throw NumericalError("integrate: maximum number of steps exceeded");
    const double remaining = std::abs(t_end - t);
    bool last = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      last = true;
    }
    if (h < opts.min_step) {
      std::ostringstream os;
      os << "integrate: step size underflow at t=" << t << " (h=" << h << ")";
      throw NumericalError(os.str());
    }
    const double hs = dir * h;
    const Matrix f0 = apply_generator(r, y);
    const Matrix full = rk4(family, t, y, hs, r);
    const Matrix r_mid = family(t + 0.5 * hs);
    const Matrix half1 = rk4(family, t, y, 0.5 * hs, r);
    const Matrix half2 = rk4(family, t + 0.5 * hs, half1, 0.5 * hs, r_mid);
    const Matrix end = half2 + (half2 - full) / 15.0;
    const double t1 = last ? t_end : t + hs;
    const Matrix r1 = family(t1);
    const Matrix f1 = apply_generator(r1, end);

    const double scale = std::max({1.0, max_abs(y), max_abs(end)});
    const double rk_err = max_abs(half2 - full) / 15.0;
    const double dense_err = max_abs(hermite(0.5, hs, y, f0, end, f1) - half1);
    const double ratio = std::max(rk_err / (opts.step_tol * h * scale), dense_err / (dense_tol * scale));

    if (ratio > 1.0) {
      ++diag.rejected_steps;
      h *= std::clamp(0.9 * std::pow(ratio, -0.25), 0.1, 0.9);
      continue;
    }

    if (opts.check_norm_bound) {
      const double rn = symmetric_op_norm(r1);
      if (rn > bound * (1.0 + 1e-9) + 1e-300) {
        std::ostringstream os;
        os << "integrate: ||R(t)|| = " << rn << " exceeds norm_bound " << bound << " at t=" << t1;
        throw NumericalError(os.str());
      }
    }

    auto push = [&](double tn, Matrix yn, const Matrix& rn) {
      double defect = symplectic_defect(yn);
      if (defect > 0.5 * opts.sympl_tol) {
        yn = symplectic_correction(yn);
        ++diag.projections;
        defect = symplectic_defect(yn);
        if (defect > opts.sympl_tol) {
          std::ostringstream os;
          os << "integrate: symplectic defect " << defect << " unrecoverable at t=" << tn;
          throw NumericalError(os.str());
        }
      }
      diag.max_symplectic_defect = std::max(diag.max_symplectic_defect, defect);
      Matrix fn = apply_generator(rn, yn);
      nodes.push_back({tn, std::move(yn), std::move(fn)});
    };
    push(t + 0.5 * hs, half1, r_mid);
    push(t1, end, r1);
    y = nodes.back().y;
    r = r1;
    t = t1;
    ++diag.accepted_steps;

    const double grow = ratio > 0.0 ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 4.0) : 4.0;
    h = std::min(h * grow, h_cap);
  }
  return nodes;
}

}  // namespace

FundamentalSolution FundamentalSolution::identity(const CurvatureFamily& family, double t0) {
  FundamentalSolution sol(family, t0);
  sol.range_ = {t0, t0};
  const int n = 2 * family.dim();
  sol.times_ = {t0};
  sol.values_ = {Matrix::Identity(n, n)};
  sol.slopes_ = {hamiltonian_matrix(family, t0)};
  return sol;
}

FundamentalSolution integrate(const CurvatureFamily& family, double t0, Interval interval,
                              const IntegrationOptions& opts) {
  if (!(interval.lo <= t0 && t0 <= interval.hi)) throw InvalidArgument("integrate: anchor outside the interval");
  const Interval dom = family.domain();
  const double slack = 1e-12 * std::max({1.0, std::abs(dom.lo), std::abs(dom.hi)});
  if (interval.lo < dom.lo - slack || interval.hi > dom.hi + slack) {
    std::ostringstream os;
    os << "integrate: interval [" << interval.lo << ", " << interval.hi << "] outside curvature domain [" << dom.lo
       << ", " << dom.hi << "]";
    throw DomainError(os.str());
  }
  if (!(opts.step_tol > 0.0) || !(opts.sympl_tol > 0.0)) throw InvalidArgument("integrate: tolerances must be positive");

  FundamentalSolution sol(family, t0);
  sol.range_ = interval;
  const int n = 2 * family.dim();

  double h_cap = min_focal_gap(family.curvature_scale()) / 4.0;
  if (opts.max_step) h_cap = std::min(h_cap, *opts.max_step);
  h_cap = std::min(h_cap, std::max(interval.length(), 1e-300));

  auto backward = integrate_leg(family, t0, interval.lo, opts, h_cap, sol.diag_);
  auto forward = integrate_leg(family, t0, interval.hi, opts, h_cap, sol.diag_);

  const std::size_t total = backward.size() + forward.size() + 1;
  sol.times_.reserve(total);
  sol.values_.reserve(total);
  sol.slopes_.reserve(total);
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
    sol.times_.push_back(it->t);
    sol.values_.push_back(std::move(it->y));
    sol.slopes_.push_back(std::move(it->f));
  }
  sol.times_.push_back(t0);
  sol.values_.push_back(Matrix::Identity(n, n));
  sol.slopes_.push_back(hamiltonian_matrix(family, t0));
  for (auto& node : forward) {
    sol.times_.push_back(node.t);
    sol.values_.push_back(std::move(node.y));
    sol.slopes_.push_back(std::move(node.f));
  }
  return sol;
}

Matrix FundamentalSolution::transfer(double t) const {
  const double slack = 1e-12 * std::max({1.0, std::abs(range_.lo), std::abs(range_.hi)});
  if (!(t >= range_.lo - slack && t <= range_.hi + slack)) {
    std::ostringstream os;
    os << "fundamental solution evaluated at t=" << t << " outside integrated range [" << range_.lo << ", "
       << range_.hi << "]";
    throw DomainError(os.str());
  }
  if (times_.size() == 1) return values_.front();
  t = std::clamp(t, range_.lo, range_.hi);
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = it == times_.begin() ? 0 : std::size_t(it - times_.begin()) - 1;
  i = std::min(i, times_.size() - 2);
  const double h = times_[i + 1] - times_[i];
  const double u = (t - times_[i]) / h;
  if (u == 0.0) return values_[i];
  if (u == 1.0) return values_[i + 1];
  return hermite(u, h, values_[i], slopes_[i], values_[i + 1], slopes_[i + 1]);
}

Matrix FundamentalSolution::propagate(const Matrix& block, double t) const {
  if (block.rows() != 2 * dim()) throw InvalidArgument("propagate: block must have 2m rows");
  return transfer(t) * block;
}

PhaseVector FundamentalSolution::evaluate(const PhaseVector& x0, double t) const {
  if (x0.dim() != dim()) throw InvalidArgument("evaluate: dimension mismatch");
  return PhaseVector::from_stacked(transfer(t) * x0.stacked());
}

Matrix FundamentalSolution::transfer_between(double t1, double t2) const {
  const int m = dim();
  const Matrix j = linalg::symplectic_unit(m);
  // Phi^{-1} = -J Phi^T J for symplectic Phi.
  const Matrix inv1 = -j * transfer(t1).transpose() * j;
  return transfer(t2) * inv1;
}

double FundamentalSolution::symplectic_defect() const {
  double worst = 0.0;
  for (const auto& v : values_) worst = std::max(worst, jacobi::symplectic_defect(v));
  return worst;
}

}  // namespace jacobi

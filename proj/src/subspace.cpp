#include "jacobi/subspace.hpp"

#include "jacobi/error.hpp"
#include "jacobi/linalg.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace jacobi {

const char* to_string(SubspaceClass c) {
  switch (c) {
    case SubspaceClass::General: return "general";
    case SubspaceClass::Isotropic: return "isotropic";
    case SubspaceClass::Lagrangian: return "lagrangian";
  }
  return "general";
}

SubspaceClass subspace_class_from_string(const std::string& s) {
  if (s == "general") return SubspaceClass::General;
  if (s == "isotropic") return SubspaceClass::Isotropic;
  if (s == "lagrangian") return SubspaceClass::Lagrangian;
  throw InvalidArgument("unknown subspace class '" + s + "'");
}

Matrix omega_gram_schmidt(const Matrix& frame, int passes) {
  const int m = int(frame.rows()) / 2;
  const Matrix j = linalg::symplectic_unit(m);
  Matrix f = frame;
  for (int pass = 0; pass < passes; ++pass) {
    for (int c = 1; c < f.cols(); ++c) {
      const double norm_c = f.col(c).norm();
      for (int i = 0; i < c; ++i) {
        // omega(f_i, J f_i) = -|f_i|^2, so adding g/|f_i|^2 J f_i to f_c cancels omega(f_i, f_c) = g.
        const double ni2 = f.col(i).squaredNorm();
        const double g = f.col(i).dot(j * f.col(c));
        f.col(c) += (g / ni2) * (j * f.col(i));
      }
      f.col(c) *= norm_c / f.col(c).norm();
    }
  }
  return f;
}

JacobiSubspace::JacobiSubspace(double anchor, Matrix frame, SubspaceClass declared, const Tolerances& tol)
    : anchor_(anchor), frame_(std::move(frame)), class_(declared) {
  if (frame_.rows() % 2 != 0) throw InvalidArgument("subspace frame must have an even number (2m) of rows");
  const int m = int(frame_.rows()) / 2;
  const int k = int(frame_.cols());
  if (k > 2 * m) throw InvalidArgument("subspace frame has more columns than the phase space dimension");
  if (!frame_.allFinite()) throw InvalidArgument("subspace frame has non-finite entries");
  if (k > 0) {
    Eigen::JacobiSVD<Matrix> svd(frame_);
    const auto& s = svd.singularValues();
    if (!(s(k - 1) > tol.rank * s(0))) throw PreconditionError("subspace frame is rank deficient");
  }
  if (declared == SubspaceClass::Lagrangian && k != m) {
    std::ostringstream os;
    os << "lagrangian subspace must have dimension m=" << m << ", got " << k;
    throw PreconditionError(os.str());
  }
  if (declared != SubspaceClass::General && k > m)
    throw PreconditionError("isotropic subspace cannot exceed dimension m");
  if (declared != SubspaceClass::General) {
    double defect = linalg::isotropy_defect(frame_);
    if (defect > tol.iso) {
      if (defect > 10.0 * tol.iso) {
        std::ostringstream os;
        os << "frame declared " << to_string(declared) << " has omega-Gram defect " << defect << " > "
           << 10.0 * tol.iso;
        throw PreconditionError(os.str());
      }
      frame_ = omega_gram_schmidt(frame_);
      defect = linalg::isotropy_defect(frame_);
      if (defect > tol.iso) throw PreconditionError("omega-Gram-Schmidt correction failed to reach iso_tol");
    }
  }
}

JacobiSubspace JacobiSubspace::vanishing_at(int m, double a) {
  Matrix f = Matrix::Zero(2 * m, m);
  f.bottomRows(m).setIdentity();
  return {a, std::move(f), SubspaceClass::Lagrangian};
}

JacobiSubspace JacobiSubspace::parallel_at(int m, double a) {
  Matrix f = Matrix::Zero(2 * m, m);
  f.topRows(m).setIdentity();
  return {a, std::move(f), SubspaceClass::Lagrangian};
}

JacobiSubspace JacobiSubspace::zero(int m, double a) { return {a, Matrix(2 * m, 0), SubspaceClass::Isotropic}; }

double JacobiSubspace::isotropy_defect() const { return linalg::isotropy_defect(frame_); }

JacobiSubspace JacobiSubspace::reanchored(const FundamentalSolution& sol, double t1) const {
  if (sol.anchor() != anchor_) throw PreconditionError("reanchor: solution anchor differs from subspace anchor");
  Matrix f = sol.propagate(frame_, t1);
  // Rescale columns so that reanchored frames stay O(1) for growing flows.
  for (int c = 0; c < f.cols(); ++c) f.col(c).normalize();
  Tolerances loose;
  loose.iso = 1e-6;
  return {t1, std::move(f), class_, loose};
}

JacobiSubspace omega_complement(const JacobiSubspace& w, const Tolerances& tol) {
  const int m = w.phase_dim();
  const int k = w.rank();
  if (k == 0) return {w.anchor(), Matrix::Identity(2 * m, 2 * m), SubspaceClass::General, tol};
  // W^perp = { x : f_i^T J x = 0 } = ker((J^T F)^T) = ker(F^T J).
  const Matrix constraints = w.frame().transpose() * linalg::symplectic_unit(m);
  Eigen::JacobiSVD<Matrix> svd(constraints, Eigen::ComputeFullV);
  Matrix basis = svd.matrixV().rightCols(2 * m - k);
  SubspaceClass cls = SubspaceClass::General;
  if (k == m && w.declared_class() != SubspaceClass::General) cls = SubspaceClass::Lagrangian;
  Tolerances loose = tol;
  loose.iso = std::max(tol.iso, 1e-6);
  return {w.anchor(), std::move(basis), cls, loose};
}

Matrix phase_evaluation(const JacobiSubspace& w, const FundamentalSolution& sol, double t) {
  if (sol.anchor() != w.anchor()) {
    std::ostringstream os;
    os << "anchor mismatch: subspace anchored at " << w.anchor() << ", solution at " << sol.anchor();
    throw PreconditionError(os.str());
  }
  if (sol.dim() != w.phase_dim()) throw InvalidArgument("subspace and solution dimensions differ");
  return sol.propagate(w.frame(), t);
}

Matrix evaluation_matrix(const JacobiSubspace& w, const FundamentalSolution& sol, double t) {
  return phase_evaluation(w, sol, t).topRows(w.phase_dim());
}

int focal_index(const JacobiSubspace& w, const FundamentalSolution& sol, double t, const Tolerances& tol) {
  const int k = w.rank();
  if (k == 0) return 0;
  const Matrix z = phase_evaluation(w, sol, t);
  const int m = w.phase_dim();
  Eigen::JacobiSVD<Matrix> full(z);
  const double scale = full.singularValues()(0);
  Eigen::JacobiSVD<Matrix> val(z.topRows(m));
  const auto& s = val.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol.rank * scale) ++rank;
  return k - rank;
}

double s_product(const JacobiSubspace& w, const FundamentalSolution& sol, double t, int i, int j) {
  if (i < 0 || j < 0 || i >= w.rank() || j >= w.rank()) throw InvalidArgument("s_product: field index out of range");
  const Matrix z = phase_evaluation(w, sol, t);
  return z.col(i).dot(z.col(j));
}

double min_focal_gap(double curvature_scale) {
  if (curvature_scale < 0.0 || std::isnan(curvature_scale)) throw InvalidArgument("min_focal_gap: negative curvature bound");
  if (curvature_scale == 0.0) return kInfinity;
  return 1.0 / (2.0 * curvature_scale);
}

int intersection_dimension(const JacobiSubspace& a, const JacobiSubspace& b, const Tolerances& tol) {
  if (a.anchor() != b.anchor()) throw PreconditionError("intersection_dimension: frames anchored at different times");
  if (a.phase_dim() != b.phase_dim()) throw InvalidArgument("intersection_dimension: dimension mismatch");
  // Normalize columns so the relative threshold sees both frames at the same scale.
  auto normalized = [](const Matrix& f) {
    return linalg::orthonormal_basis(f, 1e-12);
  };
  Matrix joint(a.frame().rows(), a.rank() + b.rank());
  joint << normalized(a.frame()), normalized(b.frame());
  return a.rank() + b.rank() - linalg::numerical_rank(joint, tol.rank);
}

double containment_residual(const JacobiSubspace& big, const JacobiSubspace& small) {
  if (small.rank() == 0) return 0.0;
  const Matrix q = linalg::orthonormal_basis(big.frame(), 1e-12);
  double worst = 0.0;
  for (int c = 0; c < small.rank(); ++c) {
    const Vector x = small.frame().col(c) / small.frame().col(c).norm();
    worst = std::max(worst, (x - q * (q.transpose() * x)).norm());
  }
  return worst;
}

FundamentalSolution integrate_for(const JacobiSubspace& w, const CurvatureFamily& family, Interval interval,
                                  const Tolerances& tol) {
  return integrate(family, w.anchor(), Interval::hull(interval, w.anchor()), IntegrationOptions::from(tol));
}

}  // namespace jacobi

#pragma once

#include "jacobi/flow.hpp"
#include "jacobi/types.hpp"

namespace jacobi {

enum class SubspaceClass { General, Isotropic, Lagrangian };

const char* to_string(SubspaceClass c);
SubspaceClass subspace_class_from_string(const std::string& s);

/// A k-dimensional subspace W of Jacobi fields, stored as a 2m x k frame of
/// initial conditions (J(t0), J'(t0)) at the anchor time t0.
///
/// Construction validates the frame: full column rank, and for isotropic or
/// Lagrangian classes a normalized omega-Gram below iso_tol. Frames within
/// 10 iso_tol are corrected by an omega-Gram-Schmidt pass; worse ones are
/// rejected with PreconditionError.
class JacobiSubspace {
 public:
  JacobiSubspace(double anchor, Matrix frame, SubspaceClass declared, const Tolerances& tol = {});

  /// Lambda^a: all fields with J(a) = 0, frame [[0], [I]].
  static JacobiSubspace vanishing_at(int m, double a);
  /// Fields with J'(a) = 0 (parallel fields in flat space), frame [[I], [0]].
  static JacobiSubspace parallel_at(int m, double a);
  /// The zero subspace of Jac for dimension m.
  static JacobiSubspace zero(int m, double a);

  double anchor() const { return anchor_; }
  const Matrix& frame() const { return frame_; }
  int rank() const { return int(frame_.cols()); }
  int phase_dim() const { return int(frame_.rows()) / 2; }
  SubspaceClass declared_class() const { return class_; }
  bool is_lagrangian() const { return class_ == SubspaceClass::Lagrangian; }
  /// Measured normalized omega-Gram defect of the frame.
  double isotropy_defect() const;

  /// Same subspace anchored at t1 (frame multiplied by Phi(t0 -> t1)).
  JacobiSubspace reanchored(const FundamentalSolution& sol, double t1) const;

 private:
  double anchor_;
  Matrix frame_;
  SubspaceClass class_;
};

/// Corrects a frame so that its omega-Gram vanishes; the span moves by O(defect).
Matrix omega_gram_schmidt(const Matrix& frame, int passes = 2);

/// W^perp with respect to omega, anchored at the same time.
JacobiSubspace omega_complement(const JacobiSubspace& w, const Tolerances& tol = {});

/// 2m x k block Phi(t0 -> t) F. Requires sol anchored at w's anchor.
Matrix phase_evaluation(const JacobiSubspace& w, const FundamentalSolution& sol, double t);

/// m x k matrix whose columns are J_i(t) for the frame fields.
Matrix evaluation_matrix(const JacobiSubspace& w, const FundamentalSolution& sol, double t);

/// f^W(t) = k - rank W(t), rank relative to the full phase evaluation scale.
int focal_index(const JacobiSubspace& w, const FundamentalSolution& sol, double t, const Tolerances& tol = {});

/// s_t(J_i, J_j) = <J_i(t), J_j(t)> + <J_i'(t), J_j'(t)> on frame fields i, j.
double s_product(const JacobiSubspace& w, const FundamentalSolution& sol, double t, int i, int j);

/// 1 / (2C): no nonzero Jacobi field vanishes twice within this gap when ||R|| <= C^2.
double min_focal_gap(double curvature_scale);

/// dim(A cap B) = rank A + rank B - rank [A | B] for frames at a common anchor.
int intersection_dimension(const JacobiSubspace& a, const JacobiSubspace& b, const Tolerances& tol = {});

/// Residual of projecting small's frame onto span(big), relative to the frame scale.
double containment_residual(const JacobiSubspace& big, const JacobiSubspace& small);

/// Integrates the flow from w's anchor over the hull of the interval and the anchor.
FundamentalSolution integrate_for(const JacobiSubspace& w, const CurvatureFamily& family, Interval interval,
                                  const Tolerances& tol = {});

}  // namespace jacobi

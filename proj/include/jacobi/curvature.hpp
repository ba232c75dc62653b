#pragma once

#include "jacobi/types.hpp"

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace jacobi {

/// c0 + sum_j (cos_j cos(j freq t) + sin_j sin(j freq t)).
struct TrigSeries {
  double c0 = 0.0;
  double freq = 1.0;
  std::vector<double> cos;
  std::vector<double> sin;

  double operator()(double t) const;
  /// Sum of absolute coefficients; bounds |f(t)| for every t.
  double abs_bound() const;
};

struct ConstantCurvature {
  Matrix value;
};

struct DiagonalCurvature {
  std::vector<TrigSeries> entries;
};

/// Matrix-valued trigonometric polynomial c0 + sum_j (C_j cos(j freq t) + S_j sin(j freq t)).
struct FourierCurvature {
  double freq = 1.0;
  Matrix c0;
  std::vector<Matrix> cos;
  std::vector<Matrix> sin;
};

/// Uniform samples t0 + i dt, interpolated entrywise by natural cubic splines.
struct SampledCurvature {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<Matrix> samples;
  std::vector<Matrix> second_derivatives;  // spline moments, filled on construction
};

class CurvatureFamily;

struct SumCurvature {
  std::vector<CurvatureFamily> parts;
};

enum class CurvatureKind { Constant, Diagonal, Fourier, Sampled, Sum };

const char* to_string(CurvatureKind kind);

/// A family R(t) of symmetric endomorphisms of R^m over a closed interval.
///
/// Values are immutable and cheap to copy. Every evaluation is symmetrized, so
/// R(t) == R(t)^T holds exactly. When no norm bound is supplied a bound on
/// sup ||R(t)||_op is estimated at construction (see README for the heuristic).
class CurvatureFamily {
 public:
  using Payload =
      std::variant<ConstantCurvature, DiagonalCurvature, FourierCurvature, SampledCurvature, SumCurvature>;

  static CurvatureFamily constant(const Matrix& value, Interval domain,
                                  std::optional<double> norm_bound = std::nullopt);
  static CurvatureFamily diagonal(std::vector<TrigSeries> entries, Interval domain,
                                  std::optional<double> norm_bound = std::nullopt);
  static CurvatureFamily fourier(FourierCurvature data, Interval domain,
                                 std::optional<double> norm_bound = std::nullopt);
  /// Domain is [t0, t0 + (n-1) dt].
  static CurvatureFamily sampled(double t0, double dt, std::vector<Matrix> samples,
                                 std::optional<double> norm_bound = std::nullopt);
  /// Domain is the intersection of the parts' domains, unless given.
  static CurvatureFamily sum(std::vector<CurvatureFamily> parts,
                             std::optional<Interval> domain = std::nullopt,
                             std::optional<double> norm_bound = std::nullopt);

  int dim() const;
  Interval domain() const;
  CurvatureKind kind() const;
  /// C^2 >= sup_t ||R(t)||_op.
  double norm_bound() const;
  /// C, the square root of norm_bound().
  double curvature_scale() const;
  bool norm_bound_supplied() const;

  /// R(t); throws DomainError outside the domain.
  Matrix operator()(double t) const;

  const Payload& payload() const;

  /// Same family with the domain restricted (analytic kinds) or checked (sampled).
  CurvatureFamily with_domain(Interval domain) const;
  /// factor * R(t), with the norm bound scaled by |factor|.
  CurvatureFamily scaled(double factor) const;

 private:
  struct Impl;
  explicit CurvatureFamily(std::shared_ptr<const Impl> impl);
  static CurvatureFamily make(int dim, Interval domain, Payload payload, std::optional<double> norm_bound);

  std::shared_ptr<const Impl> impl_;
};

/// Largest absolute eigenvalue of a symmetric matrix.
double symmetric_op_norm(const Matrix& s);

}  // namespace jacobi

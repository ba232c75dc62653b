#include "jacobi/curvature.hpp"

#include "jacobi/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace jacobi {

struct CurvatureFamily::Impl {
  int dim = 0;
  Interval domain;
  Payload payload;
  double norm_bound = 0.0;
  bool supplied = false;
};

namespace {

// Relative slack when checking membership in the domain; guards round-off at the ends.
constexpr double kDomainSlack = 1e-12;

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

void require_square(const Matrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << what << ": expected " << dim << "x" << dim << " matrix, got " << m.rows() << "x" << m.cols();
    throw InvalidArgument(os.str());
  }
}

double trig_value(double freq, double t, const std::vector<double>& c, const std::vector<double>& s,
                  double c0) {
  double v = c0;
  for (std::size_t j = 0; j < c.size(); ++j) v += c[j] * std::cos(double(j + 1) * freq * t);
  for (std::size_t j = 0; j < s.size(); ++j) v += s[j] * std::sin(double(j + 1) * freq * t);
  return v;
}

// Natural cubic spline moments for a scalar sequence with uniform spacing.
std::vector<double> spline_moments(const std::vector<double>& y, double dt) {
  const std::size_t n = y.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  // Tridiagonal system: m[i-1] + 4 m[i] + m[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / dt^2.
  const std::size_t k = n - 2;
  std::vector<double> diag(k, 4.0), rhs(k);
  for (std::size_t i = 0; i < k; ++i) rhs[i] = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]) / (dt * dt);
  for (std::size_t i = 1; i < k; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  m[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
  return m;
}

Matrix eval_payload(const CurvatureFamily::Payload& p, int dim, double t);

Matrix eval_sampled(const SampledCurvature& s, double t) {
  const std::size_t n = s.samples.size();
  if (n == 1) return s.samples.front();
  double x = (t - s.t0) / s.dt;
  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 2);
  const double u = x - double(i);  // in [0,1] up to slack
  const double v = 1.0 - u;
  const double h2 = s.dt * s.dt;
  const Matrix& y0 = s.samples[i];
  const Matrix& y1 = s.samples[i + 1];
  const Matrix& m0 = s.second_derivatives[i];
  const Matrix& m1 = s.second_derivatives[i + 1];
  return v * y0 + u * y1 + (h2 / 6.0) * ((v * v * v - v) * m0 + (u * u * u - u) * m1);
}

Matrix eval_payload(const CurvatureFamily::Payload& p, int dim, double t) {
  return std::visit(
      [&](const auto& d) -> Matrix {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantCurvature>) {
          return d.value;
        } else if constexpr (std::is_same_v<T, DiagonalCurvature>) {
          Matrix r = Matrix::Zero(dim, dim);
          for (int i = 0; i < dim; ++i) r(i, i) = d.entries[i](t);
          return r;
        } else if constexpr (std::is_same_v<T, FourierCurvature>) {
          Matrix r = d.c0;
          for (std::size_t j = 0; j < d.cos.size(); ++j) r += std::cos(double(j + 1) * d.freq * t) * d.cos[j];
          for (std::size_t j = 0; j < d.sin.size(); ++j) r += std::sin(double(j + 1) * d.freq * t) * d.sin[j];
          return r;
        } else if constexpr (std::is_same_v<T, SampledCurvature>) {
          return eval_sampled(d, t);
        } else {
          Matrix r = Matrix::Zero(dim, dim);
          for (const auto& part : d.parts) r += part(t);
          return r;
        }
      },
      p);
}

// Rigorous bound for the analytic kinds, +inf where none is cheap.
double analytic_bound(const CurvatureFamily::Payload& p) {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantCurvature>) {
          return symmetric_op_norm(d.value);
        } else if constexpr (std::is_same_v<T, DiagonalCurvature>) {
          double b = 0.0;
          for (const auto& e : d.entries) b = std::max(b, e.abs_bound());
          return b;
        } else if constexpr (std::is_same_v<T, FourierCurvature>) {
          double b = symmetric_op_norm(symmetrize(d.c0));
          for (const auto& c : d.cos) b += symmetric_op_norm(symmetrize(c));
          for (const auto& s : d.sin) b += symmetric_op_norm(symmetrize(s));
          return b;
        } else if constexpr (std::is_same_v<T, SumCurvature>) {
          double b = 0.0;
          for (const auto& part : d.parts) b += part.norm_bound();
          return b;
        } else {
          return kInfinity;
        }
      },
      p);
}

// Period over which sampling a periodic payload is exhaustive; 0 when not periodic.
double payload_period(const CurvatureFamily::Payload& p) {
  if (const auto* f = std::get_if<FourierCurvature>(&p)) return 2.0 * std::numbers::pi / std::abs(f->freq);
  if (const auto* d = std::get_if<DiagonalCurvature>(&p)) {
    // Common period only when all frequencies agree.
    double freq = 0.0;
    for (const auto& e : d->entries) {
      if (e.cos.empty() && e.sin.empty()) continue;
      if (freq == 0.0) freq = std::abs(e.freq);
      else if (std::abs(std::abs(e.freq) - freq) > 1e-15 * freq) return 0.0;
    }
    return freq == 0.0 ? 0.0 : 2.0 * std::numbers::pi / freq;
  }
  return 0.0;
}

}  // namespace

double TrigSeries::operator()(double t) const { return trig_value(freq, t, cos, sin, c0); }

double TrigSeries::abs_bound() const {
  double b = std::abs(c0);
  for (double c : cos) b += std::abs(c);
  for (double s : sin) b += std::abs(s);
  return b;
}

const char* to_string(CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::Constant: return "constant";
    case CurvatureKind::Diagonal: return "diagonal";
    case CurvatureKind::Fourier: return "fourier";
    case CurvatureKind::Sampled: return "sampled";
    case CurvatureKind::Sum: return "sum";
  }
  return "unknown";
}

double symmetric_op_norm(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

CurvatureFamily::CurvatureFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

CurvatureFamily CurvatureFamily::make(int dim, Interval domain, Payload payload,
                                      std::optional<double> norm_bound) {
  if (dim < 0) throw InvalidArgument("curvature family: negative dimension");
  if (!(domain.hi >= domain.lo) || !std::isfinite(domain.lo) || !std::isfinite(domain.hi))
    throw InvalidArgument("curvature family: empty or non-finite domain");
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->domain = domain;
  impl->payload = std::move(payload);
  if (norm_bound) {
    if (!(*norm_bound >= 0.0)) throw InvalidArgument("curvature family: norm_bound must be >= 0");
    impl->norm_bound = *norm_bound;
    impl->supplied = true;
  } else if (std::holds_alternative<ConstantCurvature>(impl->payload)) {
    impl->norm_bound = analytic_bound(impl->payload);
  } else {
    // Dense sampling heuristic: 1000 (b-a) max(1, C_est) points, 10% margin, capped by
    // the rigorous coefficient bound where one exists.
    const double rigorous = analytic_bound(impl->payload);
    Interval window = domain;
    if (const double period = payload_period(impl->payload); period > 0.0 && period < domain.length())
      window.hi = window.lo + period;
    const auto& p = impl->payload;
    auto sample_max = [&](std::size_t count) {
      double best = 0.0;
      for (std::size_t i = 0; i <= count; ++i) {
        const double t = count == 0 ? window.lo : window.lo + window.length() * double(i) / double(count);
        best = std::max(best, symmetric_op_norm(symmetrize(eval_payload(p, dim, t))));
      }
      return best;
    };
    double est = sample_max(64);
    const double c_est = std::sqrt(est);
    const double n = std::clamp(1000.0 * window.length() * std::max(1.0, c_est), 64.0, 200000.0);
    if (const auto* s = std::get_if<SampledCurvature>(&p)) {
      // Nodes plus interior quarter points of every cell.
      double best = symmetric_op_norm(s->samples.back());
      for (std::size_t i = 0; i + 1 < s->samples.size(); ++i)
        for (int q = 0; q < 4; ++q)
          best = std::max(best, symmetric_op_norm(symmetrize(eval_sampled(*s, s->t0 + s->dt * (double(i) + 0.25 * q)))));
      est = best;
    } else {
      est = sample_max(static_cast<std::size_t>(n));
    }
    impl->norm_bound = std::min(rigorous, 1.1 * est);
  }
  return CurvatureFamily(std::move(impl));
}

CurvatureFamily CurvatureFamily::constant(const Matrix& value, Interval domain,
                                          std::optional<double> norm_bound) {
  if (value.rows() != value.cols()) throw InvalidArgument("constant curvature: matrix must be square");
  return make(int(value.rows()), domain, ConstantCurvature{symmetrize(value)}, norm_bound);
}

CurvatureFamily CurvatureFamily::diagonal(std::vector<TrigSeries> entries, Interval domain,
                                          std::optional<double> norm_bound) {
  const int dim = int(entries.size());
  return make(dim, domain, DiagonalCurvature{std::move(entries)}, norm_bound);
}

CurvatureFamily CurvatureFamily::fourier(FourierCurvature data, Interval domain,
                                         std::optional<double> norm_bound) {
  const int dim = int(data.c0.rows());
  require_square(data.c0, dim, "fourier curvature c0");
  if (!(data.freq != 0.0) || !std::isfinite(data.freq)) throw InvalidArgument("fourier curvature: freq must be nonzero");
  data.c0 = symmetrize(data.c0);
  for (auto& c : data.cos) {
    require_square(c, dim, "fourier curvature cos coefficient");
    c = symmetrize(c);
  }
  for (auto& s : data.sin) {
    require_square(s, dim, "fourier curvature sin coefficient");
    s = symmetrize(s);
  }
  return make(dim, domain, std::move(data), norm_bound);
}

CurvatureFamily CurvatureFamily::sampled(double t0, double dt, std::vector<Matrix> samples,
                                         std::optional<double> norm_bound) {
  if (samples.empty()) throw InvalidArgument("sampled curvature: no samples");
  if (samples.size() > 1 && !(dt > 0.0)) throw InvalidArgument("sampled curvature: dt must be positive");
  const int dim = int(samples.front().rows());
  for (auto& s : samples) {
    require_square(s, dim, "sampled curvature sample");
    s = symmetrize(s);
  }
  SampledCurvature data;
  data.t0 = t0;
  data.dt = samples.size() > 1 ? dt : 1.0;
  data.second_derivatives.assign(samples.size(), Matrix::Zero(dim, dim));
  std::vector<double> column(samples.size());
  for (int r = 0; r < dim; ++r) {
    for (int c = r; c < dim; ++c) {
      for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i](r, c);
      const auto m = spline_moments(column, data.dt);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        data.second_derivatives[i](r, c) = m[i];
        data.second_derivatives[i](c, r) = m[i];
      }
    }
  }
  const Interval domain{t0, t0 + data.dt * double(samples.size() - 1)};
  data.samples = std::move(samples);
  return make(dim, domain, std::move(data), norm_bound);
}

CurvatureFamily CurvatureFamily::sum(std::vector<CurvatureFamily> parts, std::optional<Interval> domain,
                                     std::optional<double> norm_bound) {
  if (parts.empty()) throw InvalidArgument("sum curvature: no parts");
  const int dim = parts.front().dim();
  Interval common = parts.front().domain();
  for (const auto& p : parts) {
    if (p.dim() != dim) throw InvalidArgument("sum curvature: parts have different dimensions");
    common.lo = std::max(common.lo, p.domain().lo);
    common.hi = std::min(common.hi, p.domain().hi);
  }
  if (domain) {
    if (!common.contains(*domain)) throw InvalidArgument("sum curvature: domain exceeds a part's domain");
    common = *domain;
  }
  return make(dim, common, SumCurvature{std::move(parts)}, norm_bound);
}

int CurvatureFamily::dim() const { return impl_->dim; }
Interval CurvatureFamily::domain() const { return impl_->domain; }
double CurvatureFamily::norm_bound() const { return impl_->norm_bound; }
double CurvatureFamily::curvature_scale() const { return std::sqrt(impl_->norm_bound); }
bool CurvatureFamily::norm_bound_supplied() const { return impl_->supplied; }
const CurvatureFamily::Payload& CurvatureFamily::payload() const { return impl_->payload; }

CurvatureKind CurvatureFamily::kind() const { return static_cast<CurvatureKind>(impl_->payload.index()); }

Matrix CurvatureFamily::operator()(double t) const {
  const Interval d = impl_->domain;
  const double slack = kDomainSlack * std::max({1.0, std::abs(d.lo), std::abs(d.hi)});
  if (!(t >= d.lo - slack && t <= d.hi + slack)) {
    std::ostringstream os;
    os << "curvature evaluated at t=" << t << " outside domain [" << d.lo << ", " << d.hi << "]";
    throw DomainError(os.str());
  }
  return symmetrize(eval_payload(impl_->payload, impl_->dim, std::clamp(t, d.lo, d.hi)));
}

CurvatureFamily CurvatureFamily::with_domain(Interval domain) const {
  if (kind() == CurvatureKind::Sampled && !impl_->domain.contains(domain))
    throw DomainError("sampled curvature: cannot extend domain beyond the samples");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->domain = domain;
  return CurvatureFamily(std::move(impl));
}

CurvatureFamily CurvatureFamily::scaled(double factor) const {
  auto impl = std::make_shared<Impl>(*impl_);
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantCurvature>) {
          p.value *= factor;
        } else if constexpr (std::is_same_v<T, DiagonalCurvature>) {
          for (auto& e : p.entries) {
            e.c0 *= factor;
            for (double& c : e.cos) c *= factor;
            for (double& c : e.sin) c *= factor;
          }
        } else if constexpr (std::is_same_v<T, FourierCurvature>) {
          p.c0 *= factor;
          for (auto& a : p.cos) a *= factor;
          for (auto& a : p.sin) a *= factor;
        } else if constexpr (std::is_same_v<T, SampledCurvature>) {
          for (auto& a : p.samples) a *= factor;
          for (auto& a : p.second_derivatives) a *= factor;
        } else {
          for (auto& part : p.parts) part = part.scaled(factor);
        }
      },
      impl->payload);
  impl->norm_bound *= std::abs(factor);
  return CurvatureFamily(std::move(impl));
}

}  // namespace jacobi

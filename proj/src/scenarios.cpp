#include "jacobi/scenarios.hpp"

#include "jacobi/error.hpp"
#include "jacobi/linalg.hpp"
#include "jacobi/wilking.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <sstream>

namespace jacobi {

namespace {

Matrix random_symmetric(int m, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = u(rng);
  return 0.5 * scale * (a + a.transpose());
}

// Appends `count` columns to `frame`, each drawn from the omega-complement of the
// current span and orthogonal to it. Returns false on a degenerate draw.
bool grow_isotropic(Matrix& frame, int count, std::mt19937_64& rng) {
  const int m = int(frame.rows()) / 2;
  const Matrix j = linalg::symplectic_unit(m);
  std::normal_distribution<double> g;
  for (int step = 0; step < count; ++step) {
    const int k = int(frame.cols());
    Matrix basis;
    if (k == 0) {
      basis = Matrix::Identity(2 * m, 2 * m);
    } else {
      // Vectors x with omega(f_i, x) = 0 for all columns, and orthogonal to the span.
      Matrix constraints(2 * k, 2 * m);
      const Matrix q = linalg::orthonormal_basis(frame, 1e-12);
      constraints << frame.transpose() * j, q.transpose();
      Eigen::JacobiSVD<Matrix> svd(constraints, Eigen::ComputeFullV);
      const int r = linalg::numerical_rank(constraints, 1e-10);
      basis = svd.matrixV().rightCols(2 * m - r);
    }
    if (basis.cols() == 0) return false;
    Vector c(basis.cols());
    for (int i = 0; i < c.size(); ++i) c(i) = g(rng);
    Vector v = basis * c;
    const double n = v.norm();
    if (!(n > 1e-6)) return false;
    frame.conservativeResize(Eigen::NoChange, k + 1);
    frame.col(k) = v / n;
  }
  return true;
}

JacobiSubspace random_isotropic_impl(int m, int k, std::mt19937_64& rng, double anchor) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix frame(2 * m, 0);
    if (!grow_isotropic(frame, k, rng)) continue;
    if (linalg::isotropy_defect(frame) > 1e-10) continue;
    return {anchor, std::move(frame), k == m ? SubspaceClass::Lagrangian : SubspaceClass::Isotropic};
  }
  throw NumericalError("random_isotropic: repeated degenerate draws");
}

}  // namespace

bool Scenario::has_subspace(const std::string& key) const {
  for (const auto& [n, s] : subspaces)
    if (n == key) return true;
  return false;
}

const JacobiSubspace& Scenario::subspace(const std::string& key) const {
  for (const auto& [n, s] : subspaces)
    if (n == key) return s;
  std::ostringstream os;
  os << "scenario '" << name << "' has no subspace '" << key << "' (available:";
  for (const auto& [n, s] : subspaces) os << ' ' << n;
  os << ')';
  throw InvalidArgument(os.str());
}

void Scenario::set_subspace(const std::string& key, JacobiSubspace s) {
  if (s.phase_dim() != family.dim()) throw InvalidArgument("subspace dimension does not match the family");
  for (auto& [n, existing] : subspaces) {
    if (n == key) {
      existing = std::move(s);
      return;
    }
  }
  subspaces.emplace_back(key, std::move(s));
}

void validate_oracle(const Scenario& s) {
  if (!s.oracle) return;
  const ScenarioOracle& o = *s.oracle;
  if (o.focal_times.size() != o.multiplicities.size())
    throw InvalidArgument("oracle: focal_times and multiplicities differ in length");
  if (!o.focal_times.empty()) {
    const JacobiSubspace& w = s.subspace(o.subspace);
    for (std::size_t i = 0; i < o.focal_times.size(); ++i) {
      if (!s.family.domain().contains(o.focal_times[i])) throw InvalidArgument("oracle: focal time outside the domain");
      if (o.multiplicities[i] < 1 || o.multiplicities[i] > w.rank())
        throw InvalidArgument("oracle: multiplicity exceeds the subspace dimension");
    }
  }
  if (o.reduced_curvature) {
    const JacobiSubspace& w = s.subspace(o.reduced_base);
    if (o.reduced_curvature->rows() != w.phase_dim() - w.rank())
      throw InvalidArgument("oracle: reduced curvature has the wrong dimension");
  }
}

Scenario constant_curvature(int m, double kappa, Interval domain) {
  if (m < 1) throw InvalidArgument("constant_curvature: m must be positive");
  if (!(domain.length() > 0.0)) throw InvalidArgument("constant_curvature: empty domain");
  const double anchor = domain.contains(0.0) ? 0.0 : domain.lo;
  std::ostringstream name;
  name << "constant(m=" << m << ", kappa=" << kappa << ")";
  Scenario s{name.str(), CurvatureFamily::constant(kappa * Matrix::Identity(m, m), domain), {}, {}, {}};
  s.set_subspace("Lambda0", JacobiSubspace::vanishing_at(m, anchor));
  s.set_subspace("Parallel0", JacobiSubspace::parallel_at(m, anchor));
  ScenarioOracle o;
  o.subspace = "Lambda0";
  if (kappa > 0.0) {
    const double period = std::numbers::pi / std::sqrt(kappa);
    const int below = int(std::floor((anchor - domain.lo) / period));
    const int above = int(std::floor((domain.hi - anchor) / period));
    for (int j = -below; j <= above; ++j) {
      if (j == 0) continue;
      o.focal_times.push_back(anchor + j * period);
      o.multiplicities.push_back(m);
    }
  }
  s.oracle = std::move(o);
  validate_oracle(s);
  return s;
}

Scenario hopf_scenario(Interval domain) {
  if (!domain.contains(0.0)) throw InvalidArgument("hopf_scenario: domain must contain 0");
  Scenario s{"hopf", CurvatureFamily::constant(Matrix::Identity(2, 2), domain), {}, {}, {}};
  Matrix vertical(4, 1);
  vertical << 1, 0, 0, 1;
  Matrix lambda(4, 2);
  lambda << 1, 0,
            0, 0,
            0, 0,
            1, 1;
  s.set_subspace("vertical", JacobiSubspace(0.0, vertical, SubspaceClass::Isotropic));
  s.set_subspace("lambda", JacobiSubspace(0.0, lambda, SubspaceClass::Lagrangian));
  s.set_subspace("Lambda0", JacobiSubspace::vanishing_at(2, 0.0));
  ScenarioOracle o;
  o.subspace = "lambda";
  // ind_lambda: the quotient field sin(2t)/2 vanishes at multiples of pi/2; J_v never vanishes.
  for (int j = int(std::ceil(domain.lo / (std::numbers::pi / 2))); j * std::numbers::pi / 2 <= domain.hi; ++j) {
    if (j == 0) continue;
    o.focal_times.push_back(j * std::numbers::pi / 2);
    o.multiplicities.push_back(1);
  }
  o.reduced_curvature = Matrix::Constant(1, 1, 4.0);
  o.reduced_base = "vertical";
  o.reduced_lagrangian = "lambda";
  o.reduced_focal_times = o.focal_times;
  s.oracle = std::move(o);
  validate_oracle(s);
  return s;
}

std::vector<std::string> builtin_scenario_names() { return {"sphere", "flat", "hyperbolic", "hopf", "explosion"}; }

Scenario builtin_scenario(const std::string& name) {
  if (name == "sphere") {
    Scenario s = constant_curvature(2, 1.0, {-1.0, 12.0});
    s.name = "sphere";
    return s;
  }
  if (name == "flat") {
    Scenario s = constant_curvature(2, 0.0, {-1.0, 20.0});
    s.name = "flat";
    return s;
  }
  if (name == "hyperbolic") {
    Scenario s = constant_curvature(2, -1.0, {-1.0, 20.0});
    s.name = "hyperbolic";
    return s;
  }
  if (name == "hopf") return hopf_scenario();
  if (name == "explosion") {
    Scenario s{"explosion", CurvatureFamily::constant(Matrix::Identity(2, 2), {-1.0, 1.0}), {}, {}, {}};
    Matrix w(4, 1);
    w << 0, 0, 0, 1;
    s.set_subspace("W", JacobiSubspace(0.0, w, SubspaceClass::Isotropic));
    for (int n : {5, 10, 20, 40}) {
      Matrix wn(4, 1);
      wn << 1.0 / n, 0, 0, 1;
      s.set_subspace("W" + std::to_string(n), JacobiSubspace(0.0, wn, SubspaceClass::Isotropic));
    }
    return s;
  }
  std::ostringstream os;
  os << "unknown built-in scenario '" << name << "' (known:";
  for (const auto& n : builtin_scenario_names()) os << ' ' << n;
  os << ')';
  throw InvalidArgument(os.str());
}

CurvatureFamily random_family(const RandomFamilyOptions& opts, std::uint64_t seed) {
  if (opts.m < 1) throw InvalidArgument("random_family: m must be positive");
  if (opts.harmonics < 0) throw InvalidArgument("random_family: negative harmonic budget");
  std::mt19937_64 rng(seed);
  FourierCurvature f;
  f.freq = opts.freq;
  f.c0 = random_symmetric(opts.m, rng, opts.amplitude) + opts.shift * Matrix::Identity(opts.m, opts.m);
  for (int j = 1; j <= opts.harmonics; ++j) {
    const double decay = opts.amplitude / double(j * j);
    f.cos.push_back(random_symmetric(opts.m, rng, decay));
    f.sin.push_back(random_symmetric(opts.m, rng, decay));
  }
  return CurvatureFamily::fourier(std::move(f), opts.domain);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

JacobiSubspace random_isotropic(int m, int k, std::uint64_t seed, double anchor) {
  if (m < 1 || k < 0 || k > m) throw InvalidArgument("random_isotropic: need 0 <= k <= m");
  if (k == 0) return JacobiSubspace::zero(m, anchor);
  std::mt19937_64 rng(seed);
  return random_isotropic_impl(m, k, rng, anchor);
}

JacobiSubspace random_lagrangian(int m, std::uint64_t seed, double anchor) {
  if (m < 1) throw InvalidArgument("random_lagrangian: m must be positive");
  std::mt19937_64 rng(seed);
  return random_isotropic_impl(m, m, rng, anchor);
}

JacobiSubspace extend_to_lagrangian(const JacobiSubspace& w, std::mt19937_64& rng) {
  const int m = w.phase_dim();
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix frame = w.frame();
    if (!grow_isotropic(frame, m - w.rank(), rng)) continue;
    return {w.anchor(), std::move(frame), SubspaceClass::Lagrangian, Tolerances{.iso = 1e-6}};
  }
  throw NumericalError("extend_to_lagrangian: repeated degenerate draws");
}

ExplosionReport index_explosion_experiment(const std::vector<double>& n_list, double delta, double limit_n,
                                           const Tolerances& tol) {
  if (!(delta > 0.0 && delta < std::numbers::pi)) throw InvalidArgument("explosion: delta must lie in (0, pi)");
  const Interval interval{0.0, delta};
  const auto family = CurvatureFamily::constant(Matrix::Identity(2, 2), {-1.0, delta + 1.0});
  const FundamentalSolution sol = integrate(family, 0.0, family.domain(), IntegrationOptions::from(tol));

  auto field = [](double inv_n) {
    Matrix f(4, 1);
    f << inv_n, 0, 0, 1;
    return JacobiSubspace(0.0, f, SubspaceClass::Isotropic);
  };
  auto sup_norm = [](const TransversalSystem& sys) {
    double sup = 0.0;
    for (double t : sys.times) sup = std::max(sup, symmetric_op_norm(sys.reduced(t)));
    return sup;
  };

  ExplosionReport out;
  out.delta = delta;
  out.ind_w = index(field(0.0), sol, interval, tol);
  for (double n : n_list) {
    if (!(n > 0.0)) throw InvalidArgument("explosion: n must be positive");
    const JacobiSubspace wn = field(1.0 / n);
    ExplosionRow row;
    row.n = n;
    row.ind_wn = index(wn, sol, interval, tol);
    // The bump of R^{H_n} has width about 1/n; resolve it with a few dozen nodes.
    const double spacing = std::min(0.005, 0.02 / n);
    row.sup_norm = sup_norm(build_transversal(wn, sol, interval, tol, spacing));
    row.closed_form = 1.0 + 3.0 * n * n;
    out.rows.push_back(row);
  }
  out.increasing = !out.rows.empty();
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (!(out.rows[i].sup_norm > out.rows[i - 1].sup_norm)) out.increasing = false;

  // Away from the W-focal time 0 the reduced curvature of W_n approaches R^H of W.
  out.limit_n = limit_n;
  out.limit_interval = {delta / 2.0, delta};
  const TransversalSystem limit = build_transversal(field(1.0 / limit_n), sol, out.limit_interval, tol);
  const TransversalSystem base = build_transversal(field(0.0), sol, out.limit_interval, tol);
  for (std::size_t i = 0; i < limit.times.size(); ++i) {
    const double t = limit.times[i];
    out.limit_error = std::max(out.limit_error, (limit.reduced(t) - base.reduced(t)).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace jacobi

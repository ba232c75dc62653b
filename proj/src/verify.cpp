#include "jacobi/verify.hpp"

#include "jacobi/error.hpp"
#include "jacobi/linalg.hpp"

#include <Eigen/SVD>

#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace jacobi {

namespace {

constexpr double kLooseIso = 1e-6;

int trial_dim(const SuiteOptions& o, int i, int min_m = 1) {
  if (o.dim > 0) return o.dim;
  return min_m + i % (5 - min_m);
}

Interval widened(Interval i, double margin) { return {i.lo - margin, i.hi + margin}; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

Matrix vanishing_frame(int m) {
  Matrix f = Matrix::Zero(2 * m, m);
  f.bottomRows(m).setIdentity();
  return f;
}

// Lambda^a expressed in the chart anchored at sol.anchor().
JacobiSubspace vanishing_in_chart(const FundamentalSolution& sol, double a) {
  Matrix f = sol.transfer_between(a, sol.anchor()) * vanishing_frame(sol.dim());
  for (int c = 0; c < f.cols(); ++c) f.col(c).normalize();
  return {sol.anchor(), std::move(f), SubspaceClass::Lagrangian, Tolerances{.iso = kLooseIso}};
}

void finalize(VerifyReport& r) {
  r.trials = int(r.trial_results.size());
  r.violations = 0;
  r.errors = 0;
  for (const auto& t : r.trial_results) {
    if (t.contains("error")) ++r.errors;
    else if (t.contains("holds") && !t["holds"].get<bool>()) ++r.violations;
  }
  r.passed = r.trials > 0 && r.violations == 0 && r.errors == 0;
}

Json suite_parameters(const SuiteOptions& o) {
  return {{"trials", o.trials},
          {"dim", o.dim},
          {"seed", o.seed},
          {"interval", {o.interval.lo, o.interval.hi}},
          {"tolerances", tolerances_to_json(o.tol)}};
}

IndexBoundCheck index_bound_on(const FundamentalSolution& sol, const JacobiSubspace& l1, const JacobiSubspace& l2,
                               Interval interval, const Tolerances& tol) {
  IndexBoundCheck c;
  c.ind1 = index(l1, sol, interval, tol);
  c.ind2 = index(l2, sol, interval, tol);
  c.intersection = intersection_dimension(l1, l2, tol);
  c.bound = l1.phase_dim() - c.intersection;
  c.holds = std::abs(c.ind1 - c.ind2) <= c.bound;
  return c;
}

// A random Lagrangian's index stays away from numerical trouble when its endpoints are
// clearly non-focal: the value block keeps relative singular values above `margin`.
bool clearly_nonfocal(const JacobiSubspace& l, const FundamentalSolution& sol, double t, double margin) {
  const Matrix z = phase_evaluation(l, sol, t);
  const double scale = Eigen::JacobiSVD<Matrix>(z).singularValues()(0);
  const auto s = Eigen::JacobiSVD<Matrix>(z.topRows(l.phase_dim())).singularValues();
  return s(s.size() - 1) > margin * scale;
}

Json taylor_trial(const FundamentalSolution& sol, double c, std::mt19937_64& rng, const Tolerances& tol) {
  const int m = sol.dim();
  const Interval dom = sol.range();
  const double gap = std::min(min_focal_gap(c), 0.5 * dom.length());
  // Log-uniform separation over three decades below the gap.
  const double delta = 0.999 * gap * std::pow(10.0, -3.0 * uniform(rng, 0.0, 1.0));
  double t_minus = uniform(rng, dom.lo, dom.hi);
  double t_plus = t_minus + (uniform(rng, 0.0, 1.0) < 0.5 ? delta : -delta);
  if (!dom.contains(t_plus)) t_plus = 2.0 * t_minus - t_plus;
  if (!dom.contains(t_plus)) {
    t_minus = dom.lo;
    t_plus = dom.lo + delta;
  }
  const double dt = t_plus - t_minus;
  const double ad = std::abs(dt);

  const Vector u = gaussian(rng, m);
  Vector x0 = Vector::Zero(2 * m);
  x0.tail(m) = u;
  const Vector x = sol.transfer_between(t_minus, t_plus) * x0;
  const Vector j = x.head(m), jd = x.tail(m);
  // Round-off allowance: relative accuracy of the propagated field.
  const double lhs = (j - dt * jd).norm();
  const double rhs = c * jd.norm() * dt * dt;
  const double slack = 1e-8 * (j.norm() + ad * jd.norm());
  bool holds = lhs <= rhs + slack;
  Json out{{"t_minus", t_minus}, {"t_plus", t_plus}, {"taylor_lhs", lhs}, {"taylor_rhs", rhs},
           {"taylor_ratio", rhs > 0.0 ? lhs / rhs : 0.0}};

  if (m >= 2) {
    // J+ vanishes at t+ with J+'(t+) = v orthogonal to J-(t+), so omega(J-, J+) = <J-(t+), v> = 0.
    Vector v = gaussian(rng, m);
    const Vector jn = j / j.norm();
    v -= jn * jn.dot(v);
    const double isotropy = std::abs(j.dot(v)) / (j.norm() * v.norm());
    const double olhs = std::abs(jd.dot(v));
    const double orhs = c * ad * u.norm() * v.norm();
    const double oslack = 1e-8 * jd.norm() * v.norm();
    const bool oholds = olhs <= orhs + oslack && isotropy <= tol.iso;
    out["orthogonality_lhs"] = olhs;
    out["orthogonality_rhs"] = orhs;
    out["pair_isotropy"] = isotropy;
    holds = holds && oholds;
  }
  out["holds"] = holds;
  return out;
}

std::vector<double> numbers_param(const Json& p, const char* key, std::vector<double> fallback) {
  if (!p.contains(key)) return fallback;
  const Json& j = p[key];
  if (!j.is_array()) throw InvalidArgument(std::string("parameter '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidArgument(std::string("parameter '") + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

template <class T>
T param(const Json& p, const char* key, T fallback) {
  if (!p.contains(key) || p[key].is_null()) return fallback;
  try {
    return p[key].get<T>();
  } catch (const Json::exception&) {
    throw InvalidArgument(std::string("parameter '") + key + "' has the wrong type");
  }
}

Interval interval_param(const Json& p, Interval fallback) {
  if (!p.contains("interval")) return fallback;
  const auto v = numbers_param(p, "interval", {});
  if (v.size() != 2 || !(v[1] > v[0])) throw InvalidArgument("parameter 'interval' must be [a, b] with a < b");
  return {v[0], v[1]};
}

SuiteOptions suite_from(const Json& p, const Tolerances& tol, int trials, Interval interval) {
  SuiteOptions o;
  o.trials = param(p, "trials", trials);
  o.dim = param(p, "dim", 0);
  o.seed = param<std::uint64_t>(p, "seed", 1);
  o.interval = interval_param(p, interval);
  o.jobs = param(p, "jobs", 0);
  o.tol = tol;
  if (o.trials < 1) throw InvalidArgument("parameter 'trials' must be positive");
  if (o.dim < 0) throw InvalidArgument("parameter 'dim' must be non-negative");
  return o;
}

// Combines sub-reports into one, keeping each as a named detail.
VerifyReport combine(const std::string& check, const std::vector<std::pair<std::string, VerifyReport>>& parts) {
  VerifyReport r;
  r.check = check;
  r.passed = !parts.empty();
  for (const auto& [name, part] : parts) {
    r.trials += part.trials;
    r.violations += part.violations;
    r.errors += part.errors;
    r.passed = r.passed && part.passed;
    r.details[name] = part.to_json();
  }
  return r;
}

}  // namespace

Json VerifyReport::to_json() const {
  Json j{{"check", check},     {"passed", passed},   {"trials", trials},
         {"violations", violations}, {"errors", errors}, {"details", details}};
  if (!trial_results.empty()) j["trial_results"] = trial_results;
  return j;
}

std::vector<Json> run_trials(int n, int jobs, const std::function<Json(int)>& fn) {
  std::vector<Json> results(std::size_t(std::max(n, 0)));
  if (n <= 0) return results;
  int workers = jobs > 0 ? jobs : int(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        Json r = fn(i);
        r["trial"] = i;
        results[std::size_t(i)] = std::move(r);
      } catch (const std::exception& e) {
        results[std::size_t(i)] = Json{{"trial", i}, {"error", e.what()}};
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return results;
}

IndexBoundCheck check_index_bound(const CurvatureFamily& family, const JacobiSubspace& l1, const JacobiSubspace& l2,
                                  Interval interval, const Tolerances& tol) {
  if (l1.anchor() != l2.anchor()) throw PreconditionError("index bound: Lagrangians must share an anchor");
  if (l1.rank() != l1.phase_dim() || l2.rank() != l2.phase_dim())
    throw PreconditionError("index bound: both subspaces must be Lagrangian");
  const FundamentalSolution sol = integrate_for(l1, family, interval, tol);
  return index_bound_on(sol, l1, l2, interval, tol);
}

VerifyReport verify_index_bound(const SuiteOptions& o) {
  VerifyReport r;
  r.check = "bound";
  r.trial_results = run_trials(o.trials, o.jobs, [&](int i) {
    const int m = trial_dim(o, i);
    const std::uint64_t s = derive_seed(o.seed, std::uint64_t(i));
    std::mt19937_64 rng(s);
    RandomFamilyOptions fo;
    fo.m = m;
    fo.shift = 1.0;
    fo.domain = widened(o.interval, 1.0);
    const CurvatureFamily family = random_family(fo, s);
    const double anchor = o.interval.lo;
    const FundamentalSolution sol = integrate(family, anchor, o.interval, IntegrationOptions::from(o.tol));

    const int variant = i % 4;
    JacobiSubspace l1 = random_lagrangian(m, derive_seed(s, 1), anchor);
    std::optional<JacobiSubspace> l2;
    int shared = 0;
    if (variant == 1) {
      // Lambda2 shares a random isotropic subspace of Lambda1.
      shared = std::uniform_int_distribution<int>(1, m)(rng);
      Matrix mix(m, shared);
      for (int c = 0; c < shared; ++c) mix.col(c) = gaussian(rng, m);
      const JacobiSubspace common(anchor, l1.frame() * mix, SubspaceClass::Isotropic, Tolerances{.iso = kLooseIso});
      l2 = extend_to_lagrangian(common, rng);
    } else if (variant == 2) {
      l1 = vanishing_in_chart(sol, uniform(rng, o.interval.lo, o.interval.hi));
      l2 = random_lagrangian(m, derive_seed(s, 2), anchor);
    } else if (variant == 3) {
      Matrix mix = Matrix::Identity(m, m);
      for (int c = 0; c < m; ++c) mix.col(c) += 0.5 * gaussian(rng, m);
      l2 = JacobiSubspace(anchor, l1.frame() * mix, SubspaceClass::Lagrangian, Tolerances{.iso = kLooseIso});
    } else {
      l2 = random_lagrangian(m, derive_seed(s, 2), anchor);
    }
    const IndexBoundCheck c = index_bound_on(sol, l1, *l2, o.interval, o.tol);
    return Json{{"m", m},           {"variant", variant},         {"forced_shared", shared},
                {"ind1", c.ind1},   {"ind2", c.ind2},             {"intersection", c.intersection},
                {"bound", c.bound}, {"slack", c.bound - std::abs(c.ind1 - c.ind2)}, {"holds", c.holds}};
  });
  finalize(r);
  std::map<int, int> slack;
  for (const auto& t : r.trial_results)
    if (t.contains("slack")) ++slack[t["slack"].get<int>()];
  Json hist = Json::object();
  for (const auto& [k, v] : slack) hist[std::to_string(k)] = v;
  r.details = {{"parameters", suite_parameters(o)}, {"slack_histogram", hist}};
  return r;
}

VerifyReport verify_decomposition(const SuiteOptions& o) {
  VerifyReport r;
  r.check = "decomposition";
  r.trial_results = run_trials(o.trials, o.jobs, [&](int i) {
    const int m = trial_dim(o, i);
    const std::uint64_t s = derive_seed(o.seed, std::uint64_t(i));
    std::mt19937_64 rng(s);
    RandomFamilyOptions fo;
    fo.m = m;
    fo.shift = 1.0;
    fo.domain = widened(o.interval, 1.0);
    const CurvatureFamily family = random_family(fo, s);
    const int k = std::uniform_int_distribution<int>(0, m)(rng);
    const double anchor = uniform(rng, o.interval.lo, o.interval.hi);
    const JacobiSubspace w = k > 0 ? random_isotropic(m, k, derive_seed(s, 1), anchor) : JacobiSubspace::zero(m, anchor);
    const JacobiSubspace lam = extend_to_lagrangian(w, rng);
    const DecompositionResult d = check_decomposition(w, lam, family, o.interval, o.tol);
    Json out = decomposition_to_json(d);
    out["m"] = m;
    out["k"] = k;
    out["holds"] = d.equal;
    return out;
  });
  finalize(r);
  double worst = 0.0;
  for (const auto& t : r.trial_results)
    if (t.contains("parallelism_residual")) worst = std::max(worst, t["parallelism_residual"].get<double>());
  r.details = {{"parameters", suite_parameters(o)}, {"max_parallelism_residual", worst}};
  return r;
}

VerifyReport verify_semicontinuity(const CurvatureFamily& family, const JacobiSubspace& w,
                                   const CurvatureFamily& perturbation, const std::vector<double>& deltas,
                                   Interval interval, double threshold, const Tolerances& tol) {
  if (w.rank() > w.phase_dim() || w.isotropy_defect() > 10.0 * tol.iso)
    throw PreconditionError("semicontinuity: W must be isotropic");
  if (perturbation.dim() != family.dim()) throw InvalidArgument("semicontinuity: perturbation dimension differs");
  const FundamentalSolution base = integrate_for(w, family, interval, tol);
  const int ind_w = index(w, base, interval, tol);
  const int fa = focal_index(w, base, interval.lo, tol);
  const int fb = focal_index(w, base, interval.hi, tol);
  const bool lagrangian = w.rank() == w.phase_dim();

  VerifyReport r;
  r.check = "semicontinuity";
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double delta = deltas[i];
    Json entry{{"trial", int(i)}, {"delta", delta}};
    try {
      const CurvatureFamily perturbed =
          delta == 0.0 ? family : CurvatureFamily::sum({family, perturbation.scaled(delta)}, family.domain());
      const FundamentalSolution sol = integrate_for(w, perturbed, interval, tol);
      const int ind = index(w, sol, interval, tol);
      const int da = focal_index(w, sol, interval.lo, tol);
      const int db = focal_index(w, sol, interval.hi, tol);
      const bool endpoints_match = da == fa && db == fb;
      entry["ind"] = ind;
      entry["focal_at_lo"] = da;
      entry["focal_at_hi"] = db;
      entry["endpoints_match"] = endpoints_match;
      if (delta > threshold) {
        entry["asserted"] = "none";
      } else if (lagrangian && endpoints_match) {
        entry["asserted"] = "equality";
        entry["holds"] = ind == ind_w;
      } else {
        entry["asserted"] = "inequality";
        entry["holds"] = ind <= ind_w;
      }
    } catch (const std::exception& e) {
      entry["error"] = e.what();
    }
    r.trial_results.push_back(std::move(entry));
  }
  finalize(r);
  r.details = {{"ind_w", ind_w},
               {"focal_at_lo", fa},
               {"focal_at_hi", fb},
               {"lagrangian", lagrangian},
               {"threshold", threshold},
               {"interval", {interval.lo, interval.hi}}};
  return r;
}

VerifyReport verify_explosion(const std::vector<double>& n_list, double delta, const Tolerances& tol) {
  VerifyReport r;
  r.check = "explosion";
  const ExplosionReport e = index_explosion_experiment(n_list, delta, 1e4, tol);
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    const auto& row = e.rows[i];
    Json t{{"trial", int(i)},
           {"n", row.n},
           {"ind_wn", row.ind_wn},
           {"sup_norm", row.sup_norm},
           {"closed_form_sup", row.closed_form}};
    if (row.n >= 5.0) t["holds"] = row.ind_wn < e.ind_w;
    r.trial_results.push_back(std::move(t));
  }
  finalize(r);
  const bool limit_ok = e.limit_error <= 1e-4;
  r.details = {{"delta", e.delta},
               {"ind_w", e.ind_w},
               {"sup_increasing", e.increasing},
               {"limit_n", e.limit_n},
               {"limit_interval", {e.limit_interval.lo, e.limit_interval.hi}},
               {"limit_error", e.limit_error},
               {"limit_ok", limit_ok}};
  r.passed = r.passed && e.increasing && limit_ok;
  return r;
}

VerifyReport verify_conjugate_monotonicity(const CurvatureFamily& family, double a, double b,
                                           const std::vector<double>& a_bars, const Tolerances& tol) {
  if (!(b > a)) throw InvalidArgument("conjugate monotonicity: need a < b");
  const int m = family.dim();
  {
    const FundamentalSolution sol = integrate(family, a, {a, b}, IntegrationOptions::from(tol));
    if (focal_index(JacobiSubspace::vanishing_at(m, a), sol, b, tol) < 1) {
      std::ostringstream os;
      os << "conjugate monotonicity: " << b << " is not conjugate to " << a;
      throw PreconditionError(os.str());
    }
  }
  VerifyReport r;
  r.check = "conjugate-monotonic";
  for (std::size_t i = 0; i < a_bars.size(); ++i) {
    const double ab = a_bars[i];
    Json entry{{"trial", int(i)}, {"a_bar", ab}};
    try {
      if (ab > a) throw InvalidArgument("conjugate monotonicity: a_bar must not exceed a");
      const FundamentalSolution sol = integrate(family, ab, {ab, b}, IntegrationOptions::from(tol));
      const IndexReport rep = locate_focal_points(JacobiSubspace::vanishing_at(m, ab), sol, {a, b}, tol);
      std::optional<double> found;
      for (const auto& ev : rep.events) {
        if (std::abs(ev.time - ab) > 10.0 * tol.loc) {
          found = ev.time;
          break;
        }
      }
      entry["b_bar"] = found ? Json(*found) : Json(nullptr);
      entry["holds"] = found.has_value();
    } catch (const std::exception& e) {
      entry["error"] = e.what();
    }
    r.trial_results.push_back(std::move(entry));
  }
  finalize(r);
  r.details = {{"a", a}, {"b", b}};
  return r;
}

VerifyReport verify_conjugate_pairs(const SuiteOptions& o) {
  VerifyReport r;
  r.check = "conjugate-pairs";
  r.trial_results = run_trials(o.trials, o.jobs, [&](int i) {
    const int m = trial_dim(o, i);
    const std::uint64_t s = derive_seed(o.seed, std::uint64_t(i));
    std::mt19937_64 rng(s);
    RandomFamilyOptions fo;
    fo.m = m;
    fo.shift = 1.5;
    fo.amplitude = 0.5;
    fo.domain = {o.interval.lo - 1.5, o.interval.hi};
    const CurvatureFamily family = random_family(fo, s);
    const double a = uniform(rng, o.interval.lo, o.interval.lo + 1.0);
    const FundamentalSolution sol = integrate(family, a, {a, o.interval.hi}, IntegrationOptions::from(o.tol));
    const IndexReport rep = locate_focal_points(JacobiSubspace::vanishing_at(m, a), sol, {a, o.interval.hi}, o.tol);
    std::optional<double> b;
    for (const auto& ev : rep.events) {
      if (ev.time > a + 10.0 * o.tol.loc) {
        b = ev.time;
        break;
      }
    }
    if (!b) throw NumericalError("no point conjugate to a in the interval; widen the interval");
    std::vector<double> a_bars{a};
    for (int j = 0; j < 4; ++j) a_bars.push_back(uniform(rng, a - 1.0, a));
    const VerifyReport inner = verify_conjugate_monotonicity(family, a, *b, a_bars, o.tol);
    Json b_bars = Json::array();
    for (const auto& t : inner.trial_results) b_bars.push_back(t.value("b_bar", Json(nullptr)));
    Json out{{"m", m}, {"a", a}, {"b", *b}, {"a_bars", a_bars}, {"b_bars", b_bars}, {"holds", inner.passed}};
    if (inner.errors > 0) throw NumericalError("focal detection failed for some a_bar");
    return out;
  });
  finalize(r);
  r.details = {{"parameters", suite_parameters(o)}};
  return r;
}

VerifyReport verify_no_conjugate_focal_bound(const CurvatureFamily& family, const SuiteOptions& o) {
  const Interval interval = o.interval;
  const Interval domain = family.domain();
  if (!domain.contains(interval)) throw InvalidArgument("no-conjugate bound: interval outside the family domain");
  const int m = family.dim();
  const Tolerances& tol = o.tol;
  const auto iopts = IntegrationOptions::from(tol);

  // Certification: no Lambda^a has a focal point other than a on the interval.
  const double spacing = std::min(min_focal_gap(family.curvature_scale()) / 2.0, interval.length() / 8.0);
  const int cells = int(std::ceil(interval.length() / spacing));
  std::vector<double> anchors;
  for (int i = 0; i <= cells; ++i) anchors.push_back(std::min(interval.hi, interval.lo + spacing * i));
  const std::vector<Json> cert = run_trials(int(anchors.size()), o.jobs, [&](int i) {
    const double a = anchors[std::size_t(i)];
    const FundamentalSolution sol = integrate(family, a, interval, iopts);
    const IndexReport rep = locate_focal_points(JacobiSubspace::vanishing_at(m, a), sol, interval, tol);
    Json conj = Json::array();
    for (const auto& ev : rep.events)
      if (std::abs(ev.time - a) > 10.0 * tol.loc) conj.push_back(ev.time);
    return Json{{"anchor", a}, {"conjugate_times", conj}};
  });
  for (const auto& c : cert) {
    if (c.contains("error")) throw NumericalError("certification failed: " + c["error"].get<std::string>());
    if (!c["conjugate_times"].empty()) {
      std::ostringstream os;
      os << "family has conjugate points: " << c["conjugate_times"][0].get<double>() << " is conjugate to "
         << c["anchor"].get<double>();
      throw PreconditionError(os.str());
    }
  }

  VerifyReport r;
  r.check = "no-conjugate-bound";
  const double t_star = interval.lo;
  const FundamentalSolution sol = integrate(family, t_star, {domain.lo, interval.hi}, iopts);
  r.trial_results = run_trials(o.trials, o.jobs, [&](int i) {
    const JacobiSubspace l = random_lagrangian(m, derive_seed(o.seed, std::uint64_t(i)), t_star);
    const int ind = index(l, sol, interval, tol);
    return Json{{"ind", ind}, {"holds", ind <= m}};
  });

  // Lambda^infinity: anchors t* - 2^j marching to the lower end of the domain, frames moved
  // to t*, and the tail cluster within Grassmann distance 1e-6 of the last frame.
  std::vector<double> marching;
  for (double step = 1.0; t_star - step > domain.lo; step *= 2.0) marching.push_back(t_star - step);
  marching.push_back(domain.lo);
  std::vector<Matrix> frames;
  for (double a : marching)
    frames.push_back(linalg::orthonormal_basis(sol.transfer_between(a, t_star) * vanishing_frame(m), 1e-12));
  std::size_t cluster = 1;
  double radius = 0.0;
  while (cluster < frames.size()) {
    const double d = linalg::grassmann_distance(frames[frames.size() - 1 - cluster], frames.back());
    if (d > 1e-6) break;
    radius = std::max(radius, d);
    ++cluster;
  }
  Json limit{{"anchors", marching}, {"cluster_size", cluster}, {"cluster_radius", radius}};
  bool limit_ok = false;
  if (cluster >= 2) {
    const JacobiSubspace l_inf(t_star, frames.back(), SubspaceClass::Lagrangian, Tolerances{.iso = kLooseIso});
    const int ind_inf = index(l_inf, sol, interval, tol);
    limit["index"] = ind_inf;
    limit["frame"] = matrix_to_json(frames.back());
    limit_ok = ind_inf == 0;
  } else {
    limit["index"] = nullptr;
    limit["note"] = "no convergent tail: the domain does not extend far enough below the interval";
  }
  finalize(r);
  int max_index = 0;
  for (const auto& t : r.trial_results)
    if (t.contains("ind")) max_index = std::max(max_index, t["ind"].get<int>());
  r.details = {{"parameters", suite_parameters(o)},
               {"certification_anchors", int(anchors.size())},
               {"conjugate_free", true},
               {"max_index", max_index},
               {"lambda_infinity", limit}};
  r.passed = r.passed && limit_ok;
  return r;
}

VerifyReport verify_taylor_estimates(const CurvatureFamily& family, int trials, std::uint64_t seed,
                                     const Tolerances& tol, int jobs) {
  const Interval dom = family.domain();
  const FundamentalSolution sol = integrate(family, dom.midpoint(), dom, IntegrationOptions::from(tol));
  const double c = family.curvature_scale();
  VerifyReport r;
  r.check = "estimates";
  r.trial_results = run_trials(trials, jobs, [&](int i) {
    std::mt19937_64 rng(derive_seed(seed, std::uint64_t(i)));
    return taylor_trial(sol, c, rng, tol);
  });
  finalize(r);
  r.details = {{"curvature_scale", c}, {"seed", seed}};
  return r;
}

VerifyReport verify_taylor_suite(const SuiteOptions& o) {
  VerifyReport r;
  r.check = "estimates";
  r.trial_results = run_trials(o.trials, o.jobs, [&](int i) {
    const int m = trial_dim(o, i);
    const std::uint64_t s = derive_seed(o.seed, std::uint64_t(i));
    std::mt19937_64 rng(s);
    RandomFamilyOptions fo;
    fo.m = m;
    fo.shift = uniform(rng, -1.0, 1.0);
    fo.domain = {-2.0, 2.0};
    const CurvatureFamily family = random_family(fo, s);
    const FundamentalSolution sol = integrate(family, 0.0, fo.domain, IntegrationOptions::from(o.tol));
    Json out = taylor_trial(sol, family.curvature_scale(), rng, o.tol);
    out["m"] = m;
    return out;
  });
  finalize(r);
  double worst = 0.0;
  for (const auto& t : r.trial_results)
    if (t.contains("taylor_ratio")) worst = std::max(worst, t["taylor_ratio"].get<double>());
  r.details = {{"parameters", suite_parameters(o)}, {"max_taylor_ratio", worst}};
  return r;
}

VerifyReport verify_omega_constancy(const SuiteOptions& o) {
  VerifyReport r;
  r.check = "omega";
  r.trial_results = run_trials(o.trials, o.jobs, [&](int i) {
    const int m = trial_dim(o, i);
    const std::uint64_t s = derive_seed(o.seed, std::uint64_t(i));
    std::mt19937_64 rng(s);
    RandomFamilyOptions fo;
    fo.m = m;
    fo.shift = uniform(rng, -1.0, 1.0);
    fo.domain = {-3.0, 3.0};
    const CurvatureFamily family = random_family(fo, s);
    const FundamentalSolution sol = integrate(family, 0.0, fo.domain, IntegrationOptions::from(o.tol));
    const Vector p = gaussian(rng, 2 * m), q = gaussian(rng, 2 * m);
    const double w0 = omega(p, q);
    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
      const Matrix phi = sol.transfer(uniform(rng, fo.domain.lo, fo.domain.hi));
      const Vector pt = phi * p, qt = phi * q;
      worst = std::max(worst, std::abs(omega(pt, qt) - w0) / std::max(1.0, pt.norm() * qt.norm()));
    }
    const double defect = sol.symplectic_defect();
    return Json{{"m", m}, {"omega_deviation", worst}, {"symplectic_defect", defect},
                {"holds", worst <= o.tol.sympl && defect <= o.tol.sympl}};
  });
  finalize(r);
  r.details = {{"parameters", suite_parameters(o)}};
  return r;
}

VerifyReport verify_maslov_consistency(const SuiteOptions& o) {
  VerifyReport r;
  r.check = "maslov";
  r.trial_results = run_trials(o.trials, o.jobs, [&](int i) {
    const int m = trial_dim(o, i);
    const std::uint64_t s = derive_seed(o.seed, std::uint64_t(i));
    std::mt19937_64 rng(s);
    RandomFamilyOptions fo;
    fo.m = m;
    fo.shift = 1.0;
    fo.domain = widened(o.interval, 1.0);
    const CurvatureFamily family = random_family(fo, s);
    const JacobiSubspace l = random_lagrangian(m, derive_seed(s, 1), o.interval.lo);
    const FundamentalSolution sol = integrate(family, o.interval.lo, o.interval, IntegrationOptions::from(o.tol));
    const double quarter = 0.25 * o.interval.length();
    double a = uniform(rng, o.interval.lo, o.interval.lo + quarter);
    double b = uniform(rng, o.interval.hi - quarter, o.interval.hi);
    for (int tries = 0; !clearly_nonfocal(l, sol, a, 1e-3); ++tries) {
      if (tries > 50) throw NumericalError("could not find a non-focal left endpoint");
      a += 0.01;
    }
    for (int tries = 0; !clearly_nonfocal(l, sol, b, 1e-3); ++tries) {
      if (tries > 50) throw NumericalError("could not find a non-focal right endpoint");
      b -= 0.01;
    }
    const Interval iv{a, b};
    const MaslovResult mr = maslov_index(l, sol, iv, o.tol);
    const int wind = winding_index(l, sol, iv, o.tol);
    const int ind = index(l, sol, iv, o.tol);
    double min_eig = kInfinity;
    for (const auto& c : mr.crossings)
      for (double e : c.eigenvalues) min_eig = std::min(min_eig, e);
    const bool positive = mr.crossings.empty() || min_eig > 1e-6;
    return Json{{"m", m},
                {"interval", {a, b}},
                {"maslov", mr.index},
                {"winding", wind},
                {"index", ind},
                {"crossings", int(mr.crossings.size())},
                {"min_crossing_eigenvalue", mr.crossings.empty() ? Json(nullptr) : Json(min_eig)},
                {"holds", mr.index == wind && wind == ind && positive}};
  });
  finalize(r);
  r.details = {{"parameters", suite_parameters(o)}};
  return r;
}

VerifyReport verify_builtin_defects(const Tolerances& tol) {
  VerifyReport r;
  r.check = "defects";
  int i = 0;
  for (const auto& name : builtin_scenario_names()) {
    const Scenario s = builtin_scenario(name);
    std::vector<double> anchors;
    for (const auto& [key, w] : s.subspaces)
      if (std::find(anchors.begin(), anchors.end(), w.anchor()) == anchors.end()) anchors.push_back(w.anchor());
    for (double a : anchors) {
      Json entry{{"trial", i++}, {"scenario", name}, {"anchor", a}};
      try {
        const FundamentalSolution sol = integrate(s.family, a, s.family.domain(), IntegrationOptions::from(tol));
        const double d = sol.symplectic_defect();
        entry["symplectic_defect"] = d;
        entry["holds"] = d <= tol.sympl;
      } catch (const std::exception& e) {
        entry["error"] = e.what();
      }
      r.trial_results.push_back(std::move(entry));
    }
  }
  finalize(r);
  return r;
}

std::vector<std::string> check_names() {
  return {"bound", "decomposition", "semicontinuity", "conjugate-monotonic", "no-conjugate-bound",
          "estimates", "omega", "maslov", "defects"};
}

VerifyReport run_check(const std::string& name, const Scenario* scenario, const Json& params) {
  const Json p = params.is_null() ? Json::object() : params;
  if (!p.is_object()) throw InvalidArgument("verify parameters must be a JSON object");
  Tolerances tol = scenario ? scenario->tolerances : Tolerances{};
  if (p.contains("tolerances")) tol = tolerances_from_json(p["tolerances"], tol, "tolerances");
  constexpr double pi = std::numbers::pi;
  VerifyReport r;

  if (name == "bound") {
    if (scenario && p.contains("subspace") && p.contains("other")) {
      const Interval iv = interval_param(p, scenario->family.domain());
      const JacobiSubspace& l1 = scenario->subspace(p["subspace"].get<std::string>());
      const JacobiSubspace& l2 = scenario->subspace(p["other"].get<std::string>());
      const IndexBoundCheck c = check_index_bound(scenario->family, l1, l2, iv, tol);
      r.check = name;
      r.trial_results.push_back({{"trial", 0}, {"ind1", c.ind1}, {"ind2", c.ind2}, {"intersection", c.intersection},
                                 {"bound", c.bound}, {"holds", c.holds}});
      finalize(r);
    } else {
      r = verify_index_bound(suite_from(p, tol, 100, {0.0, 6.0}));
    }
  } else if (name == "decomposition") {
    if (scenario) {
      const std::string wn = param<std::string>(p, "subspace", "vertical");
      const std::string ln = param<std::string>(p, "lagrangian", "lambda");
      const Interval iv = interval_param(p, scenario->family.domain());
      const DecompositionResult d =
          check_decomposition(scenario->subspace(wn), scenario->subspace(ln), scenario->family, iv, tol);
      r.check = name;
      Json t = decomposition_to_json(d);
      t["trial"] = 0;
      t["holds"] = d.equal;
      r.trial_results.push_back(t);
      finalize(r);
    } else {
      r = verify_decomposition(suite_from(p, tol, 100, {0.0, 6.0}));
    }
  } else if (name == "semicontinuity") {
    const std::vector<double> deltas = numbers_param(p, "deltas", {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    const double threshold = param(p, "threshold", 1e-2);
    if (scenario) {
      const JacobiSubspace& w = scenario->subspace(param<std::string>(p, "subspace", "Lambda0"));
      const int m = scenario->family.dim();
      const Matrix s = p.contains("perturbation") ? matrix_from_json(p["perturbation"], "perturbation")
                                                  : Matrix(Matrix::Identity(m, m));
      const auto pert = CurvatureFamily::constant(s, scenario->family.domain());
      r = verify_semicontinuity(scenario->family, w, pert, deltas, interval_param(p, scenario->family.domain()),
                                threshold, tol);
    } else {
      const Scenario sphere = constant_curvature(2, 1.0, {-1.0, 12.0});
      const auto pert = CurvatureFamily::constant(Matrix::Identity(2, 2), sphere.family.domain());
      const VerifyReport lag = verify_semicontinuity(sphere.family, sphere.subspace("Lambda0"), pert, deltas,
                                                     interval_param(p, {0.1, 3.2 * pi}), threshold, tol);
      const VerifyReport exp = verify_explosion(numbers_param(p, "n_list", {5, 10, 20, 40}), param(p, "delta", 0.4), tol);
      r = combine(name, {{"lagrangian", lag}, {"explosion", exp}});
    }
  } else if (name == "conjugate-monotonic") {
    if (scenario) {
      const double a = param(p, "a", scenario->family.domain().lo);
      if (!p.contains("b")) throw InvalidArgument("conjugate-monotonic needs parameter 'b' with a scenario");
      const double b = p["b"].get<double>();
      std::vector<double> a_bars = numbers_param(p, "a_bars", {});
      if (a_bars.empty()) {
        std::mt19937_64 rng(param<std::uint64_t>(p, "seed", 1));
        const double lo = std::max(scenario->family.domain().lo, a - 1.0);
        a_bars.push_back(a);
        for (int i = 0; i < 19; ++i) a_bars.push_back(uniform(rng, lo, a));
      }
      r = verify_conjugate_monotonicity(scenario->family, a, b, a_bars, tol);
    } else {
      const auto unit = CurvatureFamily::constant(Matrix::Identity(1, 1), {-2.0, 4.0});
      std::vector<double> a_bars{0.0, -0.3};
      std::mt19937_64 rng(param<std::uint64_t>(p, "seed", 1));
      for (int i = 0; i < 18; ++i) a_bars.push_back(uniform(rng, -1.0, 0.0));
      const VerifyReport fixed = verify_conjugate_monotonicity(unit, 0.0, pi, a_bars, tol);
      const VerifyReport pairs = verify_conjugate_pairs(suite_from(p, tol, 20, {0.0, 6.0}));
      r = combine(name, {{"constant", fixed}, {"random_pairs", pairs}});
    }
  } else if (name == "no-conjugate-bound") {
    if (scenario) {
      r = verify_no_conjugate_focal_bound(scenario->family, suite_from(p, tol, 100, scenario->family.domain()));
    } else {
      const int m = param(p, "dim", 2);
      SuiteOptions o = suite_from(p, tol, 100, {0.0, 20.0});
      o.dim = m;
      const auto flat = CurvatureFamily::constant(Matrix::Zero(m, m), {-1e8, o.interval.hi});
      const auto hyper = CurvatureFamily::constant(-Matrix::Identity(m, m), {o.interval.lo - 30.0, o.interval.hi});
      r = combine(name, {{"flat", verify_no_conjugate_focal_bound(flat, o)},
                         {"hyperbolic", verify_no_conjugate_focal_bound(hyper, o)}});
    }
  } else if (name == "estimates") {
    if (scenario) {
      r = verify_taylor_estimates(scenario->family, param(p, "trials", 500), param<std::uint64_t>(p, "seed", 1), tol,
                                  param(p, "jobs", 0));
    } else {
      r = verify_taylor_suite(suite_from(p, tol, 500, {-2.0, 2.0}));
    }
  } else if (name == "omega") {
    r = verify_omega_constancy(suite_from(p, tol, 500, {-3.0, 3.0}));
  } else if (name == "maslov") {
    r = verify_maslov_consistency(suite_from(p, tol, 100, {0.0, 6.0}));
  } else if (name == "defects") {
    r = verify_builtin_defects(tol);
  } else {
    std::ostringstream os;
    os << "unknown check '" << name << "' (known:";
    for (const auto& n : check_names()) os << ' ' << n;
    os << ')';
    throw InvalidArgument(os.str());
  }

  r.details["parameters_in"] = p;
  r.details["parameters_in"].erase("jobs");
  r.details["tolerances"] = tolerances_to_json(tol);
  Json inputs = p;
  inputs.erase("jobs");
  r.details["scenario_hash"] =
      scenario ? scenario_hash(*scenario) : content_hash(Json{{"check", name}, {"params", inputs}});
  return r;
}

}  // namespace jacobi

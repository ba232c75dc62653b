// Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "jacobi/scenario_io.hpp"
#include "jacobi/verify.hpp"
#include "jacobi/wilking.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace jacobi;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string summary(const VerifyReport& r) {
  std::ostringstream os;
  os << r.check << " " << (r.trials - r.violations - r.errors) << "/" << r.trials << " (violations "
     << r.violations << ", errors " << r.errors << ")";
  return os.str();
}

Outcome sphere_events() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = constant_curvature(2, 1.0, {-1.0, 12.0});
  const auto& l = s.subspace("Lambda0");
  const Interval iv{0.1, 3.2 * pi};
  const IndexReport r = locate_focal_points(l, integrate_for(l, s.family, iv, s.tolerances), iv, s.tolerances);
  const double elapsed = seconds_since(t0);
  bool ok = r.events.size() == 3 && r.total == 6 && elapsed < 1.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < r.events.size() && j < 3; ++j) {
    worst = std::max(worst, std::abs(r.events[j].time - (j + 1) * pi));
    ok = ok && r.events[j].multiplicity == 2;
  }
  ok = ok && worst <= 1e-6;
  std::ostringstream os;
  os << r.events.size() << " events, total " << r.total << ", max |dt| " << worst << ", " << elapsed << " s";
  return {ok, os.str()};
}

Outcome hopf_reduction() {
  const Scenario h = hopf_scenario();
  const auto& w = h.subspace(h.oracle->reduced_base);
  const Interval iv{0.0, pi};
  const FundamentalSolution sol = integrate_for(w, h.family, iv, h.tolerances);
  const TransversalSystem sys = build_transversal(w, sol, iv, h.tolerances);
  double sup = 0.0;
  const Matrix expected = *h.oracle->reduced_curvature;
  for (int i = 0; i <= 2000; ++i) {
    const double t = pi * i / 2000.0;
    sup = std::max(sup, (sys.reduced(t) - expected).cwiseAbs().maxCoeff());
  }
  const Scenario reduced = transversal_scenario(sys, std::nullopt, h.tolerances);
  const auto& l0 = reduced.subspace("Lambda0");
  const Interval inner{0.1, pi - 0.1};
  const IndexReport r = locate_focal_points(l0, integrate_for(l0, reduced.family, iv, h.tolerances), inner,
                                            h.tolerances);
  const bool focal_ok = r.events.size() == 1 && std::abs(r.events[0].time - pi / 2) <= 1e-6;
  std::ostringstream os;
  os << "sup |R^H - 4| = " << sup << ", Lambda0 events in (0, pi):";
  for (const auto& e : r.events) os << " " << e.time;
  return {sup <= 1e-6 && focal_ok, os.str()};
}

Outcome timed_suite(const std::function<VerifyReport()>& run, double limit_seconds = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  const VerifyReport r = run();
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << summary(r) << ", " << elapsed << " s";
  const bool in_time = limit_seconds <= 0.0 || elapsed < limit_seconds;
  return {r.passed && in_time, os.str()};
}

Outcome combined(const std::vector<VerifyReport>& reports) {
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    ok = ok && reports[i].passed;
    os << (i ? "; " : "") << summary(reports[i]);
  }
  return {ok, os.str()};
}

Outcome semicontinuity_and_explosion() {
  const VerifyReport r = run_check("semicontinuity", nullptr, Json::object());
  const ExplosionReport e = index_explosion_experiment({5, 10, 20, 40});
  std::ostringstream os;
  os << summary(r) << "; ind_W " << e.ind_w << ", ind_Wn";
  bool drop = true;
  for (const auto& row : e.rows) {
    os << " " << row.ind_wn;
    drop = drop && row.ind_wn < e.ind_w;
  }
  os << ", sup |R^Hn|";
  for (const auto& row : e.rows) os << " " << row.sup_norm;
  return {r.passed && drop && e.increasing, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 closed-form focal detection", sphere_events},
      {"2 Hopf transversal reduction", hopf_reduction},
      {"3 index decomposition, 100 trials",
       [] { return timed_suite([] { return run_check("decomposition", nullptr, {{"trials", 100}}); }, 60.0); }},
      {"4 index-difference bound, 500 trials",
       [] { return timed_suite([] { return run_check("bound", nullptr, {{"trials", 500}}); }); }},
      {"5 Maslov consistency, 100 trials",
       [] { return timed_suite([] { return run_check("maslov", nullptr, {{"trials", 100}}); }); }},
      {"6 semicontinuity and index explosion", semicontinuity_and_explosion},
      {"7 conjugate monotonicity and no-conjugate bound",
       [] {
         return combined({run_check("conjugate-monotonic", nullptr, Json::object()),
                          run_check("no-conjugate-bound", nullptr, {{"trials", 100}})});
       }},
      {"8 structural invariants",
       [] {
         return combined({run_check("defects", nullptr, Json::object()),
                          run_check("omega", nullptr, {{"trials", 500}}),
                          run_check("estimates", nullptr, {{"trials", 500}})});
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("[%s] %s: %s\n", o.passed ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

#pragma once

#include "jacobi/scenario_io.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace jacobi {

/// Outcome of one verification run. Theorem checks are exact integer assertions:
/// any violation, and any trial whose focal detection throws, fails the report.
struct VerifyReport {
  std::string check;
  bool passed = false;
  int trials = 0;
  int violations = 0;
  int errors = 0;
  Json details = Json::object();
  std::vector<Json> trial_results;  ///< ordered by trial id

  Json to_json() const;
};

/// Shared settings of the randomized suites.
struct SuiteOptions {
  int trials = 100;
  int dim = 0;                 ///< 0 cycles m through 1..4 (2..4 where m >= 2 is needed)
  std::uint64_t seed = 1;
  Interval interval{0.0, 6.0};
  int jobs = 0;                ///< 0 uses the hardware concurrency
  Tolerances tol;
};

/// Runs fn(i) for i in [0, n) on `jobs` threads and returns the results in order of i.
/// An exception in a trial becomes {"trial": i, "error": message}.
std::vector<Json> run_trials(int n, int jobs, const std::function<Json(int)>& fn);

struct IndexBoundCheck {
  int ind1 = 0;
  int ind2 = 0;
  int intersection = 0;
  int bound = 0;   ///< m - dim(Lambda1 cap Lambda2)
  bool holds = false;
};

/// |ind_{L1} - ind_{L2}| <= m - dim(L1 cap L2) on the interval.
IndexBoundCheck check_index_bound(const CurvatureFamily& family, const JacobiSubspace& l1, const JacobiSubspace& l2,
                                  Interval interval, const Tolerances& tol = {});

/// Random family and two random Lagrangians per trial; every fourth trial forces a shared
/// subspace of random dimension, and some use Lambda^a for one side.
VerifyReport verify_index_bound(const SuiteOptions& opts);

/// Random family, isotropic W of random dimension 0..m and a random Lagrangian containing it.
VerifyReport verify_decomposition(const SuiteOptions& opts);

/// ind_{W_delta} for R + delta S with the same frame of W. For delta <= threshold asserts
/// ind_W >= ind_{W_delta}, and equality when W is Lagrangian with matching endpoint focal indices.
VerifyReport verify_semicontinuity(const CurvatureFamily& family, const JacobiSubspace& w,
                                   const CurvatureFamily& perturbation, const std::vector<double>& deltas,
                                   Interval interval, double threshold = 1e-2, const Tolerances& tol = {});

/// Index explosion: strict drop ind_{W_n} < ind_W, increasing sup ||R^{H_n}||, and the
/// limit check away from the W-focal time within 1e-4.
VerifyReport verify_explosion(const std::vector<double>& n_list, double delta = 0.4, const Tolerances& tol = {});

/// For a conjugate pair (a, b) and each a_bar <= a, finds a Lambda^{a_bar}-focal time in [a, b].
/// Throws PreconditionError when b is not Lambda^a-focal.
VerifyReport verify_conjugate_monotonicity(const CurvatureFamily& family, double a, double b,
                                           const std::vector<double>& a_bars, const Tolerances& tol = {});

/// Randomized conjugate pairs: random family, b the first Lambda^a-focal time after a,
/// and five random a_bar in [a - 1, a] per pair.
VerifyReport verify_conjugate_pairs(const SuiteOptions& opts);

/// Certifies the family conjugate-free on the interval (anchors min_focal_gap / 2 apart),
/// then checks ind_Lambda <= m for random Lagrangians and ind_{Lambda^infinity} = 0 for the
/// limit of Lambda^a as a marches geometrically towards the lower end of the domain.
VerifyReport verify_no_conjugate_focal_bound(const CurvatureFamily& family, const SuiteOptions& opts);

/// Taylor estimate ||J(t+) - (t+ - t-) J'(t+)|| <= C ||J'(t+)|| (t+ - t-)^2 for fields vanishing
/// at t-, and for m >= 2 the near-orthogonality |<J-'(t+), J+'(t+)>| <= C |t+ - t-| ||J-'(t-)|| ||J+'(t+)||.
VerifyReport verify_taylor_estimates(const CurvatureFamily& family, int trials, std::uint64_t seed,
                                     const Tolerances& tol = {}, int jobs = 0);
/// verify_taylor_estimates over a fresh random family per trial.
VerifyReport verify_taylor_suite(const SuiteOptions& opts);

/// omega(Phi p, Phi q) = omega(p, q) along random flows.
VerifyReport verify_omega_constancy(const SuiteOptions& opts);

/// maslov_index = winding_index = index on random Lagrangians with non-focal endpoints,
/// and every crossing form positive definite.
VerifyReport verify_maslov_consistency(const SuiteOptions& opts);

/// Normalized symplectic defect of every built-in scenario's flow.
VerifyReport verify_builtin_defects(const Tolerances& tol = {});

/// Names understood by run_check.
std::vector<std::string> check_names();

/// Dispatches a named check with JSON parameters (trials, dim, seed, interval, jobs, ...).
/// `scenario` may be null for the randomized suites.
VerifyReport run_check(const std::string& name, const Scenario* scenario, const Json& params);

}  // namespace jacobi

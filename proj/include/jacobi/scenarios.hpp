#pragma once

#include "jacobi/subspace.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace jacobi {

/// Closed-form expectations attached to a built-in scenario.
struct ScenarioOracle {
  std::string subspace;               ///< subspace the focal times refer to
  std::vector<double> focal_times;    ///< expected focal times other than the anchor
  std::vector<int> multiplicities;
  std::optional<Matrix> reduced_curvature;  ///< constant R^H of `reduced_base`, if known
  std::string reduced_base;
  std::string reduced_lagrangian;
  std::vector<double> reduced_focal_times;
};

struct Scenario {
  std::string name;
  CurvatureFamily family;
  std::vector<std::pair<std::string, JacobiSubspace>> subspaces;
  std::optional<ScenarioOracle> oracle;
  Tolerances tolerances;

  bool has_subspace(const std::string& key) const;
  /// Throws InvalidArgument naming the available subspaces.
  const JacobiSubspace& subspace(const std::string& key) const;
  void set_subspace(const std::string& key, JacobiSubspace s);
};

/// Throws InvalidArgument unless oracle times lie in the domain and multiplicities fit the subspace.
void validate_oracle(const Scenario& s);

/// R = kappa I on the domain, with Lambda0 (fields vanishing at the anchor) and Parallel0.
/// The anchor is 0 when the domain contains it, else the domain's lower end.
Scenario constant_curvature(int m, double kappa, Interval domain);

/// Normal Jacobi system of a horizontal great circle in the unit 3-sphere:
/// m = 2, R = I, vertical field J_v(t) = (cos t, sin t) and the Lagrangian
/// span{J_v, J_h} with J_h(t) = (0, sin t).
Scenario hopf_scenario(Interval domain = {-1.0, 4.0});

/// Names accepted by builtin_scenario: "sphere", "flat", "hyperbolic", "hopf", "explosion".
std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

struct RandomFamilyOptions {
  int m = 2;
  int harmonics = 3;       ///< smoothness budget: highest harmonic, coefficients decay like 1/j^2
  double amplitude = 1.0;
  double shift = 0.0;      ///< added to the constant term as shift * I
  double freq = 1.0;
  Interval domain{-10.0, 10.0};
};

/// Deterministic random Fourier family with symmetric coefficients.
CurvatureFamily random_family(const RandomFamilyOptions& opts, std::uint64_t seed);

/// Independent stream seed for trial `stream` of a suite seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Random isotropic subspace of dimension k (k = 0 gives the zero subspace), grown from the omega-complement.
JacobiSubspace random_isotropic(int m, int k, std::uint64_t seed, double anchor);
JacobiSubspace random_lagrangian(int m, std::uint64_t seed, double anchor);
/// Random Lagrangian containing the isotropic W; W's frame columns come first.
JacobiSubspace extend_to_lagrangian(const JacobiSubspace& w, std::mt19937_64& rng);

struct ExplosionRow {
  double n = 0.0;
  int ind_wn = 0;
  double sup_norm = 0.0;       ///< measured sup ||R^{H_n}|| on [0, delta]
  double closed_form = 0.0;    ///< 1 + 3 n^2
};

struct ExplosionReport {
  double delta = 0.4;
  int ind_w = 0;
  std::vector<ExplosionRow> rows;
  bool increasing = false;     ///< sup_norm strictly increasing along the rows
  double limit_n = 0.0;
  Interval limit_interval;
  double limit_error = 0.0;    ///< sup |R^{H_n} - R^H| on limit_interval for n = limit_n
};

/// m = 2, R = I. W spans the field with J(0) = 0, J'(0) = e2; W_n the field with
/// J(0) = e1 / n, J'(0) = e2. Reports ind_W, ind_{W_n} and sup ||R^{H_n}|| on [0, delta].
ExplosionReport index_explosion_experiment(const std::vector<double>& n_list, double delta = 0.4,
                                           double limit_n = 1e4, const Tolerances& tol = {});

}  // namespace jacobi

#pragma once

#include "jacobi/maslov.hpp"
#include "jacobi/scenarios.hpp"
#include "jacobi/wilking.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace jacobi {

using Json = nlohmann::json;

/// Matrices are written as arrays of rows.
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j, const std::string& path);

Json tolerances_to_json(const Tolerances& tol);
/// Overrides the fields present in j; unknown keys are schema errors.
Tolerances tolerances_from_json(const Json& j, Tolerances base, const std::string& path = "tolerances");
/// name is one of sympl, step, rank, iso, loc, frame.
void set_tolerance(Tolerances& tol, const std::string& name, double value);

Json curvature_to_json(const CurvatureFamily& family);
CurvatureFamily curvature_from_json(const Json& j, Interval domain, const std::string& path = "curvature");

/// Scenario file: {"version": 1, "name", "dim", "domain": [a, b], "curvature": {...},
/// "norm_bound", "tolerances", "subspaces": [{"name", "anchor_t", "class", "frame"}], "oracle"}.
Json scenario_to_json(const Scenario& s);
/// Throws SchemaError naming the offending field path.
Scenario scenario_from_json(const Json& j);
/// Parses text; syntax errors report line and column.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string content_hash(const Json& j);
std::string scenario_hash(const Scenario& s);

Json index_report_to_json(const IndexReport& r);
/// time,multiplicity,localization_radius
std::string index_report_csv(const IndexReport& r);
Json maslov_to_json(const MaslovResult& r);
Json decomposition_to_json(const DecompositionResult& d);

/// The reduced system as a scenario: sampled family on the system's interval, its Lambda0
/// anchored at the lower end, and the projected quotient Lagrangian when given.
Scenario transversal_scenario(const TransversalSystem& sys, const std::optional<JacobiSubspace>& quotient,
                              const Tolerances& tol);
/// t, then E(t) entries row by row.
std::string frames_csv(const TransversalSystem& sys);
/// t, then the (m - k) x k matrix of A row by row.
std::string oneill_csv(const TransversalSystem& sys);

}  // namespace jacobi

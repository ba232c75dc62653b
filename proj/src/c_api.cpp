#include "jacobi/jacobi_c.h"

#include "jacobi/error.hpp"
#include "jacobi/scenario_io.hpp"
#include "jacobi/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

struct jacobi_scenario {
  jacobi::Scenario scenario;
};

namespace {

thread_local std::string last_error;

jacobi_status status_of(jacobi::ErrorCode c) {
  switch (c) {
    case jacobi::ErrorCode::InvalidArgument: return JACOBI_ERR_INVALID_ARGUMENT;
    case jacobi::ErrorCode::Schema: return JACOBI_ERR_SCHEMA;
    case jacobi::ErrorCode::Domain: return JACOBI_ERR_DOMAIN;
    case jacobi::ErrorCode::Numerical: return JACOBI_ERR_NUMERICAL;
    case jacobi::ErrorCode::Precondition: return JACOBI_ERR_PRECONDITION;
    default: return JACOBI_ERR_INTERNAL;
  }
}

template <class F>
jacobi_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return JACOBI_OK;
  } catch (const jacobi::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const jacobi::Json::exception& e) {
    last_error = std::string("invalid JSON: ") + e.what();
    return JACOBI_ERR_SCHEMA;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return JACOBI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return JACOBI_ERR_INTERNAL;
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw jacobi::InvalidArgument(std::string(what) + " must not be NULL");
}

jacobi::Interval interval_of(double lo, double hi) {
  if (!(hi >= lo)) throw jacobi::InvalidArgument("interval requires lo <= hi");
  return {lo, hi};
}

}  // namespace

extern "C" {

const char* jacobi_version(void) { return "1.0.0"; }

const char* jacobi_last_error(void) { return last_error.c_str(); }

const char* jacobi_status_name(jacobi_status status) {
  switch (status) {
    case JACOBI_OK: return "ok";
    case JACOBI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case JACOBI_ERR_SCHEMA: return "schema error";
    case JACOBI_ERR_DOMAIN: return "domain error";
    case JACOBI_ERR_NUMERICAL: return "numerical error";
    case JACOBI_ERR_PRECONDITION: return "precondition failed";
    case JACOBI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void jacobi_string_free(char* s) { std::free(s); }

jacobi_status jacobi_scenario_from_json(const char* json, jacobi_scenario** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new jacobi_scenario{jacobi::parse_scenario(json)};
  });
}

jacobi_status jacobi_scenario_load(const char* path, jacobi_scenario** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new jacobi_scenario{jacobi::load_scenario(path)};
  });
}

jacobi_status jacobi_scenario_builtin(const char* name, jacobi_scenario** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new jacobi_scenario{jacobi::builtin_scenario(name)};
  });
}

jacobi_status jacobi_scenario_to_json(const jacobi_scenario* s, char** json_out) {
  return guarded([&] {
    require(s, "scenario");
    require(json_out, "json_out");
    *json_out = duplicate(jacobi::scenario_to_json(s->scenario).dump(2));
  });
}

jacobi_status jacobi_scenario_save(const jacobi_scenario* s, const char* path) {
  return guarded([&] {
    require(s, "scenario");
    require(path, "path");
    jacobi::save_scenario(s->scenario, path);
  });
}

void jacobi_scenario_destroy(jacobi_scenario* s) { delete s; }

jacobi_status jacobi_scenario_dim(const jacobi_scenario* s, int* dim_out) {
  return guarded([&] {
    require(s, "scenario");
    require(dim_out, "dim_out");
    *dim_out = s->scenario.family.dim();
  });
}

jacobi_status jacobi_scenario_domain(const jacobi_scenario* s, double* lo_out, double* hi_out) {
  return guarded([&] {
    require(s, "scenario");
    require(lo_out, "lo_out");
    require(hi_out, "hi_out");
    *lo_out = s->scenario.family.domain().lo;
    *hi_out = s->scenario.family.domain().hi;
  });
}

jacobi_status jacobi_scenario_set_tolerance(jacobi_scenario* s, const char* name, double value) {
  return guarded([&] {
    require(s, "scenario");
    require(name, "name");
    jacobi::set_tolerance(s->scenario.tolerances, name, value);
  });
}

jacobi_status jacobi_curvature_eval(const jacobi_scenario* s, double t, double* out, int capacity) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    const int m = s->scenario.family.dim();
    if (capacity < m * m) throw jacobi::InvalidArgument("output buffer smaller than dim * dim");
    const jacobi::Matrix r = s->scenario.family(t);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[i * m + j] = r(i, j);
  });
}

jacobi_status jacobi_symplectic_defect(const jacobi_scenario* s, double* defect_out) {
  return guarded([&] {
    require(s, "scenario");
    require(defect_out, "defect_out");
    const auto& sc = s->scenario;
    const auto sol = jacobi::integrate(sc.family, sc.family.domain().lo, sc.family.domain(),
                                       jacobi::IntegrationOptions::from(sc.tolerances));
    *defect_out = sol.symplectic_defect();
  });
}

jacobi_status jacobi_focal_report(const jacobi_scenario* s, const char* subspace, double lo, double hi,
                                  char** json_out, char** csv_out) {
  return guarded([&] {
    require(s, "scenario");
    require(subspace, "subspace");
    const auto& sc = s->scenario;
    const jacobi::Interval iv = interval_of(lo, hi);
    const jacobi::JacobiSubspace& w = sc.subspace(subspace);
    const auto sol = jacobi::integrate_for(w, sc.family, iv, sc.tolerances);
    const jacobi::IndexReport r = jacobi::locate_focal_points(w, sol, iv, sc.tolerances);
    jacobi::Json j = jacobi::index_report_to_json(r);
    j["subspace"] = subspace;
    j["scenario_hash"] = jacobi::scenario_hash(sc);
    j["tolerances"] = jacobi::tolerances_to_json(sc.tolerances);
    if (json_out) *json_out = duplicate(j.dump(2));
    if (csv_out) *csv_out = duplicate(jacobi::index_report_csv(r));
  });
}

jacobi_status jacobi_index(const jacobi_scenario* s, const char* subspace, double lo, double hi, int* index_out) {
  return guarded([&] {
    require(s, "scenario");
    require(subspace, "subspace");
    require(index_out, "index_out");
    const auto& sc = s->scenario;
    const jacobi::Interval iv = interval_of(lo, hi);
    const jacobi::JacobiSubspace& w = sc.subspace(subspace);
    const auto sol = jacobi::integrate_for(w, sc.family, iv, sc.tolerances);
    *index_out = jacobi::index(w, sol, iv, sc.tolerances);
  });
}

jacobi_status jacobi_maslov(const jacobi_scenario* s, const char* subspace, double lo, double hi, char** json_out) {
  return guarded([&] {
    require(s, "scenario");
    require(subspace, "subspace");
    require(json_out, "json_out");
    const auto& sc = s->scenario;
    const jacobi::Interval iv = interval_of(lo, hi);
    const jacobi::JacobiSubspace& l = sc.subspace(subspace);
    const auto sol = jacobi::integrate_for(l, sc.family, iv, sc.tolerances);
    const jacobi::MaslovResult r = jacobi::maslov_index(l, sol, iv, sc.tolerances);
    jacobi::Json j = jacobi::maslov_to_json(r);
    j["winding"] = jacobi::winding_index(l, sol, iv, sc.tolerances);
    j["interval"] = {lo, hi};
    j["subspace"] = subspace;
    j["scenario_hash"] = jacobi::scenario_hash(sc);
    *json_out = duplicate(j.dump(2));
  });
}

jacobi_status jacobi_transversal(const jacobi_scenario* s, const char* subspace, double lo, double hi,
                                 const char* lagrangian, char** scenario_out, char** frames_csv_out,
                                 char** oneill_csv_out, char** decomposition_out) {
  return guarded([&] {
    require(s, "scenario");
    require(subspace, "subspace");
    require(scenario_out, "scenario_out");
    if (decomposition_out && !lagrangian) throw jacobi::InvalidArgument("decomposition check needs a Lagrangian");
    const auto& sc = s->scenario;
    const jacobi::Interval iv = interval_of(lo, hi);
    const jacobi::JacobiSubspace& w = sc.subspace(subspace);
    const auto sol = jacobi::integrate_for(w, sc.family, iv, sc.tolerances);
    const jacobi::TransversalSystem sys = jacobi::build_transversal(w, sol, iv, sc.tolerances);
    std::optional<jacobi::JacobiSubspace> quotient;
    if (lagrangian && sys.horizontal_dim() > 0)
      quotient = jacobi::project_subspace(sc.subspace(lagrangian), sys, sol, sc.tolerances);
    jacobi::Scenario reduced = jacobi::transversal_scenario(sys, quotient, sc.tolerances);
    reduced.name = sc.name + "/transversal(" + subspace + ")";
    *scenario_out = duplicate(jacobi::scenario_to_json(reduced).dump(2));
    if (frames_csv_out) *frames_csv_out = duplicate(jacobi::frames_csv(sys));
    if (oneill_csv_out) *oneill_csv_out = duplicate(jacobi::oneill_csv(sys));
    if (decomposition_out) {
      const auto d = jacobi::check_decomposition(w, sc.subspace(lagrangian), sc.family, iv, sc.tolerances);
      jacobi::Json j = jacobi::decomposition_to_json(d);
      j["subspace"] = subspace;
      j["lagrangian"] = lagrangian;
      j["interval"] = {lo, hi};
      *decomposition_out = duplicate(j.dump(2));
    }
  });
}

jacobi_status jacobi_verify(const char* check, const jacobi_scenario* s, const char* params_json, char** report_out,
                            int* passed_out) {
  return guarded([&] {
    require(check, "check");
    jacobi::Json params = jacobi::Json::object();
    if (params_json && *params_json) {
      try {
        params = jacobi::Json::parse(params_json);
      } catch (const jacobi::Json::parse_error& e) {
        throw jacobi::InvalidArgument(std::string("verify parameters: ") + e.what());
      }
    }
    const jacobi::VerifyReport r = jacobi::run_check(check, s ? &s->scenario : nullptr, params);
    if (report_out) *report_out = duplicate(r.to_json().dump(2));
    if (passed_out) *passed_out = r.passed ? 1 : 0;
  });
}

}  // extern "C"

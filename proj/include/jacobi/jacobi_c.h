/* C interface to the Jacobi field index library.
 *
 * Scenarios are opaque handles. Every call returns a jacobi_status; on failure the
 * message is available from jacobi_last_error() on the same thread. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * jacobi_string_free().
 */
#ifndef JACOBI_C_H
#define JACOBI_C_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(JACOBI_BUILDING_LIBRARY)
#define JACOBI_API __attribute__((visibility("default")))
#else
#define JACOBI_API
#endif

typedef struct jacobi_scenario jacobi_scenario;

typedef enum jacobi_status {
  JACOBI_OK = 0,
  JACOBI_ERR_INVALID_ARGUMENT = 1,
  JACOBI_ERR_SCHEMA = 2,
  JACOBI_ERR_DOMAIN = 3,
  JACOBI_ERR_NUMERICAL = 4,
  JACOBI_ERR_PRECONDITION = 5,
  JACOBI_ERR_INTERNAL = 7
} jacobi_status;

JACOBI_API const char* jacobi_version(void);
JACOBI_API const char* jacobi_last_error(void);
JACOBI_API const char* jacobi_status_name(jacobi_status status);
JACOBI_API void jacobi_string_free(char* s);

/* Scenario lifecycle. */
JACOBI_API jacobi_status jacobi_scenario_from_json(const char* json, jacobi_scenario** out);
JACOBI_API jacobi_status jacobi_scenario_load(const char* path, jacobi_scenario** out);
/* name: sphere, flat, hyperbolic, hopf, explosion. */
JACOBI_API jacobi_status jacobi_scenario_builtin(const char* name, jacobi_scenario** out);
JACOBI_API jacobi_status jacobi_scenario_to_json(const jacobi_scenario* s, char** json_out);
JACOBI_API jacobi_status jacobi_scenario_save(const jacobi_scenario* s, const char* path);
JACOBI_API void jacobi_scenario_destroy(jacobi_scenario* s);

JACOBI_API jacobi_status jacobi_scenario_dim(const jacobi_scenario* s, int* dim_out);
JACOBI_API jacobi_status jacobi_scenario_domain(const jacobi_scenario* s, double* lo_out, double* hi_out);
/* name: sympl, step, rank, iso, loc, frame. */
JACOBI_API jacobi_status jacobi_scenario_set_tolerance(jacobi_scenario* s, const char* name, double value);
/* Evaluates R(t) into a row-major dim x dim buffer. */
JACOBI_API jacobi_status jacobi_curvature_eval(const jacobi_scenario* s, double t, double* out, int capacity);

/* Normalized symplectic defect of the flow anchored at the domain's lower end. */
JACOBI_API jacobi_status jacobi_symplectic_defect(const jacobi_scenario* s, double* defect_out);

/* Focal events of a named subspace on [lo, hi]: IndexReport JSON, and optionally a CSV table. */
JACOBI_API jacobi_status jacobi_focal_report(const jacobi_scenario* s, const char* subspace, double lo, double hi,
                                             char** json_out, char** csv_out);
JACOBI_API jacobi_status jacobi_index(const jacobi_scenario* s, const char* subspace, double lo, double hi,
                                      int* index_out);

/* Maslov index by crossing forms plus the winding-number cross-check, as JSON. */
JACOBI_API jacobi_status jacobi_maslov(const jacobi_scenario* s, const char* subspace, double lo, double hi,
                                       char** json_out);

/* Transversal reduction of an isotropic subspace on [lo, hi].
 * scenario_out: the reduced system as a scenario JSON document.
 * frames_csv_out, oneill_csv_out, decomposition_out: optional (pass NULL to skip).
 * lagrangian: name of a Lagrangian containing the subspace, or NULL; when given, the
 * reduced scenario carries its projection and decomposition_out receives the check. */
JACOBI_API jacobi_status jacobi_transversal(const jacobi_scenario* s, const char* subspace, double lo, double hi,
                                            const char* lagrangian, char** scenario_out, char** frames_csv_out,
                                            char** oneill_csv_out, char** decomposition_out);

/* Runs a verification check (bound, decomposition, semicontinuity, conjugate-monotonic,
 * no-conjugate-bound, estimates, omega, maslov, defects). s may be NULL for the randomized
 * suites. params_json may be NULL. passed_out receives 1 when every assertion held. */
JACOBI_API jacobi_status jacobi_verify(const char* check, const jacobi_scenario* s, const char* params_json,
                                       char** report_out, int* passed_out);

#ifdef __cplusplus
}
#endif

#endif

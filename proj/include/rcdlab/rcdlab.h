/* C interface of the rcdlab shared library. All handles are opaque; every
 * fallible call returns an rcd_status and leaves a thread-local message
 * readable through rcd_last_error(). */
#ifndef RCDLAB_H
#define RCDLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RCDLAB_BUILDING)
#    define RCD_API __declspec(dllexport)
#  else
#    define RCD_API __declspec(dllimport)
#  endif
#else
#  define RCD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rcd_status {
  RCD_OK = 0,
  RCD_E_INVALID_GEOMETRY = 1,
  RCD_E_INVALID_PARAMETER = 2,
  RCD_E_DIMENSION = 3,
  RCD_E_DOMAIN = 4,
  RCD_E_PRECONDITION = 5,
  RCD_E_INVALID_PATH = 6,
  RCD_E_NUMERICAL = 7,
  RCD_E_INVALID_PROFILE = 8,
  RCD_E_SIZE_GUARD = 9,
  RCD_E_CONFIG = 10,
  RCD_E_IO = 11,
  RCD_E_NULL_ARGUMENT = 12,
  RCD_E_BUFFER_TOO_SMALL = 13,
  RCD_E_INTERNAL = 14
} rcd_status;

typedef enum rcd_verdict {
  RCD_VERDICT_PASS = 0,
  RCD_VERDICT_FAIL = 1,
  RCD_VERDICT_VACUOUS_PASS = 2,
  RCD_VERDICT_OUTSIDE_PROOF_REGIME = 3,
  RCD_VERDICT_ERROR = 4
} rcd_verdict;

typedef struct rcd_space rcd_space;
typedef struct rcd_solver rcd_solver;
typedef struct rcd_report rcd_report;

typedef void (*rcd_log_fn)(const char* line, void* user);

typedef struct rcd_run_options {
  const char* out_dir;     /* NULL means the current directory */
  int has_seed;            /* nonzero: `seed` overrides the scenario seed */
  uint64_t seed;
  double tolerance_scale;  /* multiplies every tolerance; must be > 0 */
  rcd_log_fn log;          /* optional progress sink */
  void* log_user;
} rcd_run_options;

RCD_API const char* rcd_version(void);
RCD_API const char* rcd_status_string(rcd_status status);
/* Message of the last failing call on this thread; "" when none. */
RCD_API const char* rcd_last_error(void);

RCD_API void rcd_run_options_init(rcd_run_options* options);

/* Builds a model from a JSON object such as {"name":"circle","n":200}. */
RCD_API rcd_status rcd_space_create(const char* model_json, rcd_space** out);
RCD_API void rcd_space_destroy(rcd_space* space);
RCD_API size_t rcd_space_size(const rcd_space* space);
RCD_API double rcd_space_spacing(const rcd_space* space);
/* Copies node coordinates or masses into `out` (capacity `len`). */
RCD_API rcd_status rcd_space_nodes(const rcd_space* space, double* out, size_t len);
RCD_API rcd_status rcd_space_measure(const rcd_space* space, double* out, size_t len);

RCD_API rcd_status rcd_solver_create(const rcd_space* space, rcd_solver** out);
RCD_API void rcd_solver_destroy(rcd_solver* solver);
RCD_API rcd_status rcd_solver_eigenvalues(const rcd_solver* solver, double* out, size_t len);
/* out = H_t f; both arrays hold rcd_space_size() values. */
RCD_API rcd_status rcd_heat_apply(const rcd_solver* solver, const double* f, size_t len, double t,
                                  double* out);

/* Runs one check object (same schema as a scenario "checks" entry) with the
 * field values `f` bound to every field id it references. A "kernel" check
 * yields several reports, all held by the one handle. */
RCD_API rcd_status rcd_check_run(const rcd_solver* solver, const char* check_json, const double* f,
                                 size_t len, rcd_report** out);
RCD_API void rcd_report_destroy(rcd_report* report);
RCD_API rcd_verdict rcd_report_verdict(const rcd_report* report);
RCD_API double rcd_report_min_margin(const rcd_report* report);
RCD_API size_t rcd_report_count(const rcd_report* report);
/* JSON text of all reports. Writes at most `cap` bytes including the
 * terminator and stores the full length (without terminator) in `needed`. */
RCD_API rcd_status rcd_report_json(const rcd_report* report, char* buf, size_t cap, size_t* needed);

/* Scenario driver; `exit_code` receives 0 (pass), 1 (fail) or 2 (config).
 * A sweep with `levels` <= 0 uses the scenario's sweep.levels.
 * With exit code 2 the diagnostic is available from rcd_last_error(). */
RCD_API rcd_status rcd_scenario_run(const char* path, const rcd_run_options* options, int* exit_code);
RCD_API rcd_status rcd_scenario_sweep(const char* path, int levels, const rcd_run_options* options,
                                      int* exit_code);
RCD_API rcd_status rcd_list_models(char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* RCDLAB_H */

/*
 * C API of the multi-agent consensus toolkit. All functionality is
 * reachable through opaque scenario handles and status codes; report
 * payloads are JSON strings owned by the library (release them with
 * macs_free_string). Error details for the calling thread are available
 * via macs_last_error.
 */
#ifndef MACS_MACS_H
#define MACS_MACS_H

#if defined(_WIN32)
#  if defined(MACS_BUILD)
#    define MACS_API __declspec(dllexport)
#  else
#    define MACS_API __declspec(dllimport)
#  endif
#else
#  define MACS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum macs_status {
  MACS_OK = 0,
  /* a structural or existence check failed (spanning tree, M-matrix,
     stabilizability, controllability, epsilon) */
  MACS_ERR_CHECK_FAILED = 1,
  /* scenario schema violation or unreadable input */
  MACS_ERR_SCHEMA = 2,
  /* numerical failure or trajectory divergence */
  MACS_ERR_NUMERICAL = 3,
  /* invalid argument (null handle, bad override value, ...) */
  MACS_ERR_INVALID_ARGUMENT = 4,
  /* filesystem failure while writing outputs */
  MACS_ERR_IO = 5
} macs_status;

typedef struct macs_scenario macs_scenario;

MACS_API const char* macs_version(void);

/* Thread-local message for the most recent failure. */
MACS_API const char* macs_last_error(void);

MACS_API const char* macs_status_name(macs_status status);

/* Opens a built-in scenario by name (see macs_builtin_names) or parses a
 * scenario JSON file. The handle must be released with macs_scenario_free. */
MACS_API macs_status macs_scenario_open(const char* path_or_name, macs_scenario** out);

MACS_API void macs_scenario_free(macs_scenario* scenario);

/* Newline-separated list of built-in scenario names. Static storage. */
MACS_API const char* macs_builtin_names(void);

/* Scenario name (UTF-8, owned by the handle). */
MACS_API const char* macs_scenario_name(const macs_scenario* scenario);

MACS_API macs_status macs_scenario_set_dt(macs_scenario* scenario, double dt);
MACS_API macs_status macs_scenario_set_horizon(macs_scenario* scenario, double horizon);

/* Structural checks. MACS_OK when every check required by the scenario's
 * mode passes, MACS_ERR_CHECK_FAILED otherwise; *report_json is populated
 * in both cases. */
MACS_API macs_status macs_verify(const macs_scenario* scenario, char** report_json);

/* Gain synthesis report (P or Q, K, Gamma, residual). */
MACS_API macs_status macs_synthesize(const macs_scenario* scenario, char** report_json);

/* Theoretical ultimate-bound report for a robust scenario. */
MACS_API macs_status macs_analyze(const macs_scenario* scenario, char** report_json);

/* Runs the closed-loop simulation. Writes trajectory.csv, gains.json,
 * consensus_report.json (and bound_report.json for robust scenarios)
 * into out_dir; returns the consensus report. out_dir must exist. */
MACS_API macs_status macs_simulate(const macs_scenario* scenario, const char* out_dir,
                                   char** report_json);

MACS_API void macs_free_string(char* text);

#ifdef __cplusplus
}
#endif

#endif /* MACS_MACS_H */

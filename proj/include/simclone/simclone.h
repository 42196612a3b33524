#ifndef SIMCLONE_SIMCLONE_H
#define SIMCLONE_SIMCLONE_H

/* C interface to the simclone semantic clone detector.
 *
 * Every call returns a simclone_status. On failure the message of the most
 * recent error on the calling thread is available from simclone_last_error().
 * Handles are opaque; each *_new / producing call is paired with a *_free.
 * Strings returned through a report handle live as long as the handle. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SIMCLONE_API __declspec(dllexport)
#else
#define SIMCLONE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum simclone_status {
  SIMCLONE_OK = 0,
  SIMCLONE_E_INVALID_ARGUMENT = 1,
  SIMCLONE_E_CONFIG = 2,
  SIMCLONE_E_MISSING_SHIM = 3,
  SIMCLONE_E_PARSE = 4,
  SIMCLONE_E_SYNTHESIS = 5,
  SIMCLONE_E_UNSUPPORTED_TYPE = 6,
  SIMCLONE_E_STORE = 7,
  SIMCLONE_E_CHECKSUM = 8,
  SIMCLONE_E_MISSING_ARTIFACTS = 9,
  SIMCLONE_E_POOL_MISMATCH = 10,
  SIMCLONE_E_INSUFFICIENT_DATA = 11,
  SIMCLONE_E_LOAD = 12,
  SIMCLONE_E_PROTOCOL = 13,
  SIMCLONE_E_IO = 14,
  SIMCLONE_E_INTERNAL = 15
} simclone_status;

typedef struct simclone_config simclone_config;
typedef struct simclone_report simclone_report;

typedef void (*simclone_progress_fn)(const char* message, void* user);

SIMCLONE_API const char* simclone_version(void);
SIMCLONE_API const char* simclone_status_name(simclone_status status);
SIMCLONE_API const char* simclone_last_error(void);

/* Configuration. Keys accepted by simclone_config_set:
 *   lang (comma list), corpus (appends a path), min_stmt, args_max, inputs,
 *   sim_t, timeout (seconds), seed, workers, out, permute (0/1),
 *   real_tolerance, exception_match (0/1). */
SIMCLONE_API simclone_status simclone_config_new(simclone_config** out);
SIMCLONE_API void simclone_config_free(simclone_config* cfg);
SIMCLONE_API simclone_status simclone_config_set(simclone_config* cfg, const char* key, const char* value);
SIMCLONE_API simclone_status simclone_config_set_shim(simclone_config* cfg, const char* language, const char* command);
/* Merges a JSON configuration file; keys absent from the file are kept. */
SIMCLONE_API simclone_status simclone_config_load_file(simclone_config* cfg, const char* path);
SIMCLONE_API simclone_status simclone_config_set_progress(simclone_config* cfg, simclone_progress_fn fn, void* user);
/* JSON rendering of the configuration; release with simclone_string_free. */
SIMCLONE_API simclone_status simclone_config_to_json(const simclone_config* cfg, char** out);
SIMCLONE_API void simclone_string_free(char* s);

/* Pipeline commands. Each writes its artifacts below the run directory and
 * yields a report handle. */
SIMCLONE_API simclone_status simclone_detect(const simclone_config* cfg, simclone_report** out);
/* `overrides` may be NULL; its shims, workers and an explicitly set seed
 * replace the values recorded by detection. */
SIMCLONE_API simclone_status simclone_validate(const char* run_dir, const simclone_config* overrides,
                                               simclone_report** out);
SIMCLONE_API simclone_status simclone_baseline_ast(const simclone_config* cfg, simclone_report** out);
/* `manifest_run` may be NULL. */
SIMCLONE_API simclone_status simclone_import_pairs(const char* pairs_path, const char* out_dir,
                                                   const char* manifest_run, simclone_report** out);

SIMCLONE_API void simclone_report_free(simclone_report* report);
SIMCLONE_API size_t simclone_report_cluster_count(const simclone_report* report);
SIMCLONE_API size_t simclone_report_clone_count(const simclone_report* report);
/* Run directory the report was written to. */
SIMCLONE_API const char* simclone_report_run_dir(const simclone_report* report);
/* {"stats":..., "clusters":[...], "validation":... or null} */
SIMCLONE_API const char* simclone_report_json(const simclone_report* report);
SIMCLONE_API const char* simclone_report_digest(const simclone_report* report);
/* SIMCLONE_E_INVALID_ARGUMENT when the report carries no validation. */
SIMCLONE_API simclone_status simclone_report_precision(const simclone_report* report, double* out);

#ifdef __cplusplus
}
#endif

#endif

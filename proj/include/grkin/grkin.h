/* SPDX-License-Identifier: Apache-2.0 */

#ifndef GRKIN_H
#define GRKIN_H

#include <stddef.h>

#if defined(_WIN32)
#define GRKIN_API __declspec(dllexport)
#else
#define GRKIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; 1-3 double as process exit codes of the command-line tool. */
typedef enum grkin_status {
    GRKIN_OK = 0,
    GRKIN_ERR_CONFIG = 1,    /* invalid configuration, argument or file */
    GRKIN_ERR_INVARIANT = 2, /* a runtime invariant (bounds, conservation, positivity) failed */
    GRKIN_ERR_NUMERICAL = 3, /* NaN, non-convergence or similar numerical failure */
    GRKIN_ERR_INTERNAL = 4,  /* unexpected exception */
    GRKIN_ERR_BUFFER = 5     /* output buffer too small; *needed holds the required size */
} grkin_status;

typedef struct grkin_config grkin_config;
typedef struct grkin_result grkin_result;
typedef struct grkin_simulation grkin_simulation;

/* Scalar diagnostics of one state (same fields and order as the CSV columns). */
typedef struct grkin_record {
    double t, H, D1, D2, D3, Gamma, dist2, micro2, R2, massdiff;
    double r1min, r1max, r2min, r2max, coupling;
} grkin_record;

GRKIN_API const char *grkin_version(void);

/* Message of the last failed call on this thread ("" when none). */
GRKIN_API const char *grkin_last_error(void);

/* 0 restores the default (all cores). */
GRKIN_API grkin_status grkin_set_threads(int threads);

/* ---- configuration ---------------------------------------------------------------- */

GRKIN_API grkin_status grkin_config_create(grkin_config **out);
GRKIN_API grkin_status grkin_config_load(const char *path, grkin_config **out);
GRKIN_API grkin_status grkin_config_parse(const char *ini_text, grkin_config **out);
GRKIN_API void grkin_config_destroy(grkin_config *config);

/* key is "section.name", e.g. "model.sigma". */
GRKIN_API grkin_status grkin_config_set(grkin_config *config, const char *key, const char *value);

/* String outputs: copies a NUL-terminated value into buf when buf_len suffices; *needed
   (optional) receives the size including the terminator. */
GRKIN_API grkin_status grkin_config_get(const grkin_config *config, const char *key, char *buf, size_t buf_len,
                                        size_t *needed);
GRKIN_API grkin_status grkin_config_to_ini(const grkin_config *config, char *buf, size_t buf_len, size_t *needed);
GRKIN_API grkin_status grkin_config_validate(const grkin_config *config);

/* Effective output directory (honours GRKIN_OUTPUT_DIR). */
GRKIN_API grkin_status grkin_config_output_dir(const grkin_config *config, char *buf, size_t buf_len,
                                               size_t *needed);

/* ---- experiments -------------------------------------------------------------------- */

/* kind: "decay", "eps_sweep", "oracle_check", "inequality_battery" (dashes accepted), or
   NULL for the kind stored in the configuration. */
GRKIN_API grkin_status grkin_run(const grkin_config *config, const char *kind, grkin_result **out);
GRKIN_API int grkin_result_passed(const grkin_result *result);
/* JSON summary; owned by the result. */
GRKIN_API const char *grkin_result_summary(const grkin_result *result);
GRKIN_API size_t grkin_result_file_count(const grkin_result *result);
GRKIN_API const char *grkin_result_file(const grkin_result *result, size_t index);
GRKIN_API void grkin_result_destroy(grkin_result *result);

/* ---- stepping ----------------------------------------------------------------------- */

/* Grid, initial state and equilibrium built from the configuration. */
GRKIN_API grkin_status grkin_simulation_create(const grkin_config *config, grkin_simulation **out);
/* Advances to absolute time t_target with the configured step (last step shortened). */
GRKIN_API grkin_status grkin_simulation_advance(grkin_simulation *sim, double t_target);
GRKIN_API double grkin_simulation_time(const grkin_simulation *sim);
GRKIN_API double grkin_simulation_mass_difference(const grkin_simulation *sim);
GRKIN_API grkin_status grkin_simulation_record(const grkin_simulation *sim, grkin_record *out);
GRKIN_API grkin_status grkin_simulation_write_snapshot(const grkin_simulation *sim, const char *path);
GRKIN_API void grkin_simulation_destroy(grkin_simulation *sim);

#ifdef __cplusplus
}
#endif

#endif

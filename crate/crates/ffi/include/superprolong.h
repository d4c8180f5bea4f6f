#ifndef SUPERPROLONG_H
#define SUPERPROLONG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpStatus {
  SP_STATUS_OK = 0,
  SP_STATUS_NULL_POINTER = 1,
  SP_STATUS_INVALID_ARGUMENT = 2,
  SP_STATUS_ENGINE = 3,
  SP_STATUS_PANIC = 4,
} SpStatus;

typedef enum SpMode {
  SP_MODE_FULL = 0,
  SP_MODE_PARTIAL_PRIME = 1,
  SP_MODE_PARTIAL_DOUBLE_PRIME = 2,
} SpMode;

typedef enum SpRoute {
  SP_ROUTE_FULL_G0 = 0,
  SP_ROUTE_TILDE_G0 = 1,
} SpRoute;

/**
 * A finished prolong run.
 */
typedef struct SpExperiment SpExperiment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *sp_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sp_string_free(char *s);

/**
 * Runs a prolong. `route` is ignored for partial modes, which need p = 3.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SpStatus sp_experiment_run(uint64_t p,
                                uint32_t height,
                                enum SpMode mode,
                                enum SpRoute route,
                                struct SpExperiment **out);

/**
 * Releases an experiment. Null is ignored.
 *
 * # Safety
 * `h` must come from [`sp_experiment_run`] and not have been freed.
 */
void sp_experiment_free(struct SpExperiment *h);

/**
 * Total superdimension.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SpStatus sp_experiment_total(const struct SpExperiment *h, size_t *even, size_t *odd);

/**
 * Superdimension of one degree; zero outside the range.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SpStatus sp_experiment_degree_sdim(const struct SpExperiment *h,
                                        int32_t degree,
                                        size_t *even,
                                        size_t *odd);

/**
 * Lowest and highest nonzero degree.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SpStatus sp_experiment_degree_range(const struct SpExperiment *h, int32_t *min, int32_t *max);

/**
 * Both simplicity tests agree on "simple".
 *
 * # Safety
 * Pointers must be valid.
 */
enum SpStatus sp_experiment_is_simple(const struct SpExperiment *h, bool *out);

/**
 * The report as JSON.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SpStatus sp_experiment_report_json(const struct SpExperiment *h, char **out);

/**
 * Structure constants in sc-v1.
 *
 * # Safety
 * Pointers must be valid; `name` is a nul-terminated UTF-8 string.
 */
enum SpStatus sp_experiment_export_sc(const struct SpExperiment *h, const char *name, char **out);

/**
 * Canonical rendering of a function on O(1;N|7) over GF(p).
 *
 * # Safety
 * `text` is a nul-terminated UTF-8 string; `out` must be valid.
 */
enum SpStatus sp_function_canonical(uint64_t p, uint32_t height, const char *text, char **out);

/**
 * The contact field of a homogeneous generating function.
 *
 * # Safety
 * `text` is a nul-terminated UTF-8 string; `out` must be valid.
 */
enum SpStatus sp_contact_field(uint64_t p, uint32_t height, const char *text, char **out);

/**
 * Library version, statically allocated.
 */
const char *sp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERPROLONG_H */

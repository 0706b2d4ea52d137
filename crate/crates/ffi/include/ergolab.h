#ifndef ERGOLAB_H
#define ERGOLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  ERGOLAB_STATUS_OK = 0,
  ERGOLAB_STATUS_NULL_POINTER = -1,
  ERGOLAB_STATUS_VALIDATION = -2,
  ERGOLAB_STATUS_NUMERIC = -3,
  ERGOLAB_STATUS_INVALID_UTF8 = -4,
  ERGOLAB_STATUS_OUT_OF_RANGE = -5,
  ERGOLAB_STATUS_PANIC = -6,
} ErgolabStatus;

/**
 * Opaque parsed experiment configuration.
 */
typedef struct ErgolabConfig ErgolabConfig;

/**
 * Opaque experiment result.
 */
typedef struct ErgolabResult ErgolabResult;

/**
 * One checkpoint row of a result.
 */
typedef struct {
  uint64_t n;
  double value_re;
  double value_im;
  double dispersion;
  uint64_t flags;
} ErgolabRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *ergolab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ergolab_version(void);

/**
 * Parses a JSON config (a full config, a `{"preset": ...}` document or a
 * sidecar).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
ErgolabStatus ergolab_config_from_json(const char *json, ErgolabConfig **out);

/**
 * Applies a `key=value` override, as `--set` does on the command line.
 * The config is left unchanged if the result does not validate.
 *
 * # Safety
 * `cfg` must come from [`ergolab_config_from_json`]; `key_value` must be a
 * valid NUL-terminated string.
 */
ErgolabStatus ergolab_config_set(ErgolabConfig *cfg, const char *key_value);

/**
 * # Safety
 * `cfg` must come from [`ergolab_config_from_json`] or be null.
 */
void ergolab_config_free(ErgolabConfig *cfg);

/**
 * Runs the experiment on `threads` workers (0 picks the default).
 *
 * # Safety
 * `cfg` must be a live config handle and `out` a valid pointer.
 */
ErgolabStatus ergolab_run(const ErgolabConfig *cfg, uint32_t threads, ErgolabResult **out);

/**
 * # Safety
 * `res` must come from [`ergolab_run`] or be null.
 */
void ergolab_result_free(ErgolabResult *res);

/**
 * Number of checkpoint rows, 0 for a null handle.
 *
 * # Safety
 * `res` must be a live result handle or null.
 */
uintptr_t ergolab_result_rows(const ErgolabResult *res);

/**
 * # Safety
 * `res` must be a live result handle and `out` a valid pointer.
 */
ErgolabStatus ergolab_result_row(const ErgolabResult *res, uintptr_t index, ErgolabRow *out);

/**
 * The results CSV (with `ms` = 0). Free with [`ergolab_string_free`].
 *
 * # Safety
 * `res` must be a live result handle or null.
 */
char *ergolab_result_csv(const ErgolabResult *res);

/**
 * The JSON sidecar. Free with [`ergolab_string_free`].
 *
 * # Safety
 * `res` must be a live result handle or null.
 */
char *ergolab_result_sidecar(const ErgolabResult *res);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void ergolab_string_free(char *s);

/**
 * `⌊α n^c⌋` with `α` and `c` given as expressions (e.g. `"sqrt(2)"`).
 * `boundary` is set to 1 when the fractional part lies within the guard
 * band of an integer.
 *
 * # Safety
 * String arguments must be valid NUL-terminated strings; out-pointers must
 * be valid.
 */
ErgolabStatus ergolab_floor_pow(const char *alpha,
                                const char *c,
                                uint64_t n,
                                int64_t *floor_out,
                                int32_t *boundary_out);

/**
 * First continued-fraction convergent `p/q` of `γ` with `|γ − p/q| < 1/n`.
 *
 * # Safety
 * `gamma` must be a valid NUL-terminated string; out-pointers must be
 * valid.
 */
ErgolabStatus ergolab_best_approx(const char *gamma, uint64_t n, int64_t *p_out, uint64_t *q_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERGOLAB_H */

#ifndef JLL_H
#define JLL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Checks reachable through [`jll_verify`].
 */
typedef enum JllCheck {
  JLL_CHECK_GAP_LAW = 0,
  JLL_CHECK_FUNDAMENTAL = 1,
  JLL_CHECK_FUNDAMENTAL_CHORD = 2,
  /**
   * uses `u`
   */
  JLL_CHECK_THEOREM1 = 3,
  JLL_CHECK_THEOREM2 = 4,
  /**
   * uses `order` as n
   */
  JLL_CHECK_CHEBYSHEV = 5,
  /**
   * uses `order` as k
   */
  JLL_CHECK_SELBERG = 6,
  JLL_CHECK_PREDICTION = 7,
  JLL_CHECK_LEMMA1 = 8,
} JllCheck;

typedef enum JllStatus {
  JLL_STATUS_OK = 0,
  JLL_STATUS_NULL_POINTER = 1,
  JLL_STATUS_INVALID_ARGUMENT = 2,
  JLL_STATUS_DOMAIN = 3,
  JLL_STATUS_NUMERICAL = 4,
  JLL_STATUS_IO = 5,
  JLL_STATUS_PANIC = 6,
} JllStatus;

typedef struct JllLab JllLab;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * call on the same thread.
 */
const char *jll_last_error(void);

/**
 * Creates a laboratory. `cache_dir` may be null for an in-memory grid;
 * otherwise the binary grid cache in that directory is loaded and written
 * back by [`jll_lab_persist`]. `a_param` must lie in [7, 8].
 *
 * # Safety
 * `cache_dir` is null or a NUL-terminated string; `out` is writable.
 */
enum JllStatus jll_lab_new(const char *cache_dir, double a_param, struct JllLab **out);

/**
 * # Safety
 * `lab` is null or came from [`jll_lab_new`] and is not used afterwards.
 */
void jll_lab_free(struct JllLab *lab);

/**
 * Writes the grid back to the cache file if it grew.
 *
 * # Safety
 * `lab` came from [`jll_lab_new`].
 */
enum JllStatus jll_lab_persist(struct JllLab *lab);

/**
 * Hardy's Z(t).
 *
 * # Safety
 * `out` is writable.
 */
enum JllStatus jll_z(double t, double *out);

/**
 * theta(t).
 *
 * # Safety
 * `out` is writable.
 */
enum JllStatus jll_theta(double t, double *out);

/**
 * F(T) = int_0^T Z^2.
 *
 * # Safety
 * `lab` came from [`jll_lab_new`]; `out` is writable.
 */
enum JllStatus jll_hl_cumulative(const struct JllLab *lab, double t, double *out);

/**
 * phi(T) and its relative residual.
 *
 * # Safety
 * `lab` came from [`jll_lab_new`]; `phi` and `residual` are writable.
 */
enum JllStatus jll_solve(const struct JllLab *lab, double t, double *phi, double *residual);

/**
 * phi1(T) = phi(T) / 2.
 *
 * # Safety
 * `lab` came from [`jll_lab_new`]; `out` is writable.
 */
enum JllStatus jll_phi1(const struct JllLab *lab, double t, double *out);

/**
 * t with phi1(t) = y.
 *
 * # Safety
 * `lab` came from [`jll_lab_new`]; `out` is writable.
 */
enum JllStatus jll_phi1_inverse(const struct JllLab *lab, double y, double *out);

/**
 * Runs one check and returns its report as a JSON string, to be released
 * with [`jll_string_free`]. `passed` (may be null) receives 1 when the report
 * passes and 0 otherwise.
 *
 * # Safety
 * `lab` came from [`jll_lab_new`]; `json` is writable; `passed` is null or
 * writable.
 */
enum JllStatus jll_verify(const struct JllLab *lab,
                          enum JllCheck check,
                          double t,
                          double u,
                          uint32_t order,
                          char **json,
                          int32_t *passed);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or came from this library and is not used afterwards.
 */
void jll_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JLL_H */

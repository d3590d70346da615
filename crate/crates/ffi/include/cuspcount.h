#ifndef CUSPCOUNT_H
#define CUSPCOUNT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  CUSP_STATUS_OK = 0,
  CUSP_STATUS_NULL_POINTER = 1,
  /**
   * A precondition failed: dimension constraint, unsupported level, bad path text.
   */
  CUSP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The output buffer cannot hold the result; `required` holds the needed size.
   */
  CUSP_STATUS_BUFFER_TOO_SMALL = 3,
  /**
   * Internal consistency failure: oracle or table mismatch, non-integral count.
   */
  CUSP_STATUS_ENGINE = 4,
  /**
   * Cache or table file rejected: version, fingerprint, parse, conflicting key.
   */
  CUSP_STATUS_CACHE = 5,
  CUSP_STATUS_IO = 6,
  CUSP_STATUS_PANIC = 7,
} CuspStatus;

typedef enum {
  CUSP_PROVIDER_ENGINE = 0,
  CUSP_PROVIDER_TABLE = 1,
  CUSP_PROVIDER_HYBRID = 2,
} CuspProvider;

/**
 * Opaque engine handle.
 */
typedef struct CuspEngine CuspEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Engine with the default provider (WDVV reconstruction, consistency checks on).
 */
CuspEngine *cusp_engine_new(void);

/**
 * Engine with an explicit provider. `table_path` may be NULL for the `Engine` provider
 * and is required otherwise. On success `*out` receives the handle.
 *
 * # Safety
 * `table_path` is NULL or a NUL-terminated string; `out` is a valid pointer.
 */
CuspStatus cusp_engine_new_with_options(CuspProvider provider,
                                        const char *table_path,
                                        bool consistency_check,
                                        bool allow_degree_one,
                                        CuspEngine **out);

/**
 * Releases an engine. NULL is ignored.
 *
 * # Safety
 * `engine` is NULL or a handle from this library that has not been freed.
 */
void cusp_engine_free(CuspEngine *engine);

/**
 * Writes `C_d(r, s)` as a decimal integer.
 *
 * # Safety
 * `engine` is a live handle; `buf` points to `len` writable bytes or is NULL;
 * `required` is NULL or writable.
 */
CuspStatus cusp_engine_count(const CuspEngine *engine,
                             uint32_t d,
                             uint32_t r,
                             uint32_t s,
                             char *buf,
                             size_t len,
                             size_t *required);

/**
 * Writes the Euler class and boundary term of `C_d(r, s) = e − B` as `"<e> <B>"`.
 *
 * # Safety
 * As for [`cusp_engine_count`].
 */
CuspStatus cusp_engine_count_parts(const CuspEngine *engine,
                                   uint32_t d,
                                   uint32_t r,
                                   uint32_t s,
                                   char *buf,
                                   size_t len,
                                   size_t *required);

/**
 * Writes `N_d(r, s, θ)` as a decimal integer.
 *
 * # Safety
 * As for [`cusp_engine_count`].
 */
CuspStatus cusp_engine_base_number(const CuspEngine *engine,
                                   uint32_t d,
                                   uint32_t r,
                                   uint32_t s,
                                   uint32_t theta,
                                   char *buf,
                                   size_t len,
                                   size_t *required);

/**
 * Writes `Φ_d(i, j, r, s, θ)` as an integer or reduced fraction `p/q`.
 *
 * # Safety
 * As for [`cusp_engine_count`].
 */
CuspStatus cusp_engine_phi(const CuspEngine *engine,
                           uint32_t d,
                           uint32_t i,
                           uint32_t j,
                           uint32_t r,
                           uint32_t s,
                           uint32_t theta,
                           char *buf,
                           size_t len,
                           size_t *required);

/**
 * Seeds the engine's memo tables from a cache file.
 *
 * # Safety
 * `engine` is a live handle; `path` is a NUL-terminated string.
 */
CuspStatus cusp_engine_load_cache(const CuspEngine *engine, const char *path);

/**
 * Writes the engine's memo tables to a cache file atomically.
 *
 * # Safety
 * `engine` is a live handle; `path` is a NUL-terminated string.
 */
CuspStatus cusp_engine_save_cache(const CuspEngine *engine, const char *path);

/**
 * Copies the calling thread's most recent error message. Writes an empty string when
 * there is none.
 *
 * # Safety
 * `buf` points to `len` writable bytes or is NULL; `required` is NULL or writable.
 */
CuspStatus cusp_last_error(char *buf, size_t len, size_t *required);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cusp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUSPCOUNT_H */

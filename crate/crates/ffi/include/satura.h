#ifndef SATURA_H
#define SATURA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Monomial orders accepted by [`satura_groebner`].
 */
typedef enum SaturaOrder {
  SATURA_ORDER_GREV_LEX = 0,
  SATURA_ORDER_LEX = 1,
} SaturaOrder;

/**
 * Result codes of every fallible function.
 */
typedef enum SaturaStatus {
  SATURA_STATUS_OK = 0,
  SATURA_STATUS_NULL_POINTER = 1,
  SATURA_STATUS_INVALID_UTF8 = 2,
  SATURA_STATUS_INVALID_ARGUMENT = 3,
  SATURA_STATUS_PARSE_ERROR = 4,
  SATURA_STATUS_NOT_ZERO_DIMENSIONAL = 5,
  SATURA_STATUS_TIMEOUT = 6,
  SATURA_STATUS_PRIME_TOO_SMALL = 7,
  SATURA_STATUS_INTERNAL = 8,
} SaturaStatus;

/**
 * A reduced Groebner basis.
 */
typedef struct SaturaBasis SaturaBasis;

/**
 * A polynomial system over `Q` or `F_p`.
 */
typedef struct SaturaSystem SaturaSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *satura_last_error(void);

/**
 * Library version as a static string.
 */
const char *satura_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void satura_string_free(char *s);

/**
 * Parses a system from the JSON interchange format.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum SaturaStatus satura_system_from_json(const char *json, struct SaturaSystem **out);

/**
 * Parses polynomials given as text. `vars` is a comma-separated list and
 * `field` is `Q` or `Fp:<p>`.
 *
 * # Safety
 * All strings must be nul-terminated; `out` must be writable.
 */
enum SaturaStatus satura_system_from_text(const char *vars,
                                          const char *field,
                                          const char *text,
                                          struct SaturaSystem **out);

/**
 * Number of polynomials in the system.
 *
 * # Safety
 * `sys` must be a live system handle or null (which yields 0).
 */
size_t satura_system_len(const struct SaturaSystem *sys);

/**
 * Serializes the system to the JSON interchange format.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum SaturaStatus satura_system_to_json(const struct SaturaSystem *sys, char **out);

/**
 * # Safety
 * `sys` must come from this library and not have been freed; null is
 * ignored.
 */
void satura_system_free(struct SaturaSystem *sys);

/**
 * Reduced Groebner basis of the system under `order`.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum SaturaStatus satura_groebner(const struct SaturaSystem *sys,
                                  enum SaturaOrder order,
                                  struct SaturaBasis **out);

/**
 * Number of basis elements.
 *
 * # Safety
 * `basis` must be a live handle or null (which yields 0).
 */
size_t satura_basis_len(const struct SaturaBasis *basis);

/**
 * Number of standard monomials; fails with `NotZeroDimensional` when
 * infinite.
 *
 * # Safety
 * `basis` must be a live handle; `out` must be writable.
 */
enum SaturaStatus satura_basis_degree(const struct SaturaBasis *basis, uint64_t *out);

/**
 * Serializes the basis to the JSON interchange format.
 *
 * # Safety
 * `basis` must be a live handle; `out` must be writable.
 */
enum SaturaStatus satura_basis_to_json(const struct SaturaBasis *basis, char **out);

/**
 * # Safety
 * `basis` must come from this library and not have been freed; null is
 * ignored.
 */
void satura_basis_free(struct SaturaBasis *basis);

/**
 * Randomized count `g_i` of a built-in problem over `F_prime`, or over
 * `Q` when `prime` is 0. A unit-ideal draw reports 0.
 *
 * # Safety
 * `problem` must be nul-terminated; `out` must be writable.
 */
enum SaturaStatus satura_compute_gi(const char *problem,
                                    uint32_t i,
                                    uint64_t prime,
                                    uint64_t seed,
                                    uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SATURA_H */

#ifndef NEARLAT_H
#define NEARLAT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Element classes for [`nl_classify`].
 */
typedef enum {
  NL_ELEMENT_CLASS_DUAL_ATOM = 0,
  NL_ELEMENT_CLASS_BOOLEAN = 1,
  NL_ELEMENT_CLASS_COMPLEMENTED = 2,
  NL_ELEMENT_CLASS_DENSE = 3,
  NL_ELEMENT_CLASS_IRREDUCIBLE = 4,
} NlElementClass;

/**
 * Result codes.
 */
typedef enum {
  NL_STATUS_OK = 0,
  NL_STATUS_NULL_POINTER = 1,
  NL_STATUS_PARSE_ERROR = 2,
  NL_STATUS_INVALID = 3,
  NL_STATUS_OUT_OF_RANGE = 4,
  NL_STATUS_NO_MEET = 5,
  NL_STATUS_BUFFER_TOO_SMALL = 6,
  NL_STATUS_INTERNAL = 7,
} NlStatus;

/**
 * Opaque handle to a validated nearlattice.
 */
typedef struct NlNearlattice NlNearlattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a nearlattice from a row-major `size * size` join table.
 *
 * # Safety
 * `table` must point to `size * size` readable values and `out` must be
 * writable.
 */
NlStatus nl_from_join_table(size_t size, const size_t *table, size_t top, NlNearlattice **out);

/**
 * Builds a nearlattice from the text of a nearlattice file, or `N(X)` from
 * a DN file.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
NlStatus nl_from_json(const char *json, NlNearlattice **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `nl` must be null or a handle not yet freed.
 */
void nl_free(NlNearlattice *nl);

/**
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_size(const NlNearlattice *nl, size_t *out);

/**
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_top(const NlNearlattice *nl, size_t *out);

/**
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_join(const NlNearlattice *nl, size_t x, size_t y, size_t *out);

/**
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_leq(const NlNearlattice *nl, size_t x, size_t y, bool *out);

/**
 * Writes `x ∧ y`, or returns `NoMeet` when the pair has no common lower
 * bound.
 *
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_meet(const NlNearlattice *nl, size_t x, size_t y, size_t *out);

/**
 * Writes one flag per element (1 if the element is in the class) into
 * `flags`, which must hold at least `size` bytes.
 *
 * # Safety
 * `nl` must be a live handle and `flags` must point to `len` writable
 * bytes.
 */
NlStatus nl_classify(const NlNearlattice *nl, NlElementClass class_, uint8_t *flags, size_t len);

/**
 * Writes `π(a)` for every element into `table`.
 *
 * # Safety
 * `nl` must be a live handle and `table` must point to `len` writable
 * values.
 */
NlStatus nl_pi(const NlNearlattice *nl, size_t *table, size_t len);

/**
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_is_semi_boolean(const NlNearlattice *nl, bool *out);

/**
 * Whether the nearlattice is isomorphic to `N(S(A))` via `ê`.
 *
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_check_representation(const NlNearlattice *nl, bool *out);

/**
 * Number of elements of the free distributive lattice extension.
 *
 * # Safety
 * `nl` must be a live handle and `out` writable.
 */
NlStatus nl_free_extension_size(const NlNearlattice *nl, size_t *out);

/**
 * Copies the JSON analysis report, NUL-terminated, into `buf`. The size
 * required (including the NUL) is written to `needed` when it is not null.
 *
 * # Safety
 * `nl` must be a live handle; `buf` must be null or point to `len`
 * writable bytes; `needed` must be null or writable.
 */
NlStatus nl_analyze_json(const NlNearlattice *nl, char *buf, size_t len, size_t *needed);

/**
 * Copies the calling thread's last error message, NUL-terminated. The
 * size required is written to `needed` when it is not null.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes; `needed` must be
 * null or writable.
 */
NlStatus nl_last_error(char *buf, size_t len, size_t *needed);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NEARLAT_H */

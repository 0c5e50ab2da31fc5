#ifndef MINLOCAL_H
#define MINLOCAL_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MinlocalStatus {
  MINLOCAL_STATUS_OK = 0,
  MINLOCAL_STATUS_NULL_POINTER = 1,
  MINLOCAL_STATUS_INVALID_UTF8 = 2,
  MINLOCAL_STATUS_PARSE = 3,
  MINLOCAL_STATUS_INVALID_ARGUMENT = 4,
  MINLOCAL_STATUS_INSUFFICIENT_PRECISION = 5,
  MINLOCAL_STATUS_NOT_IN_GROUP = 6,
  MINLOCAL_STATUS_UNSUPPORTED = 7,
  MINLOCAL_STATUS_COMPUTATION = 8,
  MINLOCAL_STATUS_PANIC = 9,
} MinlocalStatus;

typedef enum MinlocalTri {
  MINLOCAL_TRI_YES = 0,
  MINLOCAL_TRI_NO = 1,
  MINLOCAL_TRI_UNKNOWN = 2,
} MinlocalTri;

/**
 * Opaque Iwasawa decomposition handle.
 */
typedef struct MinlocalIwasawa MinlocalIwasawa;

/**
 * Opaque verdict handle.
 */
typedef struct MinlocalVerdict MinlocalVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *minlocal_last_error(void);

/**
 * Library version as a static string.
 */
const char *minlocal_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer returned by a `_to_json` function that has
 * not been freed yet.
 */
void minlocal_string_free(char *s);

/**
 * Decides `group(n, field)` and stores a new verdict handle in `*out`.
 *
 * # Safety
 * `group` and `field` must be NUL-terminated strings; `out` must be valid
 * for writes.
 */
enum MinlocalStatus minlocal_decide(const char *group,
                                    const char *field,
                                    uint64_t n,
                                    struct MinlocalVerdict **out);

/**
 * # Safety
 * `v` must be null or a live verdict handle.
 */
enum MinlocalTri minlocal_verdict_minimal(const struct MinlocalVerdict *v);

/**
 * # Safety
 * `v` must be null or a live verdict handle.
 */
enum MinlocalTri minlocal_verdict_totally_minimal(const struct MinlocalVerdict *v);

/**
 * Citation tag, owned by the handle.
 *
 * # Safety
 * `v` must be null or a live verdict handle.
 */
const char *minlocal_verdict_citation(const struct MinlocalVerdict *v);

/**
 * # Safety
 * `v` must be null or a live verdict handle.
 */
bool minlocal_verdict_has_witness(const struct MinlocalVerdict *v);

/**
 * The verdict record as JSON; free with [`minlocal_string_free`].
 *
 * # Safety
 * `v` must be null or a live verdict handle.
 */
char *minlocal_verdict_to_json(const struct MinlocalVerdict *v);

/**
 * # Safety
 * `v` must be null or a handle from [`minlocal_decide`] not yet freed.
 */
void minlocal_verdict_free(struct MinlocalVerdict *v);

/**
 * `|μ_n(F)|`.
 *
 * # Safety
 * `field` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum MinlocalStatus minlocal_mu_order(const char *field, uint64_t n, uint64_t *out);

/**
 * Number of solutions of `x^n = 1` in `Z_p`, counted by Hensel lifting.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MinlocalStatus minlocal_hensel_root_count(uint64_t p,
                                               uint64_t n,
                                               uint32_t start_precision,
                                               uint64_t *out);

/**
 * `[F^× : F^×n]` for a complete field. When the index is infinite,
 * `*infinite` is set and `*out` is 0.
 *
 * # Safety
 * `field` must be a NUL-terminated string; `out` and `infinite` must be
 * valid for writes.
 */
enum MinlocalStatus minlocal_power_class_index(const char *field,
                                               uint64_t n,
                                               uint64_t *out,
                                               bool *infinite);

/**
 * Teichmüller representative of `a mod p`, as an integer modulo `p^precision`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MinlocalStatus minlocal_teichmuller(uint64_t a, uint64_t p, uint32_t precision, uint64_t *out);

/**
 * Iwasawa decomposition of a matrix in the CLI text format over `R`, `C`
 * or `Qp=p`.
 *
 * # Safety
 * `field` and `matrix` must be NUL-terminated strings; `out` must be valid
 * for writes.
 */
enum MinlocalStatus minlocal_iwasawa(const char *field,
                                     const char *matrix,
                                     uint32_t precision,
                                     struct MinlocalIwasawa **out);

/**
 * Triangular factor in the matrix text format, owned by the handle.
 *
 * # Safety
 * `h` must be null or a live decomposition handle.
 */
const char *minlocal_iwasawa_b(const struct MinlocalIwasawa *h);

/**
 * Compact factor in the matrix text format, owned by the handle.
 *
 * # Safety
 * `h` must be null or a live decomposition handle.
 */
const char *minlocal_iwasawa_k(const struct MinlocalIwasawa *h);

/**
 * # Safety
 * `h` must be null or a live decomposition handle.
 */
bool minlocal_iwasawa_verified(const struct MinlocalIwasawa *h);

/**
 * # Safety
 * `h` must be null or a live decomposition handle.
 */
char *minlocal_iwasawa_to_json(const struct MinlocalIwasawa *h);

/**
 * # Safety
 * `h` must be null or a handle from [`minlocal_iwasawa`] not yet freed.
 */
void minlocal_iwasawa_free(struct MinlocalIwasawa *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINLOCAL_H */

#ifndef MGIDEAL_H
#define MGIDEAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible function.
 */
typedef enum MgStatus {
  MG_STATUS_OK = 0,
  MG_STATUS_NULL_POINTER = 1,
  MG_STATUS_INVALID_UTF8 = 2,
  MG_STATUS_INVALID_ARGUMENT = 3,
  MG_STATUS_PARSE = 4,
  MG_STATUS_NOT_HOMOGENEOUS = 5,
  MG_STATUS_REQUIRES_MONOMIAL = 6,
  MG_STATUS_REQUIRES_SQUAREFREE = 7,
  MG_STATUS_RESOURCE_LIMIT = 8,
  MG_STATUS_HYPOTHESIS_NOT_SATISFIED = 9,
  MG_STATUS_PRECONDITION = 10,
  MG_STATUS_INTERNAL_CONSISTENCY = 11,
  MG_STATUS_PANIC = 12,
} MgStatus;

typedef enum MgGrading {
  MG_GRADING_COLUMN = 0,
  MG_GRADING_ROW = 1,
} MgGrading;

typedef enum MgOrder {
  MG_ORDER_DEGREVLEX = 0,
  MG_ORDER_LEX = 1,
} MgOrder;

typedef enum MgVerdict {
  MG_VERDICT_NO = 0,
  MG_VERDICT_YES = 1,
  MG_VERDICT_INCONCLUSIVE = 2,
} MgVerdict;

/**
 * An ideal of an [`MgRing`]; it keeps its own copy of the ring.
 */
typedef struct MgIdeal MgIdeal;

/**
 * A multigraded polynomial ring over a prime field.
 */
typedef struct MgRing MgRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the library
 * and valid until the next call into it from the same thread.
 */
const char *mg_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void mg_string_free(char *s);

/**
 * Creates the ring with `num_blocks` blocks of the given sizes over F_p.
 * Pass `characteristic = 0` for the default prime.
 *
 * # Safety
 * `block_sizes` must point to `num_blocks` values; `out` must be writable.
 */
enum MgStatus mg_ring_new(const size_t *block_sizes,
                          size_t num_blocks,
                          uint32_t characteristic,
                          struct MgRing **out);

/**
 * # Safety
 * `ring` must be null or a live handle from [`mg_ring_new`].
 */
void mg_ring_free(struct MgRing *ring);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `ring` must be null or a live handle.
 */
size_t mg_ring_num_vars(const struct MgRing *ring);

/**
 * Builds the ideal generated by `num_generators` multihomogeneous polynomials
 * written like `x[1,1]*x[2,2] - x[1,2]*x[2,1]`.
 *
 * # Safety
 * `generators` must point to `num_generators` NUL-terminated strings.
 */
enum MgStatus mg_ideal_new(const struct MgRing *ring,
                           const char *const *generators,
                           size_t num_generators,
                           struct MgIdeal **out);

/**
 * Ideal of `t`-minors of a random matrix with full-rank coefficients. A
 * column-graded matrix has `size` rows and one column per block; a row-graded
 * one has one row per block and `size` columns.
 *
 * # Safety
 * `ring` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_ideal_random_minors(const struct MgRing *ring,
                                     enum MgGrading grading,
                                     size_t size,
                                     size_t t,
                                     uint64_t seed,
                                     struct MgIdeal **out);

/**
 * # Safety
 * `ideal` must be null or a live handle.
 */
void mg_ideal_free(struct MgIdeal *ideal);

/**
 * Generators as text, separated by `", "`.
 *
 * # Safety
 * `ideal` must be a live handle; the result must be freed with [`mg_string_free`].
 */
enum MgStatus mg_ideal_to_string(const struct MgIdeal *ideal, char **out);

/**
 * Reduced Gröbner basis as text, one element per line.
 *
 * # Safety
 * `ideal` must be a live handle; the result must be freed with [`mg_string_free`].
 */
enum MgStatus mg_ideal_groebner_basis(const struct MgIdeal *ideal, enum MgOrder order, char **out);

/**
 * Initial ideal as a new handle.
 *
 * # Safety
 * `ideal` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_ideal_initial(const struct MgIdeal *ideal,
                               enum MgOrder order,
                               struct MgIdeal **out);

/**
 * Generic initial ideal under degrevlex. `conclusive` (optional) reports whether
 * the trials agreed and the result is Borel fixed.
 *
 * # Safety
 * `ideal` must be a live handle; `out` must be writable; `conclusive` may be null.
 */
enum MgStatus mg_ideal_gin(const struct MgIdeal *ideal,
                           size_t trials,
                           uint64_t seed,
                           struct MgIdeal **out,
                           bool *conclusive);

/**
 * Whether the ideal is Cartwright–Sturmfels (its generic initial ideal is radical).
 *
 * # Safety
 * `ideal` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_ideal_is_cs(const struct MgIdeal *ideal,
                             size_t trials,
                             uint64_t seed,
                             enum MgVerdict *out);

/**
 * Whether the ideal is Cartwright–Sturmfels* (its generic initial ideal is
 * generated by products of first variables of blocks).
 *
 * # Safety
 * `ideal` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_ideal_is_csstar(const struct MgIdeal *ideal,
                                 size_t trials,
                                 uint64_t seed,
                                 enum MgVerdict *out);

/**
 * Runs a session script. `exit_code` receives the CLI exit code; `output` and
 * `errors` (both optional) receive stdout and stderr text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; returned strings must be freed with
 * [`mg_string_free`].
 */
enum MgStatus mg_run_script(const char *text,
                            uint64_t seed,
                            bool json,
                            int32_t *exit_code,
                            char **output,
                            char **errors);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MGIDEAL_H */

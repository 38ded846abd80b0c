#ifndef FFCOUNT_H
#define FFCOUNT_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FfStatus {
  FF_STATUS_OK = 0,
  FF_STATUS_NULL_POINTER = 1,
  FF_STATUS_INVALID_ARGUMENT = 2,
  FF_STATUS_INVALID_FIELD = 3,
  FF_STATUS_SYNTAX = 4,
  /**
   * A hypothesis of the requested formula does not hold.
   */
  FF_STATUS_PRECONDITION = 5,
  FF_STATUS_BUDGET_EXCEEDED = 6,
  /**
   * The count does not fit in 64 bits.
   */
  FF_STATUS_OVERFLOW = 7,
  FF_STATUS_MISMATCHED_FIELDS = 8,
  FF_STATUS_INTERNAL = 9,
} FfStatus;

typedef enum FfMethod {
  FF_METHOD_CLOSED_FORM_B0 = 0,
  FF_METHOD_CLOSED_FORM_BNZ = 1,
  FF_METHOD_FULL_THEOREM = 2,
  FF_METHOD_BRUTE_FORCE = 3,
  FF_METHOD_CHARACTER_SUM = 4,
  FF_METHOD_GAUSS_VECTOR = 5,
} FfMethod;

typedef enum FfBranch {
  FF_BRANCH_NONE = 0,
  FF_BRANCH_B_ZERO = 1,
  FF_BRANCH_ETA_ONE = 2,
  FF_BRANCH_ETA_NOT_ONE = 3,
} FfBranch;

typedef enum FfReason {
  FF_REASON_NONE = 0,
  FF_REASON_DOES_NOT_DIVIDE_GROUP_ORDER = 1,
  FF_REASON_ODD_EXTENSION_DEGREE = 2,
  FF_REASON_NO_ADMISSIBLE_LEVEL = 3,
} FfReason;

/**
 * Opaque field handle.
 */
typedef struct FfField FfField;

/**
 * Opaque polynomial handle.
 */
typedef struct FfPoly FfPoly;

typedef struct FfCount {
  uint64_t count;
  enum FfMethod method;
  enum FfBranch branch;
  bool star;
  bool approximate;
} FfCount;

typedef struct FfClassification {
  bool admissible;
  uint32_t r;
  uint32_t h;
  /**
   * `2 | d` and `(p^r + 1)/d` odd.
   */
  bool even_d_odd_quotient;
  int64_t c1;
  int64_t c2;
  enum FfReason reason;
} FfClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates F_{p^m}. `modulus` holds m + 1 coefficients, low degree first,
 * or is null for the default modulus.
 *
 * # Safety
 * `modulus` must be null or point to `modulus_len` values; `out` must be writable.
 */
enum FfStatus ff_field_new(uint64_t p,
                           uint32_t m,
                           const uint64_t *modulus,
                           size_t modulus_len,
                           struct FfField **out);

/**
 * # Safety
 * `field` must be null or a handle from `ff_field_new` not yet freed.
 */
void ff_field_free(struct FfField *field);

/**
 * Field order q, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint64_t ff_field_order(const struct FfField *field);

/**
 * Parses a polynomial such as `"g*x^17 + g^18*y^17 - 1"` over `field`.
 *
 * # Safety
 * `field` must be a live handle, `text` a NUL-terminated string, `out` writable.
 */
enum FfStatus ff_poly_parse(const struct FfField *field, const char *text, struct FfPoly **out);

/**
 * # Safety
 * `poly` must be null or a handle from `ff_poly_parse` not yet freed.
 */
void ff_poly_free(struct FfPoly *poly);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `poly` must be null or a live handle.
 */
size_t ff_poly_n_vars(const struct FfPoly *poly);

/**
 * The polynomial in the parser's syntax; free with `ff_string_free`.
 *
 * # Safety
 * `poly` must be null or a live handle.
 */
char *ff_poly_to_string(const struct FfPoly *poly);

/**
 * N*(g) for a diagonal g by the closed form.
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum FfStatus ff_count_star(const struct FfPoly *poly, struct FfCount *out);

/**
 * N(f) for a full f from a *-equivalent diagonal witness.
 *
 * # Safety
 * `f` and `witness` must be live handles and `out` writable.
 */
enum FfStatus ff_count_full(const struct FfPoly *f,
                            const struct FfPoly *witness,
                            struct FfCount *out);

/**
 * Exhaustive N (or N* when `star`), visiting at most `budget` points.
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum FfStatus ff_brute_force(const struct FfPoly *poly,
                             bool star,
                             uint64_t budget,
                             struct FfCount *out);

/**
 * N* from Gauss sums over the solutions of the degree system mod q - 1.
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum FfStatus ff_count_star_gaussvec(const struct FfPoly *poly,
                                     uint64_t budget,
                                     struct FfCount *out);

/**
 * Admissibility of d over `field`.
 *
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfStatus ff_classify(const struct FfField *field, uint64_t d, struct FfClassification *out);

/**
 * *-equivalence test. `constant_column` is -1 for automatic, 0 off, 1 on.
 *
 * # Safety
 * `f` and `g` must be live handles and `out` writable.
 */
enum FfStatus ff_star_equivalent(const struct FfPoly *f,
                                 const struct FfPoly *g,
                                 int32_t constant_column,
                                 bool *out);

/**
 * Numeric Gauss sum of `eta_d^j`.
 *
 * # Safety
 * `field` must be a live handle; `re` and `im` writable.
 */
enum FfStatus ff_gauss_sum(const struct FfField *field,
                           uint64_t d,
                           uint64_t j,
                           double *re,
                           double *im);

/**
 * Message for the last failure on this thread, or null. Free with
 * `ff_string_free`.
 */
char *ff_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ff_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FFCOUNT_H */

#ifndef CLUSTERPIC_H
#define CLUSTERPIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed picture text or root expression.
   */
  CP_STATUS_PARSE = 3,
  /**
   * Unusable input: bad prime, bad JSON, unknown transform, ...
   */
  CP_STATUS_INPUT = 4,
  /**
   * Well-formed input outside an operation's domain (genus < 2, ...).
   */
  CP_STATUS_VALIDATION = 5,
  /**
   * The operation needs root values and the picture is abstract.
   */
  CP_STATUS_MISSING_ROOTS = 6,
  /**
   * A consistency check ran and failed; the result is still written.
   */
  CP_STATUS_IDENTITY_FAILURE = 7,
  CP_STATUS_PANIC = 8,
} CpStatus;

/**
 * An immutable cluster picture.
 */
typedef struct CpPicture CpPicture;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses picture notation such as `((* * *)_2 * * *)_0`. `vcf` is the
 * valuation of the leading coefficient as `"a"` or `"a/b"`; NULL means 0.
 *
 * # Safety
 * `text` and `vcf` are NULL or NUL-terminated; `out` is valid for writes.
 */
enum CpStatus cp_picture_parse(const char *text, const char *vcf, struct CpPicture **out);

/**
 * Loads any accepted input: roots JSON, abstract-picture JSON or notation.
 * A nonzero `p` overrides the prime of a roots input.
 *
 * # Safety
 * `input` is NULL or NUL-terminated; `out` is valid for writes.
 */
enum CpStatus cp_picture_load(const char *input, uint64_t p, struct CpPicture **out);

/**
 * # Safety
 * `picture` is NULL or a handle not yet freed.
 */
void cp_picture_free(struct CpPicture *picture);

/**
 * Canonical notation of the picture.
 *
 * # Safety
 * `picture` is a live handle; `out` is valid for writes.
 */
enum CpStatus cp_picture_text(const struct CpPicture *picture, char **out);

/**
 * # Safety
 * `picture` is a live handle; `out` is valid for writes.
 */
enum CpStatus cp_picture_genus(const struct CpPicture *picture, size_t *out);

/**
 * # Safety
 * `picture` is a live handle; `out` is valid for writes.
 */
enum CpStatus cp_picture_num_roots(const struct CpPicture *picture, size_t *out);

/**
 * Clusters with depths, relative depths, `nu` and integrality flags.
 *
 * # Safety
 * `picture` is a live handle; `out` is valid for writes.
 */
enum CpStatus cp_cluster_json(const struct CpPicture *picture, char **out);

/**
 * Greedy sequence, exponents and differentials. A non-NULL `tie_seed`
 * breaks incomparable ties at random with that seed.
 *
 * # Safety
 * `picture` is a live handle; `tie_seed` is NULL or readable; `out` is valid
 * for writes.
 */
enum CpStatus cp_basis_json(const struct CpPicture *picture, const uint64_t *tie_seed, char **out);

/**
 * `eight_v_lambda`, `v_lambda`, `integral`, `v_disc`, `hyperdisc_order`.
 *
 * # Safety
 * `picture` is a live handle; `out` is valid for writes.
 */
enum CpStatus cp_lambda_json(const struct CpPicture *picture, char **out);

/**
 * Discriminant valuation from the tree and from the roots. Needs a picture
 * built from roots; returns `IdentityFailure` if the two disagree.
 *
 * # Safety
 * `picture` is a live handle; `out` is valid for writes.
 */
enum CpStatus cp_disc_json(const struct CpPicture *picture, char **out);

/**
 * Applies `op` (`deepen:t`, `add-root`, `redistribute:<path>:t`,
 * `scale-leading:m`, `rescale:t,s`, `shift:z`). Either output may be NULL.
 * Returns `IdentityFailure`, with outputs written, when the predicted and
 * actual changes of `8 v(lambda)` differ.
 *
 * # Safety
 * `picture` is a live handle; `op` is NUL-terminated; the outputs are NULL
 * or valid for writes.
 */
enum CpStatus cp_transform(const struct CpPicture *picture,
                           const char *op,
                           struct CpPicture **out_picture,
                           char **out_report);

/**
 * Enumerates pictures with up to `max_roots` roots over the grids given as
 * comma-separated lists (NULL for the defaults `1,2,3` / `0,1` / `0,2`)
 * and cross-validates each. `sample` > 0 checks a seeded uniform sample.
 * Returns `IdentityFailure`, with the report written, on any failure.
 *
 * # Safety
 * The list arguments are NULL or NUL-terminated; `out` is valid for writes.
 */
enum CpStatus cp_check_json(size_t max_roots,
                            const char *depths,
                            const char *top_depths,
                            const char *vcfs,
                            size_t sample,
                            uint64_t seed,
                            size_t jobs,
                            char **out);

/**
 * # Safety
 * `s` is NULL or a string returned by this library and not yet freed.
 */
void cp_string_free(char *s);

/**
 * Message for the last failed call on this thread, or NULL after a
 * success. Valid until the next call into this library on the same thread.
 */
const char *cp_last_error(void);

/**
 * Library version, a static string.
 */
const char *cp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLUSTERPIC_H */

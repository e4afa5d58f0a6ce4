#ifndef HYPERCONE_H
#define HYPERCONE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. `Ok` and `Counterexample` mirror the command line exit codes 0 and 1.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  /**
   * The computation succeeded and produced a verified counterexample.
   */
  HC_STATUS_COUNTEREXAMPLE = 1,
  HC_STATUS_INVALID_INPUT = 2,
  HC_STATUS_NULL_POINTER = 3,
  HC_STATUS_INVALID_UTF8 = 4,
  HC_STATUS_DIMENSION = 5,
  HC_STATUS_NOT_COMPARABLE = 6,
  HC_STATUS_BUDGET_EXCEEDED = 7,
  HC_STATUS_NOT_PROBABILITY = 8,
  HC_STATUS_PRECONDITION_FAILED = 9,
  HC_STATUS_UNSUPPORTED = 10,
  /**
   * A panic was caught at the boundary.
   */
  HC_STATUS_INTERNAL = 99,
} HcStatus;

/**
 * A weighted discrete cone `[0, inf]^n`.
 */
typedef struct HcCone HcCone;

/**
 * A finite poset.
 */
typedef struct HcPoset HcPoset;

/**
 * A vector with coordinates in `[0, inf]`.
 */
typedef struct HcVec HcVec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the library
 * and valid until the next call on the same thread.
 */
const char *hc_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void hc_string_free(char *s);

/**
 * Weights `num[i] / den[i]`, all strictly positive.
 *
 * # Safety
 * `num` and `den` must point to `n` readable values; `out` must be writable.
 */
enum HcStatus hc_cone_new(const int64_t *num, const int64_t *den, size_t n, struct HcCone **out);

/**
 * `n` equal weights summing to one.
 *
 * # Safety
 * `out` must be writable.
 */
enum HcStatus hc_cone_uniform(size_t n, struct HcCone **out);

/**
 * # Safety
 * `cone` must be null or a live handle from this library.
 */
void hc_cone_free(struct HcCone *cone);

/**
 * # Safety
 * `cone` must be a live handle.
 */
size_t hc_cone_dim(const struct HcCone *cone);

/**
 * Parse a JSON array such as `[1, "1/2", "inf"]`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HcStatus hc_vec_from_json(const char *json, struct HcVec **out);

/**
 * # Safety
 * `v` must be null or a live handle from this library.
 */
void hc_vec_free(struct HcVec *v);

/**
 * # Safety
 * `v` must be a live handle.
 */
size_t hc_vec_len(const struct HcVec *v);

/**
 * The vector as a JSON array. Free the result with [`hc_string_free`].
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_vec_to_json(const struct HcVec *v, char **out);

/**
 * `||f||_p` for a tag such as `"-1"`, `"1/2"`, `"-inf"`, `"0+"` or `"0-"`.
 *
 * `exact` may be null; otherwise it receives 1 when the value is exact.
 *
 * # Safety
 * Handles must be live, `tag` NUL-terminated and `value` writable.
 */
enum HcStatus hc_lp_norm(const struct HcCone *cone,
                         const struct HcVec *f,
                         const char *tag,
                         double *value,
                         int32_t *exact);

/**
 * Parse `{"elements": [...], "leq": [[i, j], ...]}`; the order is the reflexive-transitive closure.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HcStatus hc_poset_from_json(const char *json, struct HcPoset **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void hc_poset_free(struct HcPoset *p);

/**
 * # Safety
 * `p` must be a live handle.
 */
size_t hc_poset_len(const struct HcPoset *p);

/**
 * Number of cuts in the Dedekind-MacNeille completion.
 *
 * # Safety
 * `p` must be a live handle; `cuts` must be writable.
 */
enum HcStatus hc_poset_dm_size(const struct HcPoset *p, size_t *cuts);

/**
 * Run a command line such as `{"norm", "--p", "-inf", "--f", "[3,1,2]"}` (without the
 * program name) and return its JSON report. The status is [`HcStatus::Ok`] or
 * [`HcStatus::Counterexample`] when a report was produced.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; `out` must be writable.
 */
enum HcStatus hc_command(const char *const *argv, size_t argc, char **out);

/**
 * Number of acceptance criteria; valid ids are `1..=hc_suite_len()`.
 */
uint32_t hc_suite_len(void);

/**
 * Run one acceptance criterion. `passed` receives 1 or 0; `detail` may be
 * null, otherwise it receives a string to free with [`hc_string_free`].
 *
 * # Safety
 * `passed` must be writable; `detail` null or writable.
 */
enum HcStatus hc_suite_run(uint32_t id, uint64_t seed, int32_t *passed, char **detail);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERCONE_H */

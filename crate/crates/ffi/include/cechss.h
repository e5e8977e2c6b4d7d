#ifndef CECHSS_H
#define CECHSS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which ideal of the groups a cohomology query refers to.
 */
typedef enum CechssIdeal {
  CECHSS_IDEAL_SUM = 0,
  CECHSS_IDEAL_PRODUCT = 1,
} CechssIdeal;

typedef enum CechssStatus {
  CECHSS_STATUS_OK = 0,
  CECHSS_STATUS_NULL_ARGUMENT = 1,
  CECHSS_STATUS_INVALID_UTF8 = 2,
  CECHSS_STATUS_INPUT_ERROR = 3,
  CECHSS_STATUS_CONTRACT_VIOLATION = 4,
  /**
   * A verification ran to completion and found mismatches.
   */
  CECHSS_STATUS_VERIFICATION_FAILED = 5,
  CECHSS_STATUS_INTERNAL = 6,
  CECHSS_STATUS_PANIC = 7,
} CechssStatus;

/**
 * Opaque problem handle.
 */
typedef struct CechssProblem CechssProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *cechss_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cechss_version(void);

/**
 * Parses a job file's JSON text into a problem handle.
 *
 * # Safety
 * `job_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CechssStatus cechss_problem_from_json(const char *job_json, struct CechssProblem **out);

/**
 * Releases a problem handle. Null is ignored.
 *
 * # Safety
 * `problem` must come from [`cechss_problem_from_json`] and not be used again.
 */
void cechss_problem_free(struct CechssProblem *problem);

/**
 * Number of variables and of multidegrees in the window.
 *
 * # Safety
 * All pointers must be valid; `problem` must be a live handle.
 */
enum CechssStatus cechss_problem_shape(const struct CechssProblem *problem,
                                       size_t *variables,
                                       size_t *groups,
                                       size_t *window_size);

/**
 * `dim H^i` at multidegree `degree` (length = variable count) of the sum
 * or product of all groups, with coefficients in `R/J`.
 *
 * # Safety
 * `degree` must point to `len` integers; `out` must be valid.
 */
enum CechssStatus cechss_local_cohomology(const struct CechssProblem *problem,
                                          enum CechssIdeal ideal,
                                          const int64_t *degree,
                                          size_t len,
                                          int64_t i,
                                          size_t *out);

/**
 * Compares interior and product-sequence cohomology over the window.
 * Writes the mismatch count and returns `VerificationFailed` when it is
 * nonzero. `jobs = 0` uses all cores.
 *
 * # Safety
 * `problem` must be a live handle and `mismatches` valid.
 */
enum CechssStatus cechss_verify_products(const struct CechssProblem *problem,
                                         size_t jobs,
                                         size_t *mismatches);

/**
 * Runs every task of the problem's job, writes the output files into
 * `out_dir` and hands back the report JSON (free with
 * [`cechss_string_free`]). Returns `VerificationFailed` with the report
 * still filled in when some check failed.
 *
 * # Safety
 * `out_dir` must be a NUL-terminated string; `report` must be valid.
 */
enum CechssStatus cechss_compute(const struct CechssProblem *problem,
                                 const char *out_dir,
                                 size_t jobs,
                                 char **report);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void cechss_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CECHSS_H */

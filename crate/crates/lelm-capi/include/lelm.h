/* C interface for the lelm Bell-state distinguishability toolkit. */

#ifndef LELM_H
#define LELM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every API function.
 */
typedef enum LelmStatus {
  LELM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LELM_STATUS_NULL_ARGUMENT = 1,
  /**
   * Arguments failed domain validation (dimension, set size, config).
   */
  LELM_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The run completed but a verification step failed.
   */
  LELM_STATUS_VERIFICATION_FAILED = 3,
  /**
   * Unexpected internal failure.
   */
  LELM_STATUS_INTERNAL_ERROR = 4,
} LelmStatus;

/**
 * Exchange statistics selector.
 */
typedef enum LelmStatistics {
  LELM_STATISTICS_BOSON = 0,
  LELM_STATISTICS_FERMION = 1,
} LelmStatistics;

/**
 * Verification chain selector.
 */
typedef enum LelmChain {
  LELM_CHAIN_PROJECTIVE_QUTRIT = 0,
  LELM_CHAIN_POVM_QUBIT = 1,
  LELM_CHAIN_POVM_QUTRIT = 2,
  LELM_CHAIN_SIX_SET_COVERAGE = 3,
} LelmChain;

/**
 * Opaque run report handle.
 */
typedef struct LelmReport LelmReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * NUL-terminated version string of the library; statically allocated, do
 * not free.
 */
const char *lelm_version(void);

/**
 * Classifies all size-k sets of qutrit Bell states (k = 4 or 6, d = 3).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum LelmStatus lelm_run_classify(size_t k, size_t d, struct LelmReport **out);

/**
 * Runs the feasibility-search campaign over all size-k subsets of the d²
 * Bell states with the given restarts and seed (other knobs at defaults).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum LelmStatus lelm_run_search(size_t k,
                                size_t d,
                                enum LelmStatistics statistics,
                                size_t restarts,
                                uint64_t seed,
                                struct LelmReport **out);

/**
 * Runs a no-go verification chain. Returns `LELM_STATUS_VERIFICATION_FAILED`
 * (with the report still delivered) if any step fails.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum LelmStatus lelm_run_nogo(enum LelmChain chain,
                              size_t samples,
                              uint64_t seed,
                              size_t restarts,
                              struct LelmReport **out);

/**
 * Whether every verification in the report passed.
 *
 * # Safety
 * `report` must be a live handle from this library; `out` must be writable.
 */
enum LelmStatus lelm_report_verified(const struct LelmReport *report, bool *out);

/**
 * Number of result records in the report.
 *
 * # Safety
 * `report` must be a live handle from this library; `out` must be writable.
 */
enum LelmStatus lelm_report_result_count(const struct LelmReport *report, size_t *out);

/**
 * Serializes the full report as a JSON document. Free the string with
 * `lelm_string_free`.
 *
 * # Safety
 * `report` must be a live handle from this library; `out` must be writable.
 */
enum LelmStatus lelm_report_to_json(const struct LelmReport *report, char **out);

/**
 * Releases a string allocated by this library. Null is a no-op.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void lelm_string_free(char *s);

/**
 * Releases a report handle. Null is a no-op.
 *
 * # Safety
 * `report` must have been returned by this library and not freed before.
 */
void lelm_report_free(struct LelmReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LELM_H */

#ifndef ORDEVAL_H
#define ORDEVAL_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum OrdevalStatus {
  ORDEVAL_STATUS_OK = 0,
  ORDEVAL_STATUS_NULL_POINTER = 1,
  ORDEVAL_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed CSV, schema violation, unknown column or attribute.
   */
  ORDEVAL_STATUS_INVALID_INPUT = 3,
  /**
   * Valid data but not enough labeled rows.
   */
  ORDEVAL_STATUS_TOO_FEW_ROWS = 4,
  ORDEVAL_STATUS_INVALID_PARAMS = 5,
  /**
   * A panic was caught at the boundary.
   */
  ORDEVAL_STATUS_PANIC = 6,
} OrdevalStatus;

/**
 * Opaque parsed dataset.
 */
typedef struct OrdevalDataset OrdevalDataset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses CSV text into a dataset.
 *
 * `id_column` may be null. Every column other than the response and the id
 * column is an attribute on the `scale_min..scale_max` scale, which also
 * applies to the response. Pass `0, 0` for the 1..5 default.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum OrdevalStatus ordeval_dataset_from_csv(const char *csv_text,
                                            const char *response,
                                            const char *id_column,
                                            int32_t scale_min,
                                            int32_t scale_max,
                                            struct OrdevalDataset **out);

/**
 * # Safety
 * `ds` must be null or a handle from [`ordeval_dataset_from_csv`] not yet freed.
 */
void ordeval_dataset_free(struct OrdevalDataset *ds);

/**
 * Number of rows, labeled or not. 0 for a null handle.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t ordeval_dataset_rows(const struct OrdevalDataset *ds);

/**
 * Number of attribute columns. 0 for a null handle.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t ordeval_dataset_attributes(const struct OrdevalDataset *ds);

/**
 * Full evaluation; writes the canonical report JSON to `out_json`.
 *
 * Zero for `k`, `resamples`, `alpha` or `tau` selects the default
 * (10, 200, 0.05 and 0.6).
 *
 * # Safety
 * `ds` must be a live handle and `out_json` writable.
 */
enum OrdevalStatus ordeval_evaluate(const struct OrdevalDataset *ds,
                                    uint32_t k,
                                    uint32_t resamples,
                                    double alpha,
                                    double tau,
                                    uint64_t seed,
                                    char **out_json);

/**
 * Cross-validates both learners and ranks the unlabeled rows.
 *
 * `folds == 0` selects 10. Writes `cv_report.json` and `ranking.json`
 * contents to the two out parameters.
 *
 * # Safety
 * `ds` must be a live handle and both out pointers writable.
 */
enum OrdevalStatus ordeval_predict(const struct OrdevalDataset *ds,
                                   uint32_t folds,
                                   uint64_t seed,
                                   char **out_cv_json,
                                   char **out_ranking_json);

/**
 * Renders the attribute-level plot from report JSON.
 *
 * # Safety
 * `report_json` must be NUL-terminated and `out_svg` writable.
 */
enum OrdevalStatus ordeval_render_summary_svg(const char *report_json,
                                              int colorblind,
                                              char **out_svg);

/**
 * Renders the value-level plot of one attribute from report JSON.
 *
 * # Safety
 * String arguments must be NUL-terminated and `out_svg` writable.
 */
enum OrdevalStatus ordeval_render_attribute_svg(const char *report_json,
                                                const char *attribute,
                                                int colorblind,
                                                char **out_svg);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ordeval_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *ordeval_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDEVAL_H */

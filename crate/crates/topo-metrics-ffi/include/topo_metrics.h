/* C interface for the topo-metrics embedding-quality library. */

#ifndef TOPO_METRICS_H
#define TOPO_METRICS_H

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every fallible call.
 */
typedef enum TopoStatus {
  /**
   * The call succeeded.
   */
  TOPO_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TOPO_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  TOPO_STATUS_INVALID_UTF8 = 2,
  /**
   * The input was rejected: bad arguments, malformed file, unknown name.
   */
  TOPO_STATUS_INPUT_ERROR = 3,
  /**
   * The computation itself failed on valid input.
   */
  TOPO_STATUS_COMPUTE_ERROR = 4,
  /**
   * An internal invariant was violated; the message has details.
   */
  TOPO_STATUS_PANIC = 5,
} TopoStatus;

/**
 * Opaque handle to an immutable point-cloud matrix.
 */
typedef struct TopoEmbedding TopoEmbedding;

/**
 * Opaque handle to a set of computed metric values.
 */
typedef struct TopoReport TopoReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build an embedding from a dense row-major buffer of `rows * cols`
 * doubles. The buffer is copied; the caller keeps ownership of `values`.
 *
 * # Safety
 * `values` must point to at least `rows * cols` readable doubles and
 * `out` must be a valid pointer.
 */
enum TopoStatus topo_embedding_new(const double *values,
                                   uint32_t rows,
                                   uint32_t cols,
                                   struct TopoEmbedding **out);

/**
 * Load an embedding from a CSV or packed binary file; the format is
 * inferred from the extension (`.bin` means binary).
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum TopoStatus topo_embedding_load(const char *path, struct TopoEmbedding **out);

/**
 * Number of points, or 0 if the handle is null.
 *
 * # Safety
 * `embedding` must be a live handle from this library or null.
 */
uint32_t topo_embedding_rows(const struct TopoEmbedding *embedding);

/**
 * Embedding dimension, or 0 if the handle is null.
 *
 * # Safety
 * `embedding` must be a live handle from this library or null.
 */
uint32_t topo_embedding_cols(const struct TopoEmbedding *embedding);

/**
 * Release an embedding handle. Null is a no-op.
 *
 * # Safety
 * `embedding` must be a handle from this library that has not been freed.
 */
void topo_embedding_free(struct TopoEmbedding *embedding);

/**
 * Compute metrics for an embedding.
 *
 * `metrics` is a comma-separated list of metric names, or null for all
 * nine. `distance` is `"euclidean"` or `"cosine"`, null meaning
 * euclidean. `subsample` caps the points used by the persistence metrics,
 * 0 meaning the default cap of 512; `seed` drives the subsample draw.
 *
 * # Safety
 * String arguments must be valid NUL-terminated strings or null;
 * `embedding` must be a live handle; `out` must be a valid pointer.
 */
enum TopoStatus topo_report_compute(const struct TopoEmbedding *embedding,
                                    const char *metrics,
                                    const char *distance,
                                    uint64_t subsample,
                                    uint64_t seed,
                                    struct TopoReport **out);

/**
 * Read one metric value out of a report by wire name.
 *
 * # Safety
 * `report` must be a live handle, `metric` a valid NUL-terminated string,
 * and `out` a valid pointer.
 */
enum TopoStatus topo_report_get(const struct TopoReport *report, const char *metric, double *out);

/**
 * Serialize a report as a JSON string. The result must be released with
 * `topo_string_free`.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum TopoStatus topo_report_to_json(const struct TopoReport *report, char **out);

/**
 * Release a report handle. Null is a no-op.
 *
 * # Safety
 * `report` must be a handle from this library that has not been freed.
 */
void topo_report_free(struct TopoReport *report);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be a string from this library that has not been freed.
 */
void topo_string_free(char *s);

/**
 * Message for the most recent failure on the calling thread. The pointer
 * stays valid until the next failing call on the same thread; do not free
 * it.
 */
const char *topo_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOPO_METRICS_H */

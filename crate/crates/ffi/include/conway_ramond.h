#ifndef CONWAY_RAMOND_H
#define CONWAY_RAMOND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of log-eigenvalues written by [`cr_frame_log_eigenvalues`].
 */
#define CR_RANK 12

typedef enum CrClassification {
  CR_CLASSIFICATION_CONSPIRATORIAL = 0,
  CR_CLASSIFICATION_NONCONSPIRATORIAL = 1,
  CR_CLASSIFICATION_SUSY_BREAKING = 2,
} CrClassification;

typedef enum CrLiftTag {
  CR_LIFT_TAG_BASE = 0,
  CR_LIFT_TAG_FLIP_LAST = 1,
  CR_LIFT_TAG_SHIFT_LAST = 2,
  CR_LIFT_TAG_FLIP_SHIFT_LAST = 3,
} CrLiftTag;

typedef enum CrStatus {
  CR_STATUS_OK = 0,
  CR_STATUS_NULL_POINTER = 1,
  CR_STATUS_INVALID_UTF8 = 2,
  CR_STATUS_PARSE_ERROR = 3,
  CR_STATUS_INVALID_ARGUMENT = 4,
  CR_STATUS_NO_MATCH = 5,
  CR_STATUS_AMBIGUOUS_MATCH = 6,
  CR_STATUS_PIPELINE_ERROR = 7,
  CR_STATUS_BUFFER_TOO_SMALL = 8,
  CR_STATUS_INDEX_OUT_OF_RANGE = 9,
  CR_STATUS_PANIC = 10,
} CrStatus;

/**
 * One classified class.
 */
typedef struct CrClassResult CrClassResult;

/**
 * A validated Frame shape.
 */
typedef struct CrFrameShape CrFrameShape;

/**
 * Results for a whole class table.
 */
typedef struct CrTable CrTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cr_version(void);

/**
 * Copy the calling thread's last error message.
 *
 * # Safety
 * `buf` must be NULL or valid for `len` bytes; `needed` must be NULL or valid.
 */
enum CrStatus cr_last_error_message(char *buf, size_t len, size_t *needed);

/**
 * Parse and validate a Frame shape such as `"1^8 2^8"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum CrStatus cr_frame_parse(const char *text, struct CrFrameShape **out);

/**
 * # Safety
 * `f` must be NULL or a handle from [`cr_frame_parse`] not yet freed.
 */
void cr_frame_free(struct CrFrameShape *f);

/**
 * # Safety
 * `f` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_frame_trace(const struct CrFrameShape *f, int64_t *out);

/**
 * # Safety
 * `f` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_frame_order(const struct CrFrameShape *f, uint64_t *out);

/**
 * # Safety
 * `f` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_frame_is_balanced(const struct CrFrameShape *f, bool *out);

/**
 * Twelve log-eigenvalues in `[0, 1/2]`, ascending, as reduced fractions.
 *
 * # Safety
 * `f` must be a live handle; `num` and `den` must each hold 12 values.
 */
enum CrStatus cr_frame_log_eigenvalues(const struct CrFrameShape *f, int64_t *num, int64_t *den);

/**
 * Canonical text of the shape.
 *
 * # Safety
 * `f` must be a live handle; buffer rules as in the module docs.
 */
enum CrStatus cr_frame_to_string(const struct CrFrameShape *f,
                                 char *buf,
                                 size_t len,
                                 size_t *needed);

/**
 * Run the pipeline on one shape at truncation `t_num/t_den`.
 *
 * # Safety
 * `f` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_classify(const struct CrFrameShape *f,
                          int64_t t_num,
                          int64_t t_den,
                          struct CrClassResult **out);

/**
 * # Safety
 * `r` must be NULL or a handle from [`cr_classify`] not yet freed.  Results
 * borrowed from a table must not be freed this way.
 */
void cr_result_free(struct CrClassResult *r);

/**
 * # Safety
 * `r` must be a live handle; outputs valid for writes.
 */
enum CrStatus cr_result_counts(const struct CrClassResult *r, uint64_t *bosons, uint64_t *fermions);

/**
 * # Safety
 * `r` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_result_classification(const struct CrClassResult *r, enum CrClassification *out);

/**
 * # Safety
 * `r` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_result_lift(const struct CrClassResult *r, enum CrLiftTag *out);

/**
 * The (constant) Witten index `Z^R`.
 *
 * # Safety
 * `r` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_result_z_r(const struct CrClassResult *r, int64_t *out);

/**
 * `Z^NS` below the truncation as lines `"exponent coefficient\n"`.
 *
 * # Safety
 * `r` must be a live handle; buffer rules as in the module docs.
 */
enum CrStatus cr_result_z_ns(const struct CrClassResult *r, char *buf, size_t len, size_t *needed);

/**
 * Co₀ class name (empty for results from [`cr_classify`]).
 *
 * # Safety
 * `r` must be a live handle; buffer rules as in the module docs.
 */
enum CrStatus cr_result_co0_name(const struct CrClassResult *r,
                                 char *buf,
                                 size_t len,
                                 size_t *needed);

/**
 * Co₁ class name (empty for results from [`cr_classify`]).
 *
 * # Safety
 * `r` must be a live handle; buffer rules as in the module docs.
 */
enum CrStatus cr_result_co1_name(const struct CrClassResult *r,
                                 char *buf,
                                 size_t len,
                                 size_t *needed);

/**
 * Classify every row of the bundled Co₀ table.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CrStatus cr_table_run_bundled(int64_t t_num, int64_t t_den, struct CrTable **out);

/**
 * # Safety
 * `t` must be NULL or a handle from [`cr_table_run_bundled`] not yet freed.
 */
void cr_table_free(struct CrTable *t);

/**
 * # Safety
 * `t` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_table_len(const struct CrTable *t, size_t *out);

/**
 * Borrow row `i`; the pointer stays valid until the table is freed.
 *
 * # Safety
 * `t` must be a live handle; `out` valid for writes.
 */
enum CrStatus cr_table_get(const struct CrTable *t, size_t i, const struct CrClassResult **out);

/**
 * Per-Co₁-class totals.
 *
 * # Safety
 * `t` must be a live handle; outputs valid for writes.
 */
enum CrStatus cr_table_summary(const struct CrTable *t,
                               size_t *conspiratorial,
                               size_t *susy_breaking,
                               size_t *nonconspiratorial);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONWAY_RAMOND_H */

#ifndef WAFOM_NETS_H
#define WAFOM_NETS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WnStatus {
  WN_STATUS_OK = 0,
  WN_STATUS_NULL_POINTER = 1,
  WN_STATUS_INVALID_ARGUMENT = 2,
  WN_STATUS_PARSE = 3,
  WN_STATUS_INFEASIBLE = 4,
  WN_STATUS_IO = 5,
  WN_STATUS_TARGET_NOT_MET = 6,
  WN_STATUS_PANIC = 7,
} WnStatus;

typedef enum WnTargetKind {
  WN_TARGET_KIND_MIN_WAFOM = 0,
  WN_TARGET_KIND_DELTA = 1,
  WN_TARGET_KIND_MAX_DELTA = 2,
} WnTargetKind;

/**
 * Generating matrices handle.
 */
typedef struct WnMatrices WnMatrices;

/**
 * Weight sequence handle.
 */
typedef struct WnWeights WnWeights;

typedef struct WnShape {
  uint32_t base;
  uintptr_t dim;
  uintptr_t precision;
  uintptr_t log_size;
} WnShape;

/**
 * Merit of a net. `delta_truncated` is NaN when no dual element in the box weighs at
 * most `floor`. Bounds are given linearly and as natural logarithms.
 */
typedef struct WnMeritReport {
  double truncated_wafom;
  double delta;
  double delta_truncated;
  double floor;
  double tail_bound;
  double wce_bound;
  double ln_tail_bound;
  double ln_wce_bound;
} WnMeritReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *wn_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *wn_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void wn_string_free(char *s);

/**
 * Parses a weight rule such as `power:a=1,r=1,c=0` for base `base`.
 *
 * # Safety
 * `spec` must be a nul-terminated string; `out` must be writable.
 */
enum WnStatus wn_weights_parse(const char *spec, uint32_t base, struct WnWeights **out);

/**
 * # Safety
 * `w` must be null or a handle from [`wn_weights_parse`], not yet freed.
 */
void wn_weights_free(struct WnWeights *w);

/**
 * Matrices of trial `trial` under `seed`, with uniform independent entries.
 *
 * # Safety
 * `out` must be writable.
 */
enum WnStatus wn_matrices_random(uint32_t base,
                                 uintptr_t dim,
                                 uintptr_t precision,
                                 uintptr_t log_size,
                                 uint64_t seed,
                                 uint64_t trial,
                                 struct WnMatrices **out);

/**
 * Parses the text matrix format (`b s l d` header, then `s l` rows of `d` digits).
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum WnStatus wn_matrices_parse(const char *text, struct WnMatrices **out);

/**
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum WnStatus wn_matrices_read(const char *path, struct WnMatrices **out);

/**
 * Text form of the matrices; release with [`wn_string_free`].
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum WnStatus wn_matrices_write(const struct WnMatrices *m, char **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum WnStatus wn_matrices_shape(const struct WnMatrices *m, struct WnShape *out);

/**
 * # Safety
 * `m` must be null or a live handle, not yet freed.
 */
void wn_matrices_free(struct WnMatrices *m);

/**
 * Merit report of a net under Walsh-space weights.
 *
 * # Safety
 * `m` and `w` must be live handles; `out` must be writable.
 */
enum WnStatus wn_merit(const struct WnMatrices *m,
                       const struct WnWeights *w,
                       struct WnMeritReport *out);

/**
 * Minimal modified Dick weight of the dual net, floor included.
 *
 * # Safety
 * `m` and `w` must be live handles; `out` must be writable.
 */
enum WnStatus wn_min_dual_weight(const struct WnMatrices *m,
                                 const struct WnWeights *w,
                                 double *out);

/**
 * Natural logarithm of the lower bound on the n-th minimal error in dimension `dim`.
 *
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum WnStatus wn_lower_bound_n_ln(uint64_t n,
                                  uintptr_t dim,
                                  const struct WnWeights *w,
                                  double *out);

/**
 * Random search. `target_value` is the threshold `M` for [`WnTargetKind::Delta`] and is
 * ignored otherwise. The best net and its report are written even when the threshold
 * is missed, in which case [`WnStatus::TargetNotMet`] is returned.
 *
 * # Safety
 * `w` must be a live handle; `out_matrices` and `out_report` must be writable.
 */
enum WnStatus wn_search(uintptr_t dim,
                        uintptr_t log_size,
                        uintptr_t precision,
                        const struct WnWeights *w,
                        enum WnTargetKind target_kind,
                        double target_value,
                        uint64_t trials,
                        uint64_t seed,
                        struct WnMatrices **out_matrices,
                        struct WnMeritReport *out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAFOM_NETS_H */

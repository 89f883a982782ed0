#ifndef FOCKPERM_H
#define FOCKPERM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FockpermStatus {
  FOCKPERM_STATUS_OK = 0,
  FOCKPERM_STATUS_NULL_POINTER = 1,
  FOCKPERM_STATUS_PARSE = 2,
  FOCKPERM_STATUS_DIMENSION = 3,
  FOCKPERM_STATUS_GUARD = 4,
  FOCKPERM_STATUS_INVALID = 5,
  FOCKPERM_STATUS_PANIC = 6,
} FockpermStatus;

typedef enum FockpermAlgorithm {
  FOCKPERM_ALGORITHM_NAIVE = 0,
  FOCKPERM_ALGORITHM_RYSER_GRAY = 1,
  FOCKPERM_ALGORITHM_GLYNN = 2,
  FOCKPERM_ALGORITHM_KAN_GENERALIZED = 3,
  FOCKPERM_ALGORITHM_KAN_REDUCED = 4,
  FOCKPERM_ALGORITHM_GLYNN_GENERALIZED = 5,
} FockpermAlgorithm;

/**
 * Opaque matrix handle.
 */
typedef struct FockpermMatrix FockpermMatrix;

typedef struct FockpermPermanent {
  double re;
  double im;
  uint64_t terms;
  uint64_t wall_ns;
} FockpermPermanent;

typedef struct FockpermEstimate {
  double re;
  double im;
  double std_error;
  uint64_t samples;
} FockpermEstimate;

/**
 * Term-count model; counts saturate at `UINT64_MAX`.
 */
typedef struct FockpermRuntime {
  uint64_t t_forward;
  uint64_t t_backward;
  uint64_t t_min;
  double concurrence_form;
  /**
   * 0 when expanding the input vector, 1 for the output vector.
   */
  int32_t expand_output;
} FockpermRuntime;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a `dim x dim` matrix from `2 * dim * dim` interleaved row-major
 * `(re, im)` values.
 *
 * # Safety
 * `re_im` must point to `2 * dim * dim` readable doubles and `out` must be
 * writable.
 */
enum FockpermStatus fockperm_matrix_new(size_t dim,
                                        const double *re_im,
                                        struct FockpermMatrix **out);

/**
 * Parses the matrix JSON format `{"dim": M, "data": [[re, im], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
enum FockpermStatus fockperm_matrix_from_json(const char *json, struct FockpermMatrix **out);

/**
 * Haar-random unitary, deterministic in `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FockpermStatus fockperm_matrix_haar(size_t dim, uint64_t seed, struct FockpermMatrix **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `m` must come from a `fockperm_matrix_*` constructor and not be freed twice.
 */
void fockperm_matrix_free(struct FockpermMatrix *m);

/**
 * Matrix dimension, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t fockperm_matrix_dim(const struct FockpermMatrix *m);

/**
 * Reads entry `(row, col)`.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
enum FockpermStatus fockperm_matrix_get(const struct FockpermMatrix *m,
                                        size_t row,
                                        size_t col,
                                        double *re,
                                        double *im);

/**
 * `Per([A]_{n,m})`; `n` and `m` each hold `modes` counts.
 *
 * # Safety
 * `a` must be a live handle, `n` and `m` must point to `modes` readable
 * counts and `out` must be writable.
 */
enum FockpermStatus fockperm_permanent(const struct FockpermMatrix *a,
                                       const uint32_t *n,
                                       const uint32_t *m,
                                       size_t modes,
                                       enum FockpermAlgorithm algorithm,
                                       size_t threads,
                                       struct FockpermPermanent *out);

/**
 * `<m|U|n>`.
 *
 * # Safety
 * As for [`fockperm_permanent`]; `re` and `im` must be writable.
 */
enum FockpermStatus fockperm_amplitude(const struct FockpermMatrix *u,
                                       const uint32_t *n,
                                       const uint32_t *m,
                                       size_t modes,
                                       enum FockpermAlgorithm algorithm,
                                       double *re,
                                       double *im);

/**
 * Monte-Carlo estimate of `Per([A]_{n,m})` from binomial digit sampling.
 *
 * # Safety
 * As for [`fockperm_permanent`].
 */
enum FockpermStatus fockperm_estimate(const struct FockpermMatrix *a,
                                      const uint32_t *n,
                                      const uint32_t *m,
                                      size_t modes,
                                      uint64_t samples,
                                      uint64_t seed,
                                      struct FockpermEstimate *out);

/**
 * `C_S(n)`.
 *
 * # Safety
 * `n` must point to `modes` counts and `out` must be writable.
 */
enum FockpermStatus fockperm_concurrence_sum(const uint32_t *n, size_t modes, double *out);

/**
 * `C_k(n)`.
 *
 * # Safety
 * `n` must point to `modes` counts and `out` must be writable.
 */
enum FockpermStatus fockperm_k_concurrence(const uint32_t *n, size_t modes, size_t k, double *out);

/**
 * Term-count runtime model for `(n, m)`.
 *
 * # Safety
 * `n` and `m` must point to `modes` counts and `out` must be writable.
 */
enum FockpermStatus fockperm_runtime(const uint32_t *n,
                                     const uint32_t *m,
                                     size_t modes,
                                     struct FockpermRuntime *out);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *fockperm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fockperm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOCKPERM_H */

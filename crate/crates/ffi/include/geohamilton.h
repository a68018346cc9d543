#ifndef GEOHAMILTON_H
#define GEOHAMILTON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum GhStatus {
  GH_STATUS_OK = 0,
  GH_STATUS_NULL_POINTER = 1,
  GH_STATUS_INVALID_ARGUMENT = 2,
  GH_STATUS_CAPACITY = 3,
  GH_STATUS_UNSATISFIABLE = 4,
  GH_STATUS_NOT_REACHED = 5,
  GH_STATUS_INFEASIBLE = 6,
  GH_STATUS_IO = 7,
  GH_STATUS_PARSE = 8,
  /**
   * The builder stopped; the message names the stage.
   */
  GH_STATUS_BUILD_FAILED = 9,
  GH_STATUS_PANIC = 10,
} GhStatus;

/**
 * A vertex sequence produced by the builder.
 */
typedef struct GhCycle GhCycle;

/**
 * Points in the unit cube with their norm.
 */
typedef struct GhPointSet GhPointSet;

/**
 * Hitting radii; absent values are NaN.
 */
typedef struct GhHittingRadii {
  double min_degree_1;
  double min_degree_2;
  double connected;
  double two_connected;
  double hamiltonian;
  /**
   * Centred min-degree-2 radius; Euclidean plane only.
   */
  double x_statistic;
} GhHittingRadii;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *gh_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *gh_version(void);

/**
 * Copies `count` points of dimension `d` from `coords` (row-major).
 * `p` is the norm exponent; pass `INFINITY` for the max norm.
 *
 * # Safety
 * `coords` must point to `count * d` doubles and `out` to writable storage.
 */
enum GhStatus gh_points_new(const double *coords,
                            size_t count,
                            size_t d,
                            double p,
                            struct GhPointSet **out);

/**
 * `count` uniform points in `[0,1]^d` from `seed`.
 *
 * # Safety
 * `out` must point to writable storage.
 */
enum GhStatus gh_points_sample(size_t count,
                               size_t d,
                               double p,
                               uint64_t seed,
                               struct GhPointSet **out);

/**
 * Number of points; 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t gh_points_len(const struct GhPointSet *h);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void gh_points_free(struct GhPointSet *h);

/**
 * Hitting radii of degree, connectivity and, for up to 22 points when
 * `with_hamiltonian` is nonzero, Hamiltonicity.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum GhStatus gh_hitting_radii(const struct GhPointSet *h,
                               int32_t with_hamiltonian,
                               struct GhHittingRadii *out);

/**
 * Hamilton cycle of `G(points, rho)` with the desk constants and lattice
 * factor `eta` (pass 0 for the default). A structural failure returns
 * `BUILD_FAILED` and leaves `*out` null.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum GhStatus gh_build_cycle(const struct GhPointSet *h,
                             double rho,
                             double eta,
                             struct GhCycle **out);

/**
 * Number of vertices; 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t gh_cycle_len(const struct GhCycle *c);

/**
 * Copies up to `cap` vertex indices into `buf` and stores the full length
 * in `*written`.
 *
 * # Safety
 * `c` must be a live handle, `buf` must hold `cap` entries, `written` writable.
 */
enum GhStatus gh_cycle_vertices(const struct GhCycle *c, size_t *buf, size_t cap, size_t *written);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void gh_cycle_free(struct GhCycle *c);

/**
 * Sets `*valid` to 1 when `vertices` is a Hamilton cycle of `G(points, rho)`
 * and 0 otherwise; the reason is left as the last error message.
 *
 * # Safety
 * `h` must be a live handle, `vertices` must hold `len` entries, `valid` writable.
 */
enum GhStatus gh_verify_cycle(const struct GhPointSet *h,
                              double rho,
                              const size_t *vertices,
                              size_t len,
                              int32_t *valid);

/**
 * Limit law of the centred min-degree-2 radius at `x`.
 */
double gh_limit_probability(double x);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEOHAMILTON_H */

#ifndef QUASIHEAT_H
#define QUASIHEAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define QH_MODEL_QUASILINEAR 0

#define QH_MODEL_LINEAR 1

typedef enum QhStatus {
  QhStatus_Ok = 0,
  QhStatus_NullPointer = 1,
  QhStatus_InvalidArgument = 2,
  QhStatus_NumericalFailure = 3,
  QhStatus_BufferTooSmall = 4,
  QhStatus_OutOfRange = 5,
  QhStatus_Panic = 6,
} QhStatus;

/**
 * Physical parameter set.
 */
typedef struct QhParams QhParams;

/**
 * Similarity profile with its located front.
 */
typedef struct QhProfile QhProfile;

/**
 * Result of a space-time solve.
 */
typedef struct QhReport QhReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` as a
 * NUL-terminated string, truncating to `len - 1` bytes. Returns the full
 * message length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
uintptr_t qh_last_error_message(char *buf, uintptr_t len);

/**
 * Creates a parameter set from `D_T` and `a²`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QhStatus qh_params_new(double diffusivity, double a_squared, struct QhParams **out);

/**
 * Creates a parameter set from material constants `λ, c, ρ` and `a`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QhStatus qh_params_from_material(double lambda,
                                      double heat_capacity,
                                      double density,
                                      double a,
                                      struct QhParams **out);

/**
 * # Safety
 * `params` must be null or a handle from `qh_params_new`/`qh_params_from_material` not yet freed.
 */
void qh_params_free(struct QhParams *params);

/**
 * Classical Fourier flux `-λ g`.
 *
 * # Safety
 * `params` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_linear_flux(const struct QhParams *params, double g, double *out);

/**
 * Modified flux `-λ (g - a·atan(g/a))`.
 *
 * # Safety
 * `params` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_modified_flux(const struct QhParams *params, double g, double *out);

/**
 * `|J_linear - J_modified|`.
 *
 * # Safety
 * `params` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_flux_gap(const struct QhParams *params, double g, double *out);

/**
 * `D_T g² / (g² + a²)`.
 *
 * # Safety
 * `params` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_effective_diffusivity(const struct QhParams *params, double g, double *out);

/**
 * Integrates the similarity profile with `f(0) = b`, `f'(0) = c` on
 * `[0, z_max]` and locates its front. Non-positive tolerances select the
 * defaults (`1e-10`).
 *
 * # Safety
 * `params` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_similarity_solve(const struct QhParams *params,
                                  double b,
                                  double c,
                                  double z_max,
                                  double rtol,
                                  double atol,
                                  struct QhProfile **out);

/**
 * # Safety
 * `profile` must be null or a handle from `qh_similarity_solve` not yet freed.
 */
void qh_profile_free(struct QhProfile *profile);

/**
 * Number of samples in the profile.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_profile_len(const struct QhProfile *profile, uintptr_t *out);

/**
 * Copies the samples `z`, `f`, `f'` into caller buffers of length `len`,
 * which must be at least [`qh_profile_len`]. Any of the three may be null
 * to skip that column.
 *
 * # Safety
 * `profile` must be a live handle; non-null buffers must hold `len` doubles.
 */
enum QhStatus qh_profile_copy(const struct QhProfile *profile,
                              double *z,
                              double *f,
                              double *fp,
                              uintptr_t len);

/**
 * Front location `z₀` in similarity variables.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_profile_front(const struct QhProfile *profile, double *out);

/**
 * Front velocity `z₀ / (2√t)`; `t` must be positive.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_profile_front_velocity(const struct QhProfile *profile, double t, double *out);

/**
 * Solves the temperature equation on `[0, x_max]` from zero initial data
 * with `T(t,0) = b√t` and `T(t,x_max) = 0`, recording a snapshot at each of
 * the `n_times` increasing output times. `model` is
 * [`QH_MODEL_QUASILINEAR`] or [`QH_MODEL_LINEAR`].
 *
 * # Safety
 * `params` must be a live handle, `out_times` must point to `n_times`
 * doubles and `out` must be a valid pointer.
 */
enum QhStatus qh_pde_solve(const struct QhParams *params,
                           int32_t model,
                           double b,
                           double x_max,
                           double dx,
                           double t_end,
                           const double *out_times,
                           uintptr_t n_times,
                           struct QhReport **out);

/**
 * # Safety
 * `report` must be null or a handle from `qh_pde_solve` not yet freed.
 */
void qh_report_free(struct QhReport *report);

/**
 * Number of snapshots and grid nodes per snapshot.
 *
 * # Safety
 * `report` must be a live handle; `snapshots` and `nodes` valid pointers.
 */
enum QhStatus qh_report_shape(const struct QhReport *report,
                              uintptr_t *snapshots,
                              uintptr_t *nodes);

/**
 * Copies snapshot `index`: its time into `t` and its values into `values`
 * (length `len`, at least the node count).
 *
 * # Safety
 * `report` must be a live handle, `t` a valid pointer and `values` must hold `len` doubles.
 */
enum QhStatus qh_report_snapshot(const struct QhReport *report,
                                 uintptr_t index,
                                 double *t,
                                 double *values,
                                 uintptr_t len);

/**
 * Discrete front position at snapshot `index`.
 *
 * # Safety
 * `report` must be a live handle; `t` and `x_front` valid pointers.
 */
enum QhStatus qh_report_front(const struct QhReport *report,
                              uintptr_t index,
                              double *t,
                              double *x_front);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASIHEAT_H */

#ifndef SGTOOL_H
#define SGTOOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Sign of `A` for the sub-critical `y` family; `None` elsewhere.
 */
typedef enum SgASign {
  SG_A_SIGN_NONE = 0,
  SG_A_SIGN_PLUS = 1,
  SG_A_SIGN_MINUS = 2,
} SgASign;

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_PARAMETER = 2,
  SG_STATUS_PRECONDITION = 3,
  SG_STATUS_SINGULAR = 4,
  SG_STATUS_TRUNCATION = 5,
  SG_STATUS_INSTABILITY = 6,
  SG_STATUS_CONTRACTION = 7,
  SG_STATUS_NOT_CONVERGED = 8,
  SG_STATUS_ENVELOPE = 9,
  SG_STATUS_DEGENERATE_FIT = 10,
  SG_STATUS_HYPOTHESIS = 11,
  SG_STATUS_NON_FINITE = 12,
  SG_STATUS_BUFFER_TOO_SMALL = 13,
  SG_STATUS_PANIC = 14,
} SgStatus;

typedef enum SgWaveFamily {
  SG_WAVE_FAMILY_GAMMA_ZERO_Y = 0,
  SG_WAVE_FAMILY_GAMMA_ONE_Y = 1,
  SG_WAVE_FAMILY_SUB_CRITICAL_Y = 2,
  SG_WAVE_FAMILY_SUB_CRITICAL_Z = 3,
  SG_WAVE_FAMILY_SUPER_CRITICAL = 4,
} SgWaveFamily;

/**
 * Opaque sampled field `u(x_i, t_k)`.
 */
typedef struct SgField SgField;

/**
 * Opaque parameter set.
 */
typedef struct SgParams SgParams;

/**
 * Opaque traveling wave.
 */
typedef struct SgWave SgWave;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
uintptr_t sg_last_error_message(char *buf, uintptr_t len);

/**
 * # Safety
 * `out` must be valid for one write.
 */
enum SgStatus sg_params_new(double alpha,
                            double epsilon,
                            double gamma_bias,
                            double ell,
                            double horizon,
                            struct SgParams **out);

/**
 * # Safety
 * `p` must come from [`sg_params_new`] and not be used afterwards.
 */
void sg_params_free(struct SgParams *p);

/**
 * Green function at `(x, ξ, t)` with certified tail bound `≤ tol`.
 *
 * # Safety
 * `params` must be a live handle; out pointers valid for one write.
 */
enum SgStatus sg_green_eval(const struct SgParams *params,
                            double x,
                            double xi,
                            double t,
                            double tol,
                            double *out_value,
                            uintptr_t *out_n_terms,
                            double *out_tail_bound);

/**
 * # Safety
 * `params` must be a live handle; `out` valid for one write.
 */
enum SgStatus sg_wave_new(const struct SgParams *params,
                          enum SgWaveFamily family,
                          double c_wave,
                          enum SgASign a_sign,
                          struct SgWave **out);

/**
 * # Safety
 * `w` must come from [`sg_wave_new`] and not be used afterwards.
 */
void sg_wave_free(struct SgWave *w);

/**
 * # Safety
 * `wave` must be a live handle; `out` valid for one write.
 */
enum SgStatus sg_wave_value(const struct SgWave *wave, double x, double t, double *out);

/**
 * # Safety
 * `wave` must be a live handle; `out` valid for one write.
 */
enum SgStatus sg_wave_uxxt(const struct SgWave *wave, double x, double t, double *out);

/**
 * Solves to the params horizon with initial and edge data taken from
 * `wave`. `reduced != 0` switches the viscous term off.
 *
 * # Safety
 * `params` and `wave` must be live handles; `out` valid for one write.
 */
enum SgStatus sg_solve(const struct SgParams *params,
                       const struct SgWave *wave,
                       uintptr_t nx,
                       double cfl,
                       double theta,
                       int32_t reduced,
                       struct SgField **out);

/**
 * # Safety
 * `f` must come from [`sg_solve`] and not be used afterwards.
 */
void sg_field_free(struct SgField *f);

/**
 * Grid points, number of time steps (levels are `nt + 1`) and step sizes.
 *
 * # Safety
 * `field` must be a live handle; out pointers valid for one write each.
 */
enum SgStatus sg_field_dims(const struct SgField *field,
                            uintptr_t *out_nx,
                            uintptr_t *out_nt,
                            double *out_dx,
                            double *out_dt);

/**
 * Copies the samples, time-major (`buf[k*nx + i] = u(x_i, t_k)`).
 *
 * # Safety
 * `field` must be a live handle; `buf` valid for `len` doubles.
 */
enum SgStatus sg_field_copy(const struct SgField *field, double *buf, uintptr_t len);

/**
 * `T_ε = (1 − h)·ln(1/ε)·min{1/N, 1}`; `out_warning` is set to 1 when
 * `ε ≥ 1` forced the value to 0.
 *
 * # Safety
 * `out` valid for one write; `out_warning` null or valid for one write.
 */
enum SgStatus sg_t_epsilon(double eps,
                           double h_exp,
                           double n_const,
                           double *out,
                           int32_t *out_warning);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SGTOOL_H */

#ifndef ZHL_H
#define ZHL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZhlStatus {
  ZHL_STATUS_OK = 0,
  ZHL_STATUS_NULL_POINTER = 1,
  ZHL_STATUS_INVALID_ARGUMENT = 2,
  ZHL_STATUS_DOMAIN = 3,
  ZHL_STATUS_POLE = 4,
  ZHL_STATUS_NON_CONVERGENCE = 5,
  ZHL_STATUS_VALIDATION = 6,
  ZHL_STATUS_BUFFER_TOO_SMALL = 7,
  ZHL_STATUS_INTERNAL = 8,
} ZhlStatus;

/*
 Opaque kernel handle.
 */
typedef struct ZhlKernel ZhlKernel;

typedef struct ZhlComplex {
  double re;
  double im;
} ZhlComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, empty after success.
 Valid until the next `zhl_*` call on the same thread.
 */
const char *zhl_last_error(void);

/*
 Built-in kernel by name: `riemann`, `lambda`, `chi4`, `chi3` or `hecke`
 (the latter with `tau_count` cusp-form coefficients).

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ZhlStatus zhl_kernel_new(const char *name, size_t tau_count, struct ZhlKernel **out);

/*
 Dirichlet kernel from the table `chi(0), ..., chi(modulus - 1)`.

 # Safety
 `values` must point at `modulus` readable entries and `out` be valid.
 */
enum ZhlStatus zhl_kernel_dirichlet(uint32_t modulus,
                                    const struct ZhlComplex *values,
                                    struct ZhlKernel **out);

/*
 Releases a kernel; null is ignored.

 # Safety
 `kernel` must come from a `zhl_kernel_*` constructor and not be used again.
 */
void zhl_kernel_free(struct ZhlKernel *kernel);

/*
 Writes the kernel name, NUL-terminated, into `buf` of `cap` bytes.
 `needed` receives the full length including the terminator.

 # Safety
 `buf` must have `cap` writable bytes; `needed` may be null.
 */
enum ZhlStatus zhl_kernel_name(const struct ZhlKernel *kernel,
                               char *buf,
                               size_t cap,
                               size_t *needed);

/*
 Continued value `L(f, z, x)` with its error estimate.

 # Safety
 `kernel` must be live; `value` must be valid; `est_error` may be null.
 */
enum ZhlStatus zhl_continued_l(const struct ZhlKernel *kernel,
                               struct ZhlComplex z,
                               double x,
                               struct ZhlComplex *value,
                               double *est_error);

/*
 Reference value through Hurwitz zeta sums (built-in kernels only).

 # Safety
 `kernel` must be live and `value` valid.
 */
enum ZhlStatus zhl_oracle_l(const struct ZhlKernel *kernel,
                            struct ZhlComplex z,
                            double x,
                            struct ZhlComplex *value);

/*
 `sup |(H - E) Delta_f Psi| / sup |Delta_f Psi|` for the principal
 eigenstate at `z`, sampled on `count` points of `[x_min, x_max]`.

 # Safety
 `kernel` must be live and `relative_residual` valid.
 */
enum ZhlStatus zhl_eigen_residual(const struct ZhlKernel *kernel,
                                  struct ZhlComplex z,
                                  double x_min,
                                  double x_max,
                                  size_t count,
                                  double *relative_residual);

/*
 Certified zeros on `1/2 + it`, `t_min <= t <= t_max`, scanned with
 `step`. Up to `cap` zeros go to `zeros`; `count` always receives the
 number found, and `BufferTooSmall` signals truncation.

 # Safety
 `zeros` must have `cap` writable entries (may be null when `cap` is 0);
 `count` must be valid.
 */
enum ZhlStatus zhl_find_zeros(const struct ZhlKernel *kernel,
                              double t_min,
                              double t_max,
                              double step,
                              struct ZhlComplex *zeros,
                              size_t cap,
                              size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZHL_H */

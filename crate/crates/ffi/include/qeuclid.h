#ifndef QEUCLID_H
#define QEUCLID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Status codes. `QE_STATUS_OK` is zero; everything else is an error.
enum QeStatus {
  QE_STATUS_OK = 0,
  QE_STATUS_NULL_POINTER = 1,
  QE_STATUS_INVALID_ARGUMENT = 2,
  QE_STATUS_INVALID_EXPONENT = 3,
  QE_STATUS_MISMATCH = 4,
  QE_STATUS_UNSUPPORTED = 5,
  QE_STATUS_BUDGET = 6,
  QE_STATUS_IO = 7,
  QE_STATUS_PANIC = 8,
};
typedef int32_t QeStatus;

// Sampling grid.
typedef struct QeGrid QeGrid;

// Truncated number-basis operator.
typedef struct QeOperator QeOperator;

// Sampled symbol on a grid.
typedef struct QeSymbol QeSymbol;

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length in bytes.
//
// # Safety
// `buf` must be writable for `len` bytes or null.
uintptr_t qe_last_error(char *buf, uintptr_t len);

// Uniform grid `(-L, L]^d` with `n` points per axis.
//
// # Safety
// `out` must be a valid pointer.
QeStatus qe_grid_new(uintptr_t d, double half_width, uintptr_t n, struct QeGrid **out);

// Number of nodes.
//
// # Safety
// `grid` must be a live handle or null.
uintptr_t qe_grid_len(const struct QeGrid *grid);

// # Safety
// `grid` must come from `qe_grid_new` and not be used afterwards.
void qe_grid_free(struct QeGrid *grid);

// Symbol from `len = qe_grid_len(grid)` complex samples, split into real
// and imaginary arrays in row-major node order.
//
// # Safety
// `re`, `im` must hold `len` values; `out` must be valid.
QeStatus qe_symbol_from_values(const struct QeGrid *grid,
                               const double *re,
                               const double *im,
                               uintptr_t len,
                               struct QeSymbol **out);

// Samples `amp · e^{-π|t - c|²/σ²} e^{2πi⟨ω, t⟩}`; `center` and `freq`
// have the grid dimension.
//
// # Safety
// `center`, `freq` must hold `d` values; `out` must be valid.
QeStatus qe_symbol_gaussian(const struct QeGrid *grid,
                            const double *center,
                            double width,
                            const double *freq,
                            double amp_re,
                            double amp_im,
                            struct QeSymbol **out);

// Copies the samples out; `len` must equal the grid length.
//
// # Safety
// `re`, `im` must be writable for `len` values.
QeStatus qe_symbol_values(const struct QeSymbol *sym, double *re, double *im, uintptr_t len);

// Classical `L_p` norm of the samples; `p = INFINITY` is the sup.
//
// # Safety
// `sym` must be live; `out` valid.
QeStatus qe_symbol_lp_norm(const struct QeSymbol *sym, double p, double *out);

// # Safety
// `sym` must come from this library and not be used afterwards.
void qe_symbol_free(struct QeSymbol *sym);

// Twisted convolution `f *_θ g` in the plane with `θ = [[0, ϑ], [-ϑ, 0]]`.
//
// # Safety
// Handles must be live; `out` valid.
QeStatus qe_twisted_convolve(const struct QeSymbol *f,
                             const struct QeSymbol *g,
                             double vartheta,
                             struct QeSymbol **out);

// Weyl quantization of a planar symbol into the `n × n` number basis.
//
// # Safety
// `sym` must be live; `out` valid.
QeStatus qe_quantize(const struct QeSymbol *sym,
                     double vartheta,
                     uintptr_t n,
                     struct QeOperator **out);

// Truncation size `N`.
//
// # Safety
// `op` must be live or null.
uintptr_t qe_operator_size(const struct QeOperator *op);

// Scaled Schatten norm `(c_τ Tr|A|^p)^{1/p}`; `p = INFINITY` is the
// operator norm.
//
// # Safety
// `op` must be live; `out` valid.
QeStatus qe_operator_schatten_norm(const struct QeOperator *op, double p, double *out);

// Scaled trace `c_τ Tr A`.
//
// # Safety
// `op` must be live; `re`, `im` valid.
QeStatus qe_operator_trace(const struct QeOperator *op, double *re, double *im);

// Writes the operator in the textual matrix format.
//
// # Safety
// `op` must be live; `path` a NUL-terminated UTF-8 string.
QeStatus qe_operator_save(const struct QeOperator *op, const char *path);

// Reads an operator written by [`qe_operator_save`].
//
// # Safety
// `path` a NUL-terminated UTF-8 string; `out` valid.
QeStatus qe_operator_load(const char *path, struct QeOperator **out);

// # Safety
// `op` must come from this library and not be used afterwards.
void qe_operator_free(struct QeOperator *op);

// `c(p, d) = (d + 1)(1/2 - 1/p) + 1`.
//
// # Safety
// `out` must be valid.
QeStatus qe_c_exponent(double p, uintptr_t d, double *out);

// `2(d + 1)/(d + 3)`.
double qe_tomas_stein_endpoint(uintptr_t d);

// Inverse Fourier transform of the unit sphere measure in `R^d`,
// `d ∈ {2, 3}`, at the point `s`.
//
// # Safety
// `s` must hold `d` values; `re`, `im` valid.
QeStatus qe_dsigma_check(const double *s, uintptr_t d, double *re, double *im);

// Noncommutative `L_p` norm of the Knapp cap at scale `delta`, direction
// angle `orientation`. `mode_budget = 0` uses the library default.
//
// # Safety
// `out` must be valid.
QeStatus qe_knapp_nc_norm(double delta,
                          double orientation,
                          double vartheta,
                          double p,
                          uintptr_t mode_budget,
                          double *out);

#endif  /* QEUCLID_H */

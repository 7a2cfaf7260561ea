#ifndef BOHR_H
#define BOHR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum BohrStatus {
  BOHR_STATUS_OK = 0,
  BOHR_STATUS_NULL_POINTER = 1,
  BOHR_STATUS_INVALID_UTF8 = 2,
  BOHR_STATUS_PARSE = 3,
  BOHR_STATUS_DOMAIN = 4,
  BOHR_STATUS_COVERAGE = 5,
  BOHR_STATUS_IO = 6,
  BOHR_STATUS_PANIC = 7,
} BohrStatus;

// Opaque truncated Dirichlet series.
typedef struct BohrSeries BohrSeries;

// Opaque composition symbol `c0 s + phi(s)`.
typedef struct BohrSymbol BohrSymbol;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next call into this library on the same thread.
const char *bohr_last_error_message(void);

// Parses the `n re im` line format into a new series with the given horizon.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum BohrStatus bohr_series_parse(const char *text_ptr, uint64_t horizon, struct BohrSeries **out);

// Releases a series; null is ignored.
//
// # Safety
// `series` must come from this library and not have been freed.
void bohr_series_free(struct BohrSeries *series);

// Writes the series in the line format; release with [`bohr_string_free`].
//
// # Safety
// `series` must be a live handle and `out` a valid pointer.
enum BohrStatus bohr_series_to_string(const struct BohrSeries *series, char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void bohr_string_free(char *s);

// # Safety
// `series` must be a live handle and `out` a valid pointer.
enum BohrStatus bohr_series_horizon(const struct BohrSeries *series, uint64_t *out);

// `f(sigma + i t)`.
//
// # Safety
// `series` must be a live handle; `re` and `im` valid pointers.
enum BohrStatus bohr_series_evaluate(const struct BohrSeries *series,
                                     double sigma,
                                     double t,
                                     double *re,
                                     double *im);

// `(sum |a_n|^2 / d(n)^alpha)^{1/2}`.
//
// # Safety
// `series` must be a live handle and `out` a valid pointer.
enum BohrStatus bohr_series_norm_dalpha(const struct BohrSeries *series, double alpha, double *out);

// Dirichlet convolution truncated at `horizon`, as a new series.
//
// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum BohrStatus bohr_series_convolve(const struct BohrSeries *a,
                                     const struct BohrSeries *b,
                                     uint64_t horizon,
                                     struct BohrSeries **out);

// Parses a symbol: a `c0 <integer>` line followed by the series of `phi`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum BohrStatus bohr_symbol_parse(const char *text_ptr, uint64_t horizon, struct BohrSymbol **out);

// Releases a symbol; null is ignored.
//
// # Safety
// `symbol` must come from this library and not have been freed.
void bohr_symbol_free(struct BohrSymbol *symbol);

// `f o Phi` truncated at `horizon`, as a new series.
//
// # Safety
// `f`, `symbol` must be live handles and `out` a valid pointer.
enum BohrStatus bohr_compose(const struct BohrSeries *f,
                             const struct BohrSymbol *symbol,
                             uint64_t horizon,
                             struct BohrSeries **out);

// Number of divisors of `n >= 1`.
//
// # Safety
// `out` must be a valid pointer.
enum BohrStatus bohr_divisor_count(uint64_t n, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOHR_H */

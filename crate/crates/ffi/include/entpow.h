#ifndef ENTPOW_H
#define ENTPOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every function.
typedef enum EpStatus {
  EP_STATUS_OK = 0,
  EP_STATUS_NULL_POINTER = 1,
  EP_STATUS_SHAPE = 2,
  EP_STATUS_DOMAIN = 3,
  EP_STATUS_NUMERIC = 4,
  EP_STATUS_CAPACITY = 5,
  EP_STATUS_PARSE = 6,
  EP_STATUS_IO = 7,
  EP_STATUS_PANIC = 8,
} EpStatus;

// A bipartite unitary on `d1 × d2`.
typedef struct EpOperator EpOperator;

typedef struct EpMonteCarlo {
  double mean;
  double std_error;
} EpMonteCarlo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` as a
// NUL-terminated string, truncating to `len` bytes. Returns the buffer
// size needed for the whole message. `buf` may be null to query the size.
size_t ep_last_error_message(char *buf, size_t len);

// Builds an operator from row-major real and imaginary parts, each of
// length `(d1·d2)²`. `im` may be null for a real matrix. Fails with
// `EP_STATUS_DOMAIN` unless `max|U†U − I| ≤ tol`.
enum EpStatus ep_operator_new(size_t d1,
                              size_t d2,
                              const double *re,
                              const double *im,
                              double tol,
                              struct EpOperator **out);

// Reads an operator file (header `d1 d2`, then one row per line of
// `re±imj` entries).
enum EpStatus ep_operator_from_file(const char *path, double tol, struct EpOperator **out);

// `exp(iθ Sz⊗Sz)` for spins of dimension `d1` and `d2`.
enum EpStatus ep_operator_ising(size_t d1, size_t d2, double theta, struct EpOperator **out);

// `exp(−it S1·S2)` for spins of dimension `d1` and `d2`.
enum EpStatus ep_operator_heisenberg(size_t d1, size_t d2, double t, struct EpOperator **out);

// Releases an operator. Null is ignored.
void ep_operator_free(struct EpOperator *op);

enum EpStatus ep_operator_dims(const struct EpOperator *op, size_t *d1, size_t *d2);

// Copies the matrix into `re` and `im`, row-major. Both must hold `len`
// values, where `len` is `(d1·d2)²`.
enum EpStatus ep_operator_entries(const struct EpOperator *op, double *re, double *im, size_t len);

// Entangling power from the realigned and partially transposed operator.
// `tol` is the unitarity tolerance.
enum EpStatus ep_entangling_power(const struct EpOperator *op, double tol, double *out);

// Entangling power from explicit permutation operators on two copies.
// Limited to `d1·d2 ≤ 16`; larger operators give `EP_STATUS_CAPACITY`.
enum EpStatus ep_permutation_oracle(const struct EpOperator *op, double *out);

// Monte Carlo estimate over `samples` Haar-random product states.
// Results depend only on `seed`, not on the thread count.
enum EpStatus ep_monte_carlo(const struct EpOperator *op,
                             size_t samples,
                             uint64_t seed,
                             struct EpMonteCarlo *out);

enum EpStatus ep_ising_analytic(size_t d1, size_t d2, double theta, double *out);

enum EpStatus ep_ising_time_average(size_t d1, size_t d2, double *out);

// Closed form for a spin-1/2 coupled to a spin of dimension `d2 ≥ 2`.
enum EpStatus ep_heisenberg_analytic(size_t d2, double t, double *out);

enum EpStatus ep_heisenberg_time_average(size_t d2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTPOW_H */

#ifndef HPDNS_H
#define HPDNS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HpdnsAlgebra {
  HPDNS_ALGEBRA_SU2 = 0,
  HPDNS_ALGEBRA_SU11 = 1,
} HpdnsAlgebra;

typedef enum HpdnsClass {
  HPDNS_CLASS_SUB = -1,
  HPDNS_CLASS_POISSONIAN = 0,
  HPDNS_CLASS_SUPER = 1,
} HpdnsClass;

// Status codes returned by every function.
typedef enum HpdnsStatus {
  HPDNS_STATUS_OK = 0,
  HPDNS_STATUS_NULL_POINTER = 1,
  HPDNS_STATUS_DOMAIN = 2,
  HPDNS_STATUS_DIMENSION_MISMATCH = 3,
  HPDNS_STATUS_TRUNCATION_INSUFFICIENT = 4,
  HPDNS_STATUS_PRECISION_LOSS = 5,
  HPDNS_STATUS_SINGULAR_COUPLING = 6,
  HPDNS_STATUS_UNDEFINED_Q = 7,
  HPDNS_STATUS_BUFFER_TOO_SMALL = 8,
  HPDNS_STATUS_PANIC = 9,
} HpdnsStatus;

// Photon-number distribution of one state.
typedef struct HpdnsDistribution HpdnsDistribution;

// Validated state parameters.
typedef struct HpdnsParams HpdnsParams;

typedef struct HpdnsQStats {
  double mean_n;
  double mean_n2;
  // NaN when the mean vanishes; `classification` then follows `q_prime`.
  double q;
  double q_prime;
  int32_t classification;
} HpdnsQStats;

typedef struct HpdnsQuadrature {
  double var_x;
  double var_p;
  double mean_a_re;
  double mean_a_im;
  double mean_n;
  bool squeezed_x;
  bool squeezed_p;
} HpdnsQuadrature;

typedef struct HpdnsEigencheck {
  double energy;
  double residual_norm;
  double hermiticity_defect;
  bool energy_non_negative;
} HpdnsEigencheck;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL.
// The pointer stays valid until the next failing call on the same thread.
const char *hpdns_last_error(void);

// Validates and allocates a parameter handle.
//
// # Safety
// `out` must be NULL or point to writable storage for one pointer.
enum HpdnsStatus hpdns_params_new(enum HpdnsAlgebra algebra,
                                  uint32_t label,
                                  uint32_t n,
                                  double magnitude,
                                  double phase,
                                  struct HpdnsParams **out);

// # Safety
// `p` must be NULL or a handle from [`hpdns_params_new`] not yet freed.
void hpdns_params_free(struct HpdnsParams *p);

// Closed-form photon distribution, with the oracle as fallback where the
// closed form loses precision. su(1,1) windows grow until the tail is negligible.
//
// # Safety
// `p` must be a live params handle; `out` must be writable.
enum HpdnsStatus hpdns_distribution_new(const struct HpdnsParams *p,
                                        struct HpdnsDistribution **out);

// # Safety
// `d` must be NULL or a handle from [`hpdns_distribution_new`] not yet freed.
void hpdns_distribution_free(struct HpdnsDistribution *d);

// Number of probabilities held (`M + 1` for su(2), the window for su(1,1)).
// Returns 0 for NULL.
//
// # Safety
// `d` must be NULL or a live distribution handle.
size_t hpdns_distribution_len(const struct HpdnsDistribution *d);

// `|1 - sum P(m)|`. NaN for NULL.
//
// # Safety
// `d` must be NULL or a live distribution handle.
double hpdns_distribution_norm_defect(const struct HpdnsDistribution *d);

// Copies the probabilities into `buf`. On `BUFFER_TOO_SMALL`, `*written`
// still receives the required length.
//
// # Safety
// `d` must be a live handle, `buf` must hold `capacity` doubles and
// `written` must be writable.
enum HpdnsStatus hpdns_distribution_copy(const struct HpdnsDistribution *d,
                                         double *buf,
                                         size_t capacity,
                                         size_t *written);

// Mean, second moment and Mandel Q. A vanishing mean is not an error here:
// `q` is NaN and the class comes from the sign of `q_prime`.
//
// # Safety
// `p` must be a live params handle; `out` must be writable.
enum HpdnsStatus hpdns_mandel_q(const struct HpdnsParams *p, struct HpdnsQStats *out);

// Quadrature variances with `x = (a + a^dagger)/sqrt 2`, `p = i(a^dagger - a)/sqrt 2`.
//
// # Safety
// `p` must be a live params handle; `out` must be writable.
enum HpdnsStatus hpdns_quadrature(const struct HpdnsParams *p, struct HpdnsQuadrature *out);

// Builds the Hamiltonian that has this state as an eigenvector and reports
// the eigenvalue and `||H psi - E psi||`.
//
// # Safety
// `p` must be a live params handle; `out` must be writable.
enum HpdnsStatus hpdns_eigencheck(const struct HpdnsParams *p,
                                  double omega,
                                  struct HpdnsEigencheck *out);

// Largest `|P_closed(m) - P_oracle(m)|` against the matrix-exponential oracle.
//
// # Safety
// `p` must be a live params handle; `out` must be writable.
enum HpdnsStatus hpdns_oracle_max_delta(const struct HpdnsParams *p, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HPDNS_H */

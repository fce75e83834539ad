#ifndef NOISEBIT_H
#define NOISEBIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum NbStatus {
  NB_STATUS_OK = 0,
  NB_STATUS_NULL_POINTER = 1,
  NB_STATUS_INVALID_ARGUMENT = 2,
  NB_STATUS_OUT_OF_RANGE = 3,
  NB_STATUS_LENGTH_MISMATCH = 4,
  NB_STATUS_TOO_SHORT = 5,
  NB_STATUS_PRECONDITION_FAILED = 6,
  NB_STATUS_UNKNOWN_GATE = 7,
  NB_STATUS_BUFFER_TOO_SMALL = 8,
  NB_STATUS_PANIC = 99,
} NbStatus;

/**
 * Generated bit stream.
 */
typedef struct NbBitStream NbBitStream;

/**
 * Product-form noise-bit state.
 */
typedef struct NbProductState NbProductState;

/**
 * Correlator readout of one string.
 */
typedef struct NbEstimate {
  double re;
  double im;
  double std_error;
  double half_width;
  double hoeffding_bound;
  bool decision;
} NbEstimate;

/**
 * Battery summary.
 */
typedef struct NbBatterySummary {
  size_t tests;
  size_t failures;
  double min_p_value;
  bool pass;
} NbBatterySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message, NUL-terminated, into
 * `buf`. Returns the buffer size needed including the terminator; nothing
 * is written when `buf` is null or `len` is too small.
 */
size_t nb_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nb_version(void);

/**
 * Reference-noise sample `R_bit^value(t)` of the system seeded with
 * `master_seed`; writes -1 or +1.
 */
enum NbStatus nb_rtw_sample(uint64_t master_seed,
                            size_t bit,
                            uint8_t value,
                            uint64_t t,
                            int8_t *out_sample);

/**
 * `k_B T ln(1/epsilon)` in joules.
 */
enum NbStatus nb_dissipation_bound(double temperature, double epsilon, double *out_joules);

/**
 * New `n`-bit state with every bit in logic value 0.
 */
enum NbStatus nb_product_state_new(size_t n, struct NbProductState **out_state);

void nb_product_state_free(struct NbProductState *state);

enum NbStatus nb_product_state_len(const struct NbProductState *state, size_t *out_n);

/**
 * 0 selects automatic, 1 double, 2 extended precision.
 */
enum NbStatus nb_product_state_set_precision(struct NbProductState *state, uint32_t precision);

/**
 * Sets the coefficient pair `(a, b)` of one bit.
 */
enum NbStatus nb_product_state_set_pair(struct NbProductState *state,
                                        size_t bit,
                                        double a_re,
                                        double a_im,
                                        double b_re,
                                        double b_im);

/**
 * Applies a catalog gate (`X`, `Z`, `H`, `S`, `T`) to one bit.
 */
enum NbStatus nb_product_state_apply_gate(struct NbProductState *state,
                                          const char *name,
                                          size_t bit);

/**
 * Applies a unitary 2x2 matrix given as 8 doubles, row-major, each entry
 * as `re, im`.
 */
enum NbStatus nb_product_state_apply_matrix(struct NbProductState *state,
                                            const double *matrix,
                                            size_t bit);

/**
 * Exact amplitude of the string given as `n` bytes of 0 or 1.
 */
enum NbStatus nb_product_state_amplitude(const struct NbProductState *state,
                                         const uint8_t *bits,
                                         size_t n,
                                         double *out_re,
                                         double *out_im);

/**
 * `log2 |amplitude|`, finite even where the amplitude leaves the double range.
 */
enum NbStatus nb_product_state_log2_amplitude(const struct NbProductState *state,
                                              const uint8_t *bits,
                                              size_t n,
                                              double *out_log2);

/**
 * Correlator estimate of the amplitude over `steps` time steps.
 */
enum NbStatus nb_product_state_estimate(const struct NbProductState *state,
                                        uint64_t master_seed,
                                        const uint8_t *bits,
                                        size_t n,
                                        uint64_t steps,
                                        struct NbEstimate *out_estimate);

/**
 * Runs the combined generator; `decimation` 0 selects the default spacing.
 */
enum NbStatus nb_bitstream_generate(size_t generators,
                                    size_t samples,
                                    double rho,
                                    double sigma,
                                    size_t decimation,
                                    uint64_t master_seed,
                                    struct NbBitStream **out_stream);

void nb_bitstream_free(struct NbBitStream *stream);

enum NbStatus nb_bitstream_len(const struct NbBitStream *stream, size_t *out_len);

/**
 * Packs the bits LSB-first into `buf`. `out_written` receives the byte
 * count needed, also when the buffer is too small.
 */
enum NbStatus nb_bitstream_pack(const struct NbBitStream *stream,
                                uint8_t *buf,
                                size_t len,
                                size_t *out_written);

/**
 * Runs the randomness battery at significance `alpha`.
 */
enum NbStatus nb_battery_run(const struct NbBitStream *stream,
                             double alpha,
                             struct NbBatterySummary *out_summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOISEBIT_H */

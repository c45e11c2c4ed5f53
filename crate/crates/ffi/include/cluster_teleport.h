#ifndef CLUSTER_TELEPORT_H
#define CLUSTER_TELEPORT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtError {
  CT_ERROR_OK = 0,
  CT_ERROR_NULL_POINTER = 1,
  CT_ERROR_INVALID_ARGUMENT = 2,
  /**
   * A protocol precondition on the channel does not hold.
   */
  CT_ERROR_ASSUMPTION_VIOLATED = 3,
  /**
   * ρ is below the bound that keeps Λ₃ positive semidefinite.
   */
  CT_ERROR_POVM_NOT_PSD = 4,
  /**
   * A failed attempt did not leave the input on the sender's qubit.
   */
  CT_ERROR_SENDER_LOST = 5,
  /**
   * The requested value does not exist for this result.
   */
  CT_ERROR_NO_VALUE = 6,
  CT_ERROR_PANIC = 7,
} CtError;

typedef enum CtStatus {
  CT_STATUS_SUCCESS = 0,
  CT_STATUS_FAIL_RECOVERABLE = 1,
  CT_STATUS_FAIL_INCONCLUSIVE = 2,
} CtStatus;

/**
 * Channel coefficients α, β, γ, η.
 */
typedef struct CtChannel CtChannel;

/**
 * Input qubit `a|0⟩ + b|1⟩`.
 */
typedef struct CtInput CtInput;

/**
 * Outcome of one protocol run.
 */
typedef struct CtResult CtResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ct_last_error_message(void);

/**
 * # Safety
 * `out` must be writable.
 */
enum CtError ct_channel_new(double alpha_re,
                            double alpha_im,
                            double beta_re,
                            double beta_im,
                            double gamma_re,
                            double gamma_im,
                            double eta_re,
                            double eta_im,
                            struct CtChannel **out);

/**
 * # Safety
 * `channel` must be NULL or a handle from [`ct_channel_new`], freed once.
 */
void ct_channel_free(struct CtChannel *channel);

/**
 * # Safety
 * `out` must be writable.
 */
enum CtError ct_input_new(double a_re, double a_im, double b_re, double b_im, struct CtInput **out);

/**
 * Amplitudes of an input handle.
 *
 * # Safety
 * `input` must be a live handle; the four outputs must be writable.
 */
enum CtError ct_input_amplitudes(const struct CtInput *input,
                                 double *a_re,
                                 double *a_im,
                                 double *b_re,
                                 double *b_im);

/**
 * # Safety
 * `input` must be NULL or a handle from this library, freed once.
 */
void ct_input_free(struct CtInput *input);

/**
 * One run of the information-preserving protocol.
 *
 * # Safety
 * `input` and `channel` must be live handles; `out` must be writable.
 */
enum CtError ct_proposed_teleport(const struct CtInput *input,
                                  const struct CtChannel *channel,
                                  uint64_t seed,
                                  struct CtResult **out);

/**
 * One run of the POVM protocol. A `rho` that is NaN or ≤ 0 selects the
 * default `max(2, ρ_min)`.
 *
 * # Safety
 * `input` and `channel` must be live handles; `out` must be writable.
 */
enum CtError ct_ramirez_teleport(const struct CtInput *input,
                                 const struct CtChannel *channel,
                                 double rho,
                                 uint64_t seed,
                                 struct CtResult **out);

/**
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum CtError ct_result_status(const struct CtResult *result, enum CtStatus *out);

/**
 * Fidelity of the receiver's qubit with the input.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum CtError ct_result_target_fidelity(const struct CtResult *result, double *out);

/**
 * Fidelity of the sender's qubit with the input after a failed run;
 * [`CtError::NoValue`] for successful runs.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum CtError ct_result_sender_fidelity(const struct CtResult *result, double *out);

/**
 * The input state read back from the sender's qubit after a recoverable
 * failure, as a new handle to pass to the next attempt.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum CtError ct_result_recovered_input(const struct CtResult *result, struct CtInput **out);

/**
 * Transcript as a JSON array of tagged events. Free with [`ct_string_free`].
 * Returns NULL on error.
 *
 * # Safety
 * `result` must be a live handle.
 */
char *ct_result_transcript_json(const struct CtResult *result);

/**
 * # Safety
 * `result` must be NULL or a handle from this library, freed once.
 */
void ct_result_free(struct CtResult *result);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void ct_string_free(char *s);

/**
 * `2(|α|² + |β|²)`.
 *
 * # Safety
 * `channel` must be a live handle and `out` writable.
 */
enum CtError ct_success_probability(const struct CtChannel *channel, double *out);

/**
 * `1 - (1-p)^n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CtError ct_geometric_success(double p, uint32_t n, double *out);

/**
 * Repeat-until-success statistics as a JSON object. Free with
 * [`ct_string_free`]. Returns NULL on error.
 *
 * # Safety
 * `input` and `channel` must be live handles.
 */
char *ct_monte_carlo_repeat_json(const struct CtInput *input,
                                 const struct CtChannel *channel,
                                 uint64_t trials,
                                 uint32_t max_tries,
                                 uint64_t seed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLUSTER_TELEPORT_H */

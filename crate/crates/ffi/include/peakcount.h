#ifndef PEAKCOUNT_H
#define PEAKCOUNT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_INVALID_ARGUMENT = 1,
  PC_STATUS_CAPABILITY_EXCEEDED = 2,
  PC_STATUS_NULL_POINTER = 3,
  PC_STATUS_PANIC = 4,
} PcStatus;

/**
 * An election: `n` votes over candidates `1..=m`.
 */
typedef struct PcElection PcElection;

/**
 * A probability model to sample from or bound.
 */
typedef struct PcModel PcModel;

/**
 * Natural logarithms of the available bounds; `has_*` is 0 when a value is
 * absent.
 */
typedef struct PcBounds {
  int has_lower;
  double ln_lower;
  int has_upper;
  double ln_upper;
  int has_exact;
  double ln_exact;
} PcBounds;

typedef struct PcEstimate {
  uint64_t successes;
  uint64_t trials;
  double estimate;
  double ci_low;
  double ci_high;
} PcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Free with
 * [`pc_string_free`].
 */
char *pc_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void pc_string_free(char *s);

/**
 * Kendall tau distance between two votes over `1..=m`.
 *
 * # Safety
 * `a` and `b` must point to `m` readable values; `out_distance` must be writable.
 */
enum PcStatus pc_kendall_tau(const uint16_t *a,
                             const uint16_t *b,
                             size_t m,
                             uint64_t *out_distance);

/**
 * Builds an election from `n * m` ranks stored vote after vote.
 *
 * # Safety
 * `ranks` must point to `n * m` readable values; `out_election` must be
 * writable.
 */
enum PcStatus pc_election_new(const uint16_t *ranks,
                              size_t n,
                              size_t m,
                              struct PcElection **out_election);

/**
 * Parses the first election of a text in the election file format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out_election` must be writable.
 */
enum PcStatus pc_election_parse(const char *text, struct PcElection **out_election);

/**
 * # Safety
 * `e` must be NULL or a handle from this library that has not been freed.
 */
void pc_election_free(struct PcElection *e);

/**
 * Number of votes, or 0 for NULL.
 *
 * # Safety
 * `e` must be NULL or a live handle.
 */
size_t pc_election_n(const struct PcElection *e);

/**
 * Number of candidates, or 0 for NULL.
 *
 * # Safety
 * `e` must be NULL or a live handle.
 */
size_t pc_election_m(const struct PcElection *e);

/**
 * Copies vote `index` (0-based) into `out_vote`, which holds `m` values.
 *
 * # Safety
 * `e` must be a live handle and `out_vote` must have room for `m` values.
 */
enum PcStatus pc_election_vote(const struct PcElection *e, size_t index, uint16_t *out_vote);

/**
 * The election in the file format. Free with [`pc_string_free`].
 *
 * # Safety
 * `e` must be a live handle; `out_text` must be writable.
 */
enum PcStatus pc_election_to_string(const struct PcElection *e, char **out_text);

/**
 * Sets `*out_is_sp` to 1 when the election is single-peaked and then writes
 * an axis of `m` candidates to `out_axis` (which may be NULL). With
 * `exhaustive` nonzero the lexicographically first axis is reported.
 *
 * # Safety
 * `e` must be a live handle, `out_is_sp` writable and `out_axis` NULL or
 * room for `m` values.
 */
enum PcStatus pc_recognize(const struct PcElection *e,
                           int exhaustive,
                           int *out_is_sp,
                           uint16_t *out_axis);

/**
 * Number of single-peaked `(n, m)`-elections as a decimal string, where a
 * closed form exists. Free with [`pc_string_free`].
 *
 * # Safety
 * `out_count` must be writable.
 */
enum PcStatus pc_sp_count(uint64_t n, uint64_t m, char **out_count);

/**
 * Impartial Culture.
 */
struct PcModel *pc_model_ic(void);

/**
 * Impartial Anonymous Culture.
 */
struct PcModel *pc_model_iac(void);

/**
 * Pólya urn with homogeneity `a >= 1`.
 *
 * # Safety
 * `out_model` must be writable.
 */
enum PcStatus pc_model_polya(uint64_t a, struct PcModel **out_model);

/**
 * Mallows model. `phi` is a decimal (`"0.1"`) or fraction (`"1/3"`) in
 * `(0, 1]`; `reference` holds `m` candidates.
 *
 * # Safety
 * `phi` must be a nul-terminated string, `reference` must point to `m`
 * values and `out_model` must be writable.
 */
enum PcStatus pc_model_mallows(const char *phi,
                               const uint16_t *reference,
                               size_t m,
                               struct PcModel **out_model);

/**
 * # Safety
 * `model` must be NULL or a handle from this library that has not been freed.
 */
void pc_model_free(struct PcModel *model);

/**
 * Bounds on the probability that an `(n, m)`-election drawn from `model` is
 * single-peaked. The Pólya lower bound is the guaranteed two-vote bound.
 *
 * # Safety
 * `model` must be a live handle and `out_bounds` writable.
 */
enum PcStatus pc_bounds(const struct PcModel *model,
                        uint64_t n,
                        uint64_t m,
                        struct PcBounds *out_bounds);

/**
 * Draws one election from stream `stream` of `seed`.
 *
 * # Safety
 * `model` must be a live handle and `out_election` writable.
 */
enum PcStatus pc_sample(const struct PcModel *model,
                        size_t n,
                        size_t m,
                        uint64_t seed,
                        uint64_t stream,
                        struct PcElection **out_election);

/**
 * Monte Carlo estimate of the single-peaked probability. Results depend on
 * `seed` but not on `workers`.
 *
 * # Safety
 * `model` must be a live handle and `out_estimate` writable.
 */
enum PcStatus pc_estimate(const struct PcModel *model,
                          size_t n,
                          size_t m,
                          uint64_t trials,
                          uint64_t seed,
                          size_t workers,
                          struct PcEstimate *out_estimate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PEAKCOUNT_H */

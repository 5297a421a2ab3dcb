#ifndef KEYFORGE_H
#define KEYFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_NULL_POINTER = 1,
  KF_STATUS_UNKNOWN_CODE = 2,
  KF_STATUS_LENGTH_MISMATCH = 3,
  KF_STATUS_DECODE_FAILURE = 4,
  KF_STATUS_FORMAT_ERROR = 5,
  KF_STATUS_BUFFER_TOO_SMALL = 6,
  KF_STATUS_INVALID_ARGUMENT = 7,
  KF_STATUS_CODE_MISMATCH = 8,
  KF_STATUS_INTERNAL = 9,
} KfStatus;

/**
 * Tail model selector for `kf_stage_fail_prob`.
 */
typedef enum KfTail {
  KF_TAIL_TRINOMIAL = 0,
  KF_TAIL_CONDITIONAL = 1,
  KF_TAIL_INDEPENDENT = 2,
} KfTail;

/**
 * A constructed GC code.
 */
typedef struct KfCode KfCode;

/**
 * Parsed or freshly generated helper data.
 */
typedef struct KfHelper KfHelper;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable description of a status. The string is static.
 */
const char *kf_status_message(enum KfStatus status);

/**
 * Construct a preset code by id (for example `"gc-rm-2048"`).
 *
 * # Safety
 * `id` must be a NUL-terminated string; `out` must be writable.
 */
enum KfStatus kf_code_new(const char *id, struct KfCode **out);

/**
 * # Safety
 * `code` must be null or a handle from `kf_code_new` not yet freed.
 */
void kf_code_free(struct KfCode *code);

/**
 * Code length in bits (0 for a null handle).
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t kf_code_n(const struct KfCode *code);

/**
 * Code dimension in bits (0 for a null handle).
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t kf_code_k(const struct KfCode *code);

/**
 * Generate helper data and a 16-byte key from a response.
 *
 * # Safety
 * `response` must be valid for `response_len` bytes, `key_out` for 16
 * bytes, and `helper_out` writable.
 */
enum KfStatus kf_gen(const struct KfCode *code,
                     const uint8_t *response,
                     size_t response_len,
                     uint64_t seed,
                     struct KfHelper **helper_out,
                     uint8_t *key_out);

/**
 * Reproduce the key from a noisy response. Returns
 * `KF_STATUS_DECODE_FAILURE` without touching `key_out` when decoding fails.
 *
 * # Safety
 * Handles must be live, `response` valid for `response_len` bytes and
 * `key_out` for 16 bytes.
 */
enum KfStatus kf_rep(const struct KfCode *code,
                     const struct KfHelper *helper,
                     const uint8_t *response,
                     size_t response_len,
                     uint8_t *key_out);

/**
 * Serialize helper data. `*written` receives the required size; with a
 * null or short buffer the call returns `KF_STATUS_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes; `written` must be writable.
 */
enum KfStatus kf_helper_serialize(const struct KfHelper *helper,
                                  uint8_t *buf,
                                  size_t cap,
                                  size_t *written);

/**
 * Parse serialized helper data.
 *
 * # Safety
 * `buf` must be valid for `len` bytes; `out` must be writable.
 */
enum KfStatus kf_helper_parse(const uint8_t *buf, size_t len, struct KfHelper **out);

/**
 * Offset length in bits (0 for a null handle).
 *
 * # Safety
 * `helper` must be null or a live handle.
 */
size_t kf_helper_n(const struct KfHelper *helper);

/**
 * # Safety
 * `helper` must be null or a handle not yet freed.
 */
void kf_helper_free(struct KfHelper *helper);

/**
 * Power decoding radius of an RS(n, k) code with `ell` powers.
 *
 * # Safety
 * `out` must be writable.
 */
enum KfStatus kf_power_radius(size_t n, size_t k, size_t ell, size_t *out);

/**
 * Largest useful number of powers for RS(n, k), `1 <= k <= n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum KfStatus kf_power_lmax(size_t n, size_t k, size_t *out);

/**
 * Failure probability of a half-distance error/erasure decoder of length
 * `n` and distance `d` over a symbol channel.
 *
 * # Safety
 * `out` must be writable.
 */
enum KfStatus kf_stage_fail_prob(size_t n,
                                 size_t d,
                                 double p_err,
                                 double p_eras,
                                 enum KfTail tail,
                                 double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KEYFORGE_H */

#ifndef QUQUAT_H
#define QUQUAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QqStatus {
  QQ_STATUS_OK = 0,
  QQ_STATUS_NULL_POINTER = 1,
  QQ_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON, unknown name or mismatched dimensions.
  QQ_STATUS_SCHEMA = 3,
  // Input violates a physical or numerical precondition.
  QQ_STATUS_CONTRACT = 4,
  QQ_STATUS_ZERO_PROBABILITY = 5,
  QQ_STATUS_BUFFER_TOO_SMALL = 6,
  QQ_STATUS_PANIC = 7,
} QqStatus;

// Opaque gate matrix.
typedef struct QqGate QqGate;

// Opaque Pauli vector.
typedef struct QqState QqState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or null. Owned by the
// library; valid until the next failing call.
const char *qq_last_error(void);

// Library version as a static NUL-terminated string.
const char *qq_version(void);

// # Safety
// `s` must come from this library or be null.
void qq_string_free(char *s);

// # Safety
// `g` must come from this library or be null.
void qq_gate_free(struct QqGate *g);

// # Safety
// `s` must come from this library or be null.
void qq_state_free(struct QqState *s);

// Gate from its JSON document `{"n_in", "n_out", "kind"?, "entries"}`.
//
// # Safety
// `doc` must be a NUL-terminated string; `out` must be writable.
enum QqStatus qq_gate_from_json(const char *doc, struct QqGate **out);

// Gate of a unitary given as a JSON complex matrix (`{"U": m}` or bare `m`).
//
// # Safety
// `doc` must be a NUL-terminated string; `out` must be writable.
enum QqStatus qq_gate_from_unitary_json(const char *doc, struct QqGate **out);

// Gate of a Kraus set `{"ops": [matrices]}`.
//
// # Safety
// `doc` must be a NUL-terminated string; `out` must be writable.
enum QqStatus qq_gate_from_kraus_json(const char *doc, struct QqGate **out);

// Elementary single-ququat gate by name (`not`, `hadamard`, `rot1`, ...).
//
// # Safety
// `name` must be a NUL-terminated string; `params` must point to `n_params`
// doubles (or be null when `n_params` is 0); `out` must be writable.
enum QqStatus qq_gate_named(const char *name,
                            const double *params,
                            size_t n_params,
                            struct QqGate **out);

// Gate realizing one or more four-valued truth tables of a common arity.
// `tables` is a comma-separated list of builtin names or base-4 strings.
//
// # Safety
// `tables` must be a NUL-terminated string; `out` must be writable.
enum QqStatus qq_gate_synthesize(const char *tables, struct QqGate **out);

// Whether `g` realizes the tables exactly on computational inputs.
//
// # Safety
// `g` must be a live handle; `tables` a NUL-terminated string; `out` writable.
enum QqStatus qq_gate_verify(const struct QqGate *g, const char *tables, bool *out);

// JSON document of a gate.
//
// # Safety
// `g` must be a live handle; `out` writable. Free the result with
// [`qq_string_free`].
enum QqStatus qq_gate_to_json(const struct QqGate *g, char **out);

// Property report of a gate as JSON.
//
// # Safety
// `g` must be a live handle; `out` writable.
enum QqStatus qq_gate_analyze(const struct QqGate *g, char **out);

// Number of input and output ququats.
//
// # Safety
// `g` must be a live handle; `n_in` and `n_out` writable.
enum QqStatus qq_gate_dims(const struct QqGate *g, size_t *n_in, size_t *n_out);

// Copy the `4^n_out x 4^n_in` entries in row-major order into `buf`.
//
// # Safety
// `g` must be a live handle; `buf` must hold `len` doubles.
enum QqStatus qq_gate_entries(const struct QqGate *g, double *buf, size_t len);

// `second . first`.
//
// # Safety
// Both handles must be live; `out` writable.
enum QqStatus qq_gate_compose(const struct QqGate *second,
                              const struct QqGate *first,
                              struct QqGate **out);

// `a (x) b`.
//
// # Safety
// Both handles must be live; `out` writable.
enum QqStatus qq_gate_tensor(const struct QqGate *a, const struct QqGate *b, struct QqGate **out);

// Pauli vector from `len = 4^n` coefficients with `P_0 = 1`.
//
// # Safety
// `p` must point to `len` doubles; `out` writable.
enum QqStatus qq_state_new(const double *p, size_t len, struct QqState **out);

// Pauli vector from `{"n"?, "P": [...]}`.
//
// # Safety
// `doc` must be a NUL-terminated string; `out` writable.
enum QqStatus qq_state_from_json(const char *doc, struct QqState **out);

// JSON document of a Pauli vector.
//
// # Safety
// `s` must be a live handle; `out` writable.
enum QqStatus qq_state_to_json(const struct QqState *s, char **out);

// Number of coefficients, `4^n`.
//
// # Safety
// `s` must be a live handle; `len` writable.
enum QqStatus qq_state_len(const struct QqState *s, size_t *len);

// Copy the coefficients into `buf`.
//
// # Safety
// `s` must be a live handle; `buf` must hold `len` doubles.
enum QqStatus qq_state_coefficients(const struct QqState *s, double *buf, size_t len);

// Apply a gate. Trace-decreasing gates renormalize the output and report the
// success probability through `probability` (1 for trace-preserving gates).
// `probability` may be null.
//
// # Safety
// Handles must be live; `out` writable.
enum QqStatus qq_gate_apply(const struct QqGate *g,
                            const struct QqState *s,
                            struct QqState **out,
                            double *probability);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUQUAT_H */

#ifndef OGC_H
#define OGC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of a call.
typedef enum OgcStatus {
  OGC_STATUS_OK = 0,
  // A required pointer was null or an index was out of range.
  OGC_STATUS_NULL_OR_RANGE = 1,
  // Field order is not a supported prime power.
  OGC_STATUS_BAD_FIELD = 2,
  OGC_STATUS_INVALID_PARAMS = 3,
  OGC_STATUS_BUDGET_EXCEEDED = 4,
  // Arithmetic or construction failure inside the library.
  OGC_STATUS_INTERNAL = 5,
  OGC_STATUS_PANIC = 6,
} OgcStatus;

// Code of the Plücker image of the Grassmannian `(n, k)` over `GF(q)`.
typedef struct OgcCode OgcCode;

// `±1` matrix of order `2^r`.
typedef struct OgcSignMatrix OgcSignMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *ogc_last_error(void);

// Builds the code of the Grassmannian `(n, k)` over `GF(q)`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum OgcStatus ogc_code_new(uint32_t n, uint32_t k, uint64_t q, struct OgcCode **out);

// Length `N`, or 0 for a null handle.
//
// # Safety
// `code` must be null or a live handle from [`ogc_code_new`].
size_t ogc_code_length(const struct OgcCode *code);

// Dimension `K`, or 0 for a null handle.
//
// # Safety
// `code` must be null or a live handle from [`ogc_code_new`].
size_t ogc_code_dimension(const struct OgcCode *code);

// Exact minimum distance, enumerating at most `budget` messages.
//
// # Safety
// `code` must be a live handle and `out` a valid pointer.
enum OgcStatus ogc_code_min_distance(const struct OgcCode *code, uint64_t budget, uint64_t *out);

// Writes entry `(row, col)` of the generator matrix as a field-element index.
//
// # Safety
// `code` must be a live handle and `out` a valid pointer.
enum OgcStatus ogc_code_generator_entry(const struct OgcCode *code,
                                        size_t row,
                                        size_t col,
                                        uint16_t *out);

// # Safety
// `code` must be null or a handle from [`ogc_code_new`] not yet freed.
void ogc_code_free(struct OgcCode *code);

// `A[S][T] = (-1)^{|S ∩ T|}`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum OgcStatus ogc_sign_matrix_formula(uint32_t r, struct OgcSignMatrix **out);

// Sign matrix read off the truncated cap family for the 1-based index set
// `j[0..j_len]` in dimension `2n+1` over `GF(q)`.
//
// # Safety
// `j` must point to `j_len` readable values and `out` must be valid.
enum OgcStatus ogc_sign_matrix_from_cap(uint32_t n,
                                        uint64_t q,
                                        const uint32_t *j,
                                        size_t j_len,
                                        struct OgcSignMatrix **out);

// Order `2^r`, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t ogc_sign_matrix_order(const struct OgcSignMatrix *m);

// Entry `(i, j)`, or 0 for a null handle or an index out of range.
//
// # Safety
// `m` must be null or a live handle.
int8_t ogc_sign_matrix_get(const struct OgcSignMatrix *m, size_t i, size_t j);

// Whether `H Hᵀ = 2^r I`; false for a null handle.
//
// # Safety
// `m` must be null or a live handle.
bool ogc_sign_matrix_is_hadamard(const struct OgcSignMatrix *m);

// Whether two handles hold equal matrices; false if either is null.
//
// # Safety
// Each argument must be null or a live handle.
bool ogc_sign_matrix_equal(const struct OgcSignMatrix *a, const struct OgcSignMatrix *b);

// # Safety
// `m` must be null or a handle not yet freed.
void ogc_sign_matrix_free(struct OgcSignMatrix *m);

// Number of totally singular `k`-subspaces of `Q(2n, q)`.
//
// # Safety
// `out` must be a valid pointer.
enum OgcStatus ogc_delta_point_count(uint32_t n, uint32_t k, uint64_t q, uint64_t *out);

// `ψ (q^{k(n-k)} - 1) + 1` for `1 ≤ k < n`.
//
// # Safety
// `out` must be a valid pointer.
enum OgcStatus ogc_mr1_lower_bound(uint32_t n, uint32_t k, uint64_t q, uint64_t psi, uint64_t *out);

// Size of a largest (`exact`) or maximal partial spread of `Q(2m, q)`.
//
// # Safety
// `out` must be a valid pointer.
enum OgcStatus ogc_max_partial_spread(uint32_t m, uint64_t q, bool exact, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OGC_H */

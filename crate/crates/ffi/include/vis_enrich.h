#ifndef VIS_ENRICH_H
#define VIS_ENRICH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VeStatus {
  VE_STATUS_OK = 0,
  VE_STATUS_NULL_POINTER = 1,
  VE_STATUS_INVALID_UTF8 = 2,
  VE_STATUS_INVALID_ARGUMENT = 3,
  VE_STATUS_PARSE = 4,
  VE_STATUS_UNKNOWN_CONCEPT = 5,
  VE_STATUS_IO = 6,
  VE_STATUS_PANIC = 7,
} VeStatus;

typedef enum VeTconorm {
  VE_TCONORM_MAX = 0,
  VE_TCONORM_PROBABILISTIC_SUM = 1,
  VE_TCONORM_BOUNDED_SUM = 2,
} VeTconorm;

/**
 * How the first concept stands with respect to the second.
 */
typedef enum VeRelation {
  VE_RELATION_EQUAL = 0,
  VE_RELATION_GENERIC = 1,
  VE_RELATION_SPECIFIC = 2,
  VE_RELATION_UNRELATED = 3,
} VeRelation;

/**
 * Opaque searchable index loaded from a store file.
 */
typedef struct VeIndex VeIndex;

/**
 * Opaque concept lattice.
 */
typedef struct VeLattice VeLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ve_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ve_string_free(char *s);

/**
 * Applies a t-conorm to two values in `[0, 1]`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VeStatus ve_tconorm(enum VeTconorm kind, double a, double b, double *out);

/**
 * The taxonomy shipped with the library.
 */
struct VeLattice *ve_lattice_bundled(void);

/**
 * Parses a taxonomy document.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum VeStatus ve_lattice_load(const char *source, struct VeLattice **out);

/**
 * # Safety
 * `lattice` must come from this library and not have been freed.
 */
void ve_lattice_free(struct VeLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be valid for writes.
 */
enum VeStatus ve_lattice_len(const struct VeLattice *lattice, size_t *out);

/**
 * Relation of concept `a` to concept `b`.
 *
 * # Safety
 * `lattice` must be a live handle, `a` and `b` NUL-terminated strings and
 * `out` valid for writes.
 */
enum VeStatus ve_lattice_relation(const struct VeLattice *lattice,
                                  const char *a,
                                  const char *b,
                                  enum VeRelation *out);

/**
 * Path similarity between two concepts.
 *
 * # Safety
 * Same contract as [`ve_lattice_relation`].
 */
enum VeStatus ve_lattice_epsilon(const struct VeLattice *lattice,
                                 const char *a,
                                 const char *b,
                                 double *out);

/**
 * Membership of `concept` given a source concept carrying `value`.
 *
 * # Safety
 * Same contract as [`ve_lattice_relation`].
 */
enum VeStatus ve_mu(const struct VeLattice *lattice,
                    const char *concept,
                    const char *source,
                    double value,
                    double *out);

/**
 * Parses VIS text and writes back its canonical form.
 *
 * # Safety
 * `vis` must be a NUL-terminated string; `out` must be valid for writes.
 * The result must be released with [`ve_string_free`].
 */
enum VeStatus ve_vis_canonicalize(const char *vis, char **out);

/**
 * NDCG@n of grades in rank order against every judged grade of the query.
 *
 * # Safety
 * `ranked` and `judged` must point to `ranked_len` and `judged_len`
 * readable bytes (either may be null when its length is 0).
 */
enum VeStatus ve_ndcg(const uint8_t *ranked,
                      size_t ranked_len,
                      const uint8_t *judged,
                      size_t judged_len,
                      size_t n,
                      double *out);

/**
 * Opens an index store file for searching.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum VeStatus ve_index_open(const char *path, struct VeIndex **out);

/**
 * # Safety
 * `index` must come from [`ve_index_open`] and not have been freed.
 */
void ve_index_free(struct VeIndex *index);

/**
 * # Safety
 * `index` must be a live handle; `out` must be valid for writes.
 */
enum VeStatus ve_index_len(const struct VeIndex *index, size_t *out);

/**
 * Ranks documents for `query` and writes a JSON array of
 * `{"doc_id", "score"}` objects, best first. `strategy` is one of `vis`,
 * `cx`, `vis+cx` or `tfidf`.
 *
 * # Safety
 * `index` must be a live handle, `strategy` and `query` NUL-terminated
 * strings and `out` valid for writes. Release the result with
 * [`ve_string_free`].
 */
enum VeStatus ve_index_search(const struct VeIndex *index,
                              const char *strategy,
                              const char *query,
                              size_t k,
                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VIS_ENRICH_H */

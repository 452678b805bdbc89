#ifndef GALEX_H
#define GALEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define GALEX_NO_CONCEPT SIZE_MAX

/**
 * Result of every fallible call.
 */
typedef enum {
  GALEX_STATUS_OK = 0,
  GALEX_STATUS_NULL_POINTER = 1,
  GALEX_STATUS_INVALID_UTF8 = 2,
  GALEX_STATUS_DUPLICATE_NAME = 3,
  GALEX_STATUS_MALFORMED_TABLE = 4,
  GALEX_STATUS_EMPTY_CONTEXT = 5,
  GALEX_STATUS_CAPACITY_EXCEEDED = 6,
  GALEX_STATUS_INVALID_SET = 7,
  GALEX_STATUS_UNKNOWN_CONCEPT = 8,
  GALEX_STATUS_UNKNOWN_ATTRIBUTE = 9,
  GALEX_STATUS_UNKNOWN_OBJECT = 10,
  GALEX_STATUS_INVALID_THRESHOLD = 11,
  GALEX_STATUS_NOT_ADJACENT = 12,
  GALEX_STATUS_INVALID_ARGUMENT = 13,
  GALEX_STATUS_IO = 14,
  GALEX_STATUS_INTERNAL = 15,
} GalexStatus;

typedef enum {
  GALEX_FORMAT_CSV = 0,
  GALEX_FORMAT_JSON = 1,
} GalexFormat;

typedef enum {
  GALEX_POSET_KIND_AOC = 0,
  GALEX_POSET_KIND_AC = 1,
  GALEX_POSET_KIND_OC = 2,
  GALEX_POSET_KIND_ICEBERG = 3,
} GalexPosetKind;

typedef enum {
  GALEX_CONFIGURATION_CLASS_VALID = 0,
  GALEX_CONFIGURATION_CLASS_MAXIMAL_PARTIAL = 1,
  GALEX_CONFIGURATION_CLASS_PARTIAL = 2,
  GALEX_CONFIGURATION_CLASS_INVALID = 3,
} GalexConfigurationClass;

/**
 * Opaque formal context.
 */
typedef struct GalexContext GalexContext;

/**
 * Opaque concept lattice.
 */
typedef struct GalexLattice GalexLattice;

/**
 * Opaque navigation session. Keeps its lattice alive on its own.
 */
typedef struct GalexSession GalexSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *galex_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void galex_string_free(char *s);

/**
 * Parses a NUL-terminated CSV or JSON context.
 *
 * # Safety
 * `source` must be a valid C string; `out` must be writable.
 */
GalexStatus galex_context_parse(const char *source, GalexFormat format, GalexContext **out);

/**
 * Reads a context file; `.json` files are JSON, anything else CSV.
 *
 * # Safety
 * `path` must be a valid C string; `out` must be writable.
 */
GalexStatus galex_context_load(const char *path, GalexContext **out);

/**
 * # Safety
 * `ctx` must be NULL or a handle from `galex_context_parse`/`galex_context_load`.
 */
void galex_context_free(GalexContext *ctx);

/**
 * # Safety
 * `ctx` must be a live context handle.
 */
size_t galex_context_object_count(const GalexContext *ctx);

/**
 * # Safety
 * `ctx` must be a live context handle.
 */
size_t galex_context_attribute_count(const GalexContext *ctx);

/**
 * Builds the concept lattice. `max_concepts == 0` uses the default ceiling.
 *
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
GalexStatus galex_lattice_build(const GalexContext *ctx, size_t max_concepts, GalexLattice **out);

/**
 * # Safety
 * `l` must be NULL or a handle from `galex_lattice_build`.
 */
void galex_lattice_free(GalexLattice *l);

/**
 * # Safety
 * `l` must be a live lattice handle.
 */
size_t galex_lattice_concept_count(const GalexLattice *l);

/**
 * # Safety
 * `l` must be a live lattice handle.
 */
size_t galex_lattice_top(const GalexLattice *l);

/**
 * # Safety
 * `l` must be a live lattice handle.
 */
size_t galex_lattice_bottom(const GalexLattice *l);

/**
 * Writes whether concept `a` is below or equal to concept `b`.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
GalexStatus galex_lattice_leq(const GalexLattice *l, size_t a, size_t b, bool *out);

/**
 * Least upper bound of `len` concepts.
 *
 * # Safety
 * `ids` must point to `len` readable ids; `out` must be writable.
 */
GalexStatus galex_lattice_join(const GalexLattice *l, const size_t *ids, size_t len, size_t *out);

/**
 * Greatest lower bound of `len` concepts.
 *
 * # Safety
 * `ids` must point to `len` readable ids; `out` must be writable.
 */
GalexStatus galex_lattice_meet(const GalexLattice *l, const size_t *ids, size_t len, size_t *out);

/**
 * # Safety
 * `attribute` must be a valid C string; `out` must be writable.
 */
GalexStatus galex_lattice_attribute_concept(const GalexLattice *l,
                                            const char *attribute,
                                            size_t *out);

/**
 * # Safety
 * `object` must be a valid C string; `out` must be writable.
 */
GalexStatus galex_lattice_object_concept(const GalexLattice *l, const char *object, size_t *out);

/**
 * Canonical lattice JSON.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
GalexStatus galex_lattice_to_json(const GalexLattice *l, char **out);

/**
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
GalexStatus galex_lattice_to_dot(const GalexLattice *l, bool full_labels, char **out);

/**
 * Variability report JSON.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
GalexStatus galex_report_to_json(const GalexLattice *l, bool exhaustive, char **out);

/**
 * Sub-hierarchy JSON. `min_extent` is only read for icebergs.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
GalexStatus galex_subhierarchy_to_json(const GalexLattice *l,
                                       GalexPosetKind kind,
                                       size_t min_extent,
                                       char **out);

/**
 * Classifies the attribute set given by `len` names. `out_concept` receives
 * the witness concept, or `GALEX_NO_CONCEPT` for invalid sets.
 *
 * # Safety
 * `names` must point to `len` valid C strings; both outputs must be writable.
 */
GalexStatus galex_classify(const GalexLattice *l,
                           const char *const *names,
                           size_t len,
                           GalexConfigurationClass *out_class,
                           size_t *out_concept);

/**
 * Starts a session at `at`, or at the top concept when `at` is `GALEX_NO_CONCEPT`.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
GalexStatus galex_session_start(const GalexLattice *l, size_t at, GalexSession **out);

/**
 * # Safety
 * `s` must be NULL or a handle from `galex_session_start`.
 */
void galex_session_free(GalexSession *s);

/**
 * # Safety
 * `s` must be a live session handle.
 */
size_t galex_session_current(const GalexSession *s);

/**
 * Available moves as a JSON array.
 *
 * # Safety
 * `s` must be a live session handle; `out` must be writable.
 */
GalexStatus galex_session_moves_json(const GalexSession *s, char **out);

/**
 * History as a JSON array of `{"concept", "via"}`.
 *
 * # Safety
 * `s` must be a live session handle; `out` must be writable.
 */
GalexStatus galex_session_history_json(const GalexSession *s, char **out);

/**
 * Steps to a cover neighbour; fails with `NOT_ADJACENT` otherwise.
 *
 * # Safety
 * `s` must be a live session handle.
 */
GalexStatus galex_session_move(GalexSession *s, size_t target);

/**
 * Jumps to any concept.
 *
 * # Safety
 * `s` must be a live session handle.
 */
GalexStatus galex_session_jump(GalexSession *s, size_t target);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GALEX_H */

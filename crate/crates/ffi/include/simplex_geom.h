#ifndef SIMPLEX_GEOM_H
#define SIMPLEX_GEOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_ARGUMENT = 2,
  SG_STATUS_PARSE_ERROR = 3,
  SG_STATUS_INVALID_DESIGN = 4,
  SG_STATUS_INCONSISTENT = 5,
  SG_STATUS_BUFFER_TOO_SMALL = 6,
  SG_STATUS_PANIC = 7,
} SgStatus;

typedef enum SgKind {
  SG_KIND_C1 = 0,
  SG_KIND_C2 = 1,
  SG_KIND_C3 = 2,
  SG_KIND_C4 = 3,
  SG_KIND_NON_CENTERED = 4,
  SG_KIND_HYPERPLANE_COMPLEMENT = 5,
} SgKind;

typedef enum SgTag {
  SG_TAG_C1 = 1,
  SG_TAG_C2 = 2,
  SG_TAG_C3 = 3,
  SG_TAG_C4 = 4,
  SG_TAG_NON_CENTERED = 5,
} SgTag;

typedef struct SgClique SgClique;

typedef struct SgDesign SgDesign;

typedef struct SgClassification {
  /**
   * An `SgTag` value.
   */
  int32_t tag;
  uint32_t centers;
  uint32_t lines_inside;
  uint32_t fano_planes;
  /**
   * Bijection index at the smallest center, or -1 without a center.
   */
  int32_t index;
} SgClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error on this thread, or null. Valid until the next failing call.
 */
const char *sg_last_error_message(void);

/**
 * Builds the canonical clique of kind `kind` (an `SgKind` value).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SgStatus sg_clique_construct(int32_t kind, struct SgClique **out);

/**
 * # Safety
 * `c` must be null or a handle from `sg_clique_construct` not yet freed.
 */
void sg_clique_free(struct SgClique *c);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live clique handle.
 */
size_t sg_clique_len(const struct SgClique *c);

/**
 * Point `i` as a bitmask: element `e` is bit `e - 1`.
 *
 * # Safety
 * `c` must be a live clique handle and `out` writable.
 */
enum SgStatus sg_clique_point(const struct SgClique *c, size_t i, uint64_t *out);

/**
 * # Safety
 * `c` must be a live clique handle and `out` writable.
 */
enum SgStatus sg_clique_classify(const struct SgClique *c, struct SgClassification *out);

/**
 * # Safety
 * `c` must be a live clique handle and `out` writable.
 */
enum SgStatus sg_design_from_clique(const struct SgClique *c, struct SgDesign **out);

/**
 * Parses `v` rows of `v` characters `0`/`1`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SgStatus sg_design_from_incidence(const char *text, struct SgDesign **out);

/**
 * Parses a normalized Hadamard matrix in `+`/`-` or `0`/`1` form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SgStatus sg_design_from_hadamard(const char *text, struct SgDesign **out);

/**
 * # Safety
 * `d` must be null or a design handle not yet freed.
 */
void sg_design_free(struct SgDesign *d);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live design handle.
 */
size_t sg_design_points(const struct SgDesign *d);

/**
 * # Safety
 * `d` must be a live design handle; `buf` null or writable for `cap`
 * bytes; `needed` null or writable.
 */
enum SgStatus sg_design_incidence_text(const struct SgDesign *d,
                                       char *buf,
                                       size_t cap,
                                       size_t *needed);

/**
 * Bordered Hadamard matrix; `binary` selects `0`/`1` over `+`/`-`.
 *
 * # Safety
 * As for [`sg_design_incidence_text`].
 */
enum SgStatus sg_design_hadamard_text(const struct SgDesign *d,
                                      bool binary,
                                      char *buf,
                                      size_t cap,
                                      size_t *needed);

/**
 * Looks for a point map from `a` to `b`. On success `*found` says whether
 * one exists; if so `perm[i]` is the image of point `i + 1` (1-based) for
 * `i < v`, and `perm` must hold `v` entries.
 *
 * # Safety
 * `a`, `b` must be live design handles; `perm` writable for `cap` bytes;
 * `found` writable.
 */
enum SgStatus sg_design_find_isomorphism(const struct SgDesign *a,
                                         const struct SgDesign *b,
                                         uint8_t *perm,
                                         size_t cap,
                                         bool *found);

/**
 * Order of the full automorphism group and its orbit counts on blocks and
 * on flags. Any output pointer may be null.
 *
 * # Safety
 * `d` must be a live design handle; non-null outputs writable.
 */
enum SgStatus sg_design_automorphisms(const struct SgDesign *d,
                                      uint64_t *order,
                                      size_t *block_orbits,
                                      size_t *flag_orbits);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLEX_GEOM_H */

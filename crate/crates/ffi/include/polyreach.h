#ifndef POLYREACH_H
#define POLYREACH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PolyreachStatus {
  POLYREACH_STATUS_OK = 0,
  POLYREACH_STATUS_NULL_POINTER = 1,
  /**
   * Text is not valid UTF-8 or does not parse.
   */
  POLYREACH_STATUS_PARSE_ERROR = 2,
  /**
   * Arguments are out of range.
   */
  POLYREACH_STATUS_INVALID_INPUT = 3,
  POLYREACH_STATUS_NOT_A_POSET = 4,
  POLYREACH_STATUS_UNKNOWN_WORLD = 5,
  /**
   * The complex is not valid or a point lies outside it.
   */
  POLYREACH_STATUS_GEOMETRY_ERROR = 6,
  /**
   * A search finished without a result.
   */
  POLYREACH_STATUS_NOT_FOUND = 7,
  POLYREACH_STATUS_PANIC = 8,
} PolyreachStatus;

typedef struct PolyreachComplex PolyreachComplex;

typedef struct PolyreachFormula PolyreachFormula;

typedef struct PolyreachModel PolyreachModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * successful call. Valid until the next call on the same thread.
 */
const char *polyreach_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void polyreach_string_free(char *s);

/**
 * Parses a formula such as `gamma(p, q) & ~<>q`.
 *
 * # Safety
 * `source` is a NUL-terminated string; `out` is writable.
 */
enum PolyreachStatus polyreach_formula_parse(const char *source, struct PolyreachFormula **out);

/**
 * Canonical text of a formula; parsing it gives the same formula.
 *
 * # Safety
 * `f` is a live formula handle; `out` is writable.
 */
enum PolyreachStatus polyreach_formula_print(const struct PolyreachFormula *f, char **out);

/**
 * # Safety
 * `f` is null or a handle from this library, not yet freed.
 */
void polyreach_formula_free(struct PolyreachFormula *f);

/**
 * Parses the model text format (`worlds`, `order`, `valuation` lines).
 *
 * # Safety
 * `source` is a NUL-terminated string; `out` is writable.
 */
enum PolyreachStatus polyreach_model_parse(const char *source, struct PolyreachModel **out);

/**
 * # Safety
 * `m` is null or a handle from this library, not yet freed.
 */
void polyreach_model_free(struct PolyreachModel *m);

/**
 * # Safety
 * `m` is a live model handle; `out` is writable.
 */
enum PolyreachStatus polyreach_model_to_text(const struct PolyreachModel *m, char **out);

/**
 * # Safety
 * `m` is a live model handle; `out` is writable.
 */
enum PolyreachStatus polyreach_model_world_count(const struct PolyreachModel *m, uintptr_t *out);

/**
 * Index of the world called `name`.
 *
 * # Safety
 * `m` is a live model handle, `name` a NUL-terminated string and `out`
 * writable.
 */
enum PolyreachStatus polyreach_model_world_id(const struct PolyreachModel *m,
                                              const char *name,
                                              uintptr_t *out);

/**
 * Extension of `f` as sorted world names, for example `{a, u}`.
 *
 * # Safety
 * `m` and `f` are live handles; `out` is writable.
 */
enum PolyreachStatus polyreach_model_evaluate(const struct PolyreachModel *m,
                                              const struct PolyreachFormula *f,
                                              char **out);

/**
 * # Safety
 * `m` and `f` are live handles; `out` is writable.
 */
enum PolyreachStatus polyreach_model_holds_at(const struct PolyreachModel *m,
                                              const struct PolyreachFormula *f,
                                              uintptr_t world,
                                              bool *out);

/**
 * Chain model of a poset.
 *
 * # Safety
 * `m` is a live model handle; `out` is writable.
 */
enum PolyreachStatus polyreach_model_nerve(const struct PolyreachModel *m,
                                           struct PolyreachModel **out);

/**
 * # Safety
 * `m` is a live model handle; `out` is writable.
 */
enum PolyreachStatus polyreach_model_cut(const struct PolyreachModel *m,
                                         struct PolyreachModel **out);

/**
 * Searches posets with at most `max_worlds` worlds for a model of `f`.
 * Returns `POLYREACH_STATUS_NOT_FOUND` when there is none; `out_model` and
 * `out_world` are written only on success.
 *
 * # Safety
 * `f` is a live handle; both out-pointers are writable.
 */
enum PolyreachStatus polyreach_bounded_sat(const struct PolyreachFormula *f,
                                           uintptr_t max_worlds,
                                           struct PolyreachModel **out_model,
                                           uintptr_t *out_world);

/**
 * Parses and validates the complex text format (`vertex`, `simplex`,
 * `valuation` lines).
 *
 * # Safety
 * `source` is a NUL-terminated string; `out` is writable.
 */
enum PolyreachStatus polyreach_complex_parse(const char *source, struct PolyreachComplex **out);

/**
 * # Safety
 * `k` is null or a handle from this library, not yet freed.
 */
void polyreach_complex_free(struct PolyreachComplex *k);

/**
 * # Safety
 * `k` is a live complex handle; `out` is writable.
 */
enum PolyreachStatus polyreach_complex_to_text(const struct PolyreachComplex *k, char **out);

/**
 * Truth of `f` at the point `coords[0..len]`.
 *
 * # Safety
 * `k` and `f` are live handles, `coords` points to `len` doubles and `out`
 * is writable.
 */
enum PolyreachStatus polyreach_complex_evaluate_point(const struct PolyreachComplex *k,
                                                      const struct PolyreachFormula *f,
                                                      const double *coords,
                                                      uintptr_t len,
                                                      bool *out);

/**
 * Face-poset model of a complex.
 *
 * # Safety
 * `k` is a live complex handle; `out` is writable.
 */
enum PolyreachStatus polyreach_complex_companion(const struct PolyreachComplex *k,
                                                 struct PolyreachModel **out);

/**
 * Seeded random maze on a `width` by `height` grid, triangulated and
 * labeled with the atoms `red`, `green`, `white`, `gray` and `corridor`.
 *
 * # Safety
 * `out` is writable.
 */
enum PolyreachStatus polyreach_maze_generate(uintptr_t width,
                                             uintptr_t height,
                                             uint64_t seed,
                                             struct PolyreachComplex **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYREACH_H */

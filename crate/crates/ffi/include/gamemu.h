#ifndef GAMEMU_H
#define GAMEMU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define GM_LOGIC_GL 0

#define GM_LOGIC_MU 1

#define GM_TRANSLATE_F 0

#define GM_TRANSLATE_G1 1

#define GM_TRANSLATE_G 2

#define GM_REACH_PASSED 0

#define GM_REACH_REJECTED_AT_LEVEL0 1

#define GM_REACH_NO_WITNESS 2

typedef enum GmStatus {
  GM_STATUS_OK = 0,
  GM_STATUS_NULL_ARGUMENT = 1,
  GM_STATUS_INVALID_UTF8 = 2,
  GM_STATUS_PARSE = 3,
  /*
   Malformed structure, proof or query, or an unsupported argument.
   */
  GM_STATUS_INPUT = 4,
  /*
   The formula does not fit the structure or translation.
   */
  GM_STATUS_SEMANTICS = 5,
  GM_STATUS_PANIC = 6,
} GmStatus;

/*
 A parsed formula together with its inferred signature.
 */
typedef struct GmFormula GmFormula;

/*
 A finite structure.
 */
typedef struct GmStructure GmStructure;

/*
 Outcome of `gm_reach`. Rationals are rounded to the nearest double.
 */
typedef struct GmReachResult {
  /*
   One of the `GM_REACH_*` constants.
   */
  int32_t verdict;
  /*
   Depth passed, or the first depth without a witness.
   */
  uint32_t depth;
  bool budget_exhausted;
  double lhs;
  double bound;
  double n;
  uint64_t checks;
} GmReachResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer is
 valid until the next `gm_*` call on the same thread.
 */
const char *gm_last_error_message(void);

/*
 Library version as a static string.
 */
const char *gm_version(void);

/*
 Frees a string returned by this library. Null is ignored.

 # Safety
 `s` must come from a `gm_*` function that hands over ownership.
 */
void gm_string_free(char *s);

/*
 Reads a structure from its JSON description.

 # Safety
 `json` must be a nul-terminated string and `out_structure` writable.
 */
enum GmStatus gm_structure_from_json(const char *json, struct GmStructure **out_structure);

/*
 # Safety
 `s` must be null or come from `gm_structure_from_json`, freed once.
 */
void gm_structure_free(struct GmStructure *s);

/*
 Parses a formula of the given logic (`GM_LOGIC_*`).

 # Safety
 `src` must be a nul-terminated string and `out_formula` writable.
 */
enum GmStatus gm_formula_parse(const char *src, int32_t logic_code, struct GmFormula **out_formula);

/*
 # Safety
 `f` must be null or a formula handle from this library, freed once.
 */
void gm_formula_free(struct GmFormula *f);

/*
 Prints a formula. Free the result with `gm_string_free`.

 # Safety
 `f` must be a live formula handle and `out_text` writable.
 */
enum GmStatus gm_formula_to_string(const struct GmFormula *f, char **out_text);

/*
 Whether the formula holds in every state of the structure, with the
 number of satisfying assignments over its variables in sorted order.
 Either out pointer may be null.

 # Safety
 Handles must be live; non-null out pointers must be writable.
 */
enum GmStatus gm_check(const struct GmStructure *structure,
                       const struct GmFormula *formula,
                       bool *out_valid,
                       uint64_t *out_satisfying);

/*
 Translates with `GM_TRANSLATE_F` (game to fixpoint formulas),
 `GM_TRANSLATE_G1` or `GM_TRANSLATE_G` (fixpoint to game formulas).

 # Safety
 `formula` must be live and `out_formula` writable.
 */
enum GmStatus gm_translate(const struct GmFormula *formula,
                           int32_t direction,
                           struct GmFormula **out_formula);

/*
 Checks a JSON-lines proof. `out_line` receives 0 when accepted and the
 1-based position of the first rejected line otherwise.

 # Safety
 `jsonl` must be a nul-terminated string; out pointers writable.
 */
enum GmStatus gm_prove(const char *jsonl, int32_t calculus, bool *out_accepted, size_t *out_line);

/*
 Runs the reachability refinement on a JSON query.

 # Safety
 `query_json` must be a nul-terminated string and `out_result` writable.
 */
enum GmStatus gm_reach(const char *query_json, struct GmReachResult *out_result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAMEMU_H */

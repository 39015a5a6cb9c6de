#ifndef ALEPHFREE_H
#define ALEPHFREE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Yes/no answers come back through out parameters, so a
// negative answer is still `AF_STATUS_OK`.
typedef enum AfStatus {
  AF_STATUS_OK = 0,
  AF_STATUS_NULL_POINTER = 1,
  AF_STATUS_INVALID_UTF8 = 2,
  AF_STATUS_PARSE_ERROR = 3,
  AF_STATUS_INVALID_INPUT = 4,
  AF_STATUS_ENGINE_ERROR = 5,
  AF_STATUS_PANIC = 6,
} AfStatus;

typedef struct AfFormula AfFormula;

typedef struct AfGroup AfGroup;

typedef struct AfModel AfModel;

typedef struct AfPresented AfPresented;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next failing call on the same thread.
const char *af_last_error(void);

// Version number carried by every JSON report.
uint32_t af_schema_version(void);

void af_string_free(char *s);

enum AfStatus af_formula_parse(const char *text, struct AfFormula **out);

void af_formula_free(struct AfFormula *f);

enum AfStatus af_formula_to_string(const struct AfFormula *f, char **out);

// The formula tree as JSON.
enum AfStatus af_formula_to_json(const struct AfFormula *f, char **out);

enum AfStatus af_formula_is_delta0(const struct AfFormula *f, bool *out);

// Delta0 verdict with its rule trace, as JSON.
enum AfStatus af_formula_delta0_json(const struct AfFormula *f, char **out);

enum AfStatus af_formula_relativize(const struct AfFormula *f,
                                    const char *model_var,
                                    struct AfFormula **out);

enum AfStatus af_model_v_level(uintptr_t k, struct AfModel **out);

// Model from `{"name": ..., "elements": [ackermann indices]}`.
enum AfStatus af_model_from_json(const char *json, struct AfModel **out);

void af_model_free(struct AfModel *m);

enum AfStatus af_model_len(const struct AfModel *m, uintptr_t *out);

enum AfStatus af_model_is_transitive(const struct AfModel *m, bool *out);

// Truth value under an assignment given as `{"var": ackermann-index, ...}`.
enum AfStatus af_evaluate(const struct AfFormula *f,
                          const struct AfModel *m,
                          const char *assignment_json,
                          bool *out);

// Absoluteness report between `m ⊆ n` as JSON.
enum AfStatus af_absoluteness_scan_json(const struct AfFormula *f,
                                        const struct AfModel *m,
                                        const struct AfModel *n,
                                        char **out);

// Group from `{"ambient_dim": n, "generators": [[rational strings]]}`.
enum AfStatus af_group_from_json(const char *json, struct AfGroup **out);

void af_group_free(struct AfGroup *g);

enum AfStatus af_group_rank(const struct AfGroup *g, uintptr_t *out);

// Canonical basis in group-file form.
enum AfStatus af_group_to_json(const struct AfGroup *g, char **out);

// Pure closure of a JSON list of vectors inside `g`.
enum AfStatus af_pure_closure(const struct AfGroup *g, const char *set_json, struct AfGroup **out);

// Purity report `{pure, witness}` as JSON.
enum AfStatus af_is_pure_json(const struct AfGroup *h, const struct AfGroup *g, char **out);

enum AfStatus af_is_pure(const struct AfGroup *h, const struct AfGroup *g, bool *out);

enum AfStatus af_quotient(const struct AfGroup *g,
                          const struct AfGroup *h,
                          struct AfPresented **out);

// Presented group from `{"m": m, "relations": [[integer strings]]}`.
enum AfStatus af_presented_from_json(const char *json, struct AfPresented **out);

void af_presented_free(struct AfPresented *p);

enum AfStatus af_presented_is_free(const struct AfPresented *p, bool *out);

enum AfStatus af_presented_torsion_free_rank(const struct AfPresented *p, uintptr_t *out);

// `{"invariant_factors": [...], "torsion_coefficients": [...]}` as JSON strings of integers.
enum AfStatus af_presented_invariants_json(const struct AfPresented *p, char **out);

// Smith form of `{"rows", "cols", "entries"}` as `{invariant_factors, rank}`.
enum AfStatus af_snf_json(const char *matrix_json, char **out);

// Certification report for a built-in family, as JSON. `*non_free` is set
// when a witness was found.
enum AfStatus af_certify_family_json(const char *family,
                                     uintptr_t depth,
                                     uintptr_t max_subset_size,
                                     bool *non_free,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALEPHFREE_H */

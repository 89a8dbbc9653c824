/*
 * C API for the quantum measurement calculus library.
 *
 * Entities (effects, states, observables, instruments, measurement models)
 * travel as JSON text and live behind opaque handles. Every function
 * returns a status code; on failure the optional error output receives a
 * JSON document { "error": { "code", "message", ... } } that the caller
 * frees with qmc_string_free.
 */
#ifndef QMC_QMC_H
#define QMC_QMC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmc_status {
  QMC_OK = 0,
  QMC_ERR_PARSE = 1,
  QMC_ERR_VALIDATION = 2,
  QMC_ERR_DIMENSION = 3,
  QMC_ERR_NUMERIC = 4,
  QMC_ERR_ARGUMENT = 5,
  QMC_ERR_UNSUPPORTED = 6,
  QMC_ERR_INTERNAL = 7
} qmc_status;

typedef struct qmc_entity qmc_entity;

const char* qmc_status_name(qmc_status status);

void qmc_string_free(char* text);
void qmc_entity_free(qmc_entity* entity);

/* Parse and validate a JSON entity spec. */
qmc_status qmc_entity_parse(const char* json_text, double tol, qmc_entity** out_entity,
                            char** error_json);

qmc_status qmc_entity_serialize(const qmc_entity* entity, char** out_json);

/* Kind, dimensions and outcome labels of a parsed entity. */
qmc_status qmc_entity_describe(const qmc_entity* entity, char** out_json);

/* Hat map: instrument -> measured observable, model -> model instrument. */
qmc_status qmc_measure(const qmc_entity* entity, double tol, qmc_entity** out_entity,
                       char** error_json);

/* Reduction to one factor (side 1 or 2) of a base that factors as n1*n2.
 * Effects and observables reduce by normalized partial trace, states by
 * plain partial trace, instruments and models through their reduced
 * instruments. */
qmc_status qmc_reduce(const qmc_entity* entity, int n1, int n2, int side, double tol,
                      qmc_entity** out_entity, char** error_json);

/* Tensor composite of two entities of the same kind; measurement models
 * combine into the swap-conjugated composite model. */
qmc_status qmc_tensor(const qmc_entity* left, const qmc_entity* right, double tol,
                      qmc_entity** out_entity, char** error_json);

/* All parts of an observable up to equivalence, with inducing surjections. */
qmc_status qmc_enumerate_parts(const qmc_entity* observable, double tol, int max_outcomes,
                               char** out_json, char** error_json);

/* Part-of check between two entities. */
qmc_status qmc_part_check(const qmc_entity* child, const qmc_entity* parent, double tol,
                          char** out_json, char** error_json);

/* Coexistence of members inside a common parent. */
qmc_status qmc_coexist(const qmc_entity* parent, const qmc_entity* const* members,
                       int member_count, double tol, char** out_json, char** error_json);

/* Joint observable of two commuting observables, with its certificates. */
qmc_status qmc_coexist_commuting(const qmc_entity* a, const qmc_entity* b, double tol,
                                 char** out_json, char** error_json);

/* Joint probability of one event per member, evaluated through the parent. */
qmc_status qmc_joint_probability(const qmc_entity* parent, const qmc_entity* const* members,
                                 int member_count, const qmc_entity* state,
                                 const char* events_json, double tol, char** out_json,
                                 char** error_json);

/* Model instrument and model observable of a measurement model. */
qmc_status qmc_mm_run(const qmc_entity* model, double tol, char** out_json, char** error_json);

/* Runs the full verification suite. checks_failed receives the number of
 * failing checks (flagged checks do not count). */
qmc_status qmc_theorem_suite(uint64_t seed, double tol, int max_outcomes, int include_timings,
                             char** report_json, int* checks_failed, char** error_json);

#ifdef __cplusplus
}
#endif

#endif /* QMC_QMC_H */

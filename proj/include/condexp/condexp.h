/*
 * C interface to the condexp library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a cx_status; on
 * failure cx_last_error() describes the problem for the calling thread.
 */
#ifndef CONDEXP_CONDEXP_H
#define CONDEXP_CONDEXP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CONDEXP_BUILDING_LIBRARY)
#    define CONDEXP_API __declspec(dllexport)
#  else
#    define CONDEXP_API __declspec(dllimport)
#  endif
#else
#  define CONDEXP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cx_status {
    CX_OK = 0,
    CX_ERR_INVALID_ARGUMENT = 1,
    CX_ERR_PARSE = 2,
    CX_ERR_UNKNOWN_NAME = 3,
    CX_ERR_NOT_MEASURABLE = 4,
    CX_ERR_DEGENERATE = 5,
    /* The report handle is still produced for the two statuses below. */
    CX_ERR_NOT_CONVERGED = 6,
    CX_ERR_VERIFICATION_FAILED = 7,
    CX_ERR_INTERNAL = 8
} cx_status;

typedef enum cx_method {
    CX_METHOD_ORACLE = 0,
    CX_METHOD_PROJECTION = 1,
    CX_METHOD_GRADIENT = 2
} cx_method;

typedef enum cx_step_policy {
    CX_STEP_JACOBI = 0,
    CX_STEP_FIXED = 1
} cx_step_policy;

typedef enum cx_initial_point {
    CX_INIT_ZERO = 0,
    CX_INIT_MEAN = 1
} cx_initial_point;

typedef struct cx_problem cx_problem;
typedef struct cx_report cx_report;

typedef struct cx_solve_options {
    const char* variable;
    const char* sigma;
    cx_method method;
    cx_step_policy step_policy;
    double eta;               /* <= 0 selects 1 / max P(atom) */
    double tolerance;         /* gradient-norm stopping threshold */
    size_t max_iterations;
    cx_initial_point initial_point;
    const char* const* basis; /* variable names; NULL for atom indicators */
    size_t basis_count;
    int verify;
    uint64_t seed;
} cx_solve_options;

typedef struct cx_verify_options {
    const char* variable;
    const char* sigma;
    uint64_t seed;
    size_t samples;
    double tolerance;         /* <= 0 keeps the per-check defaults */
    const char* claimed;      /* NULL to verify the oracle solution */
    const char* coarse;       /* NULL to skip the tower check */
} cx_verify_options;

typedef struct cx_derivative_options {
    const char* variable;
    const char* sigma;
    uint64_t seed;
    size_t directions;
    const double* steps;      /* NULL for 1e-1 ... 1e-6 */
    size_t step_count;
    double tolerance;         /* <= 0 keeps the per-formula defaults */
} cx_derivative_options;

typedef struct cx_density_options {
    const char* variable;
    const char* sigma;
    size_t k_max;
    const double* schedule;   /* NULL for powers of ten up to max |X| */
    size_t schedule_count;
} cx_density_options;

CONDEXP_API const char* cx_version(void);
CONDEXP_API const char* cx_status_string(cx_status status);
/* Message for the last failed call on this thread; empty if none. */
CONDEXP_API const char* cx_last_error(void);

CONDEXP_API void cx_solve_options_init(cx_solve_options* options);
CONDEXP_API void cx_verify_options_init(cx_verify_options* options);
CONDEXP_API void cx_derivative_options_init(cx_derivative_options* options);
CONDEXP_API void cx_density_options_init(cx_density_options* options);

/* Problems ------------------------------------------------------------- */

CONDEXP_API cx_status cx_problem_load(const char* path, cx_problem** out);
CONDEXP_API cx_status cx_problem_parse(const char* text, size_t length, cx_problem** out);
/* Weights need not be normalized. */
CONDEXP_API cx_status cx_problem_create(const double* weights, size_t count, cx_problem** out);
CONDEXP_API cx_status cx_problem_add_variable(cx_problem* problem, const char* name,
                                              const double* values, size_t count);
/* atom_labels[i] names the atom of outcome i; equal labels share an atom. */
CONDEXP_API cx_status cx_problem_add_sigma_labels(cx_problem* problem, const char* name,
                                                  const size_t* atom_labels, size_t count);
/* Generator k is indices[offsets[k] .. offsets[k + 1]); offsets has
 * generator_count + 1 entries. */
CONDEXP_API cx_status cx_problem_add_sigma_generators(cx_problem* problem, const char* name,
                                                      const size_t* indices,
                                                      const size_t* offsets,
                                                      size_t generator_count);
CONDEXP_API size_t cx_problem_outcome_count(const cx_problem* problem);
CONDEXP_API size_t cx_problem_atom_count(const cx_problem* problem, const char* sigma);
CONDEXP_API cx_status cx_problem_save(const cx_problem* problem, const char* path);
CONDEXP_API void cx_problem_free(cx_problem* problem);

/* Direct computation: writes E(variable | sigma) per outcome into xi, which
 * must hold cx_problem_outcome_count() values. */
CONDEXP_API cx_status cx_conditional_expectation(const cx_problem* problem,
                                                 const char* variable, const char* sigma,
                                                 cx_method method, double* xi, size_t count);

/* Commands -------------------------------------------------------------- */

CONDEXP_API cx_status cx_solve(const cx_problem* problem, const cx_solve_options* options,
                               cx_report** out);
CONDEXP_API cx_status cx_verify(const cx_problem* problem, const cx_verify_options* options,
                                cx_report** out);
CONDEXP_API cx_status cx_check_derivatives(const cx_problem* problem,
                                           const cx_derivative_options* options,
                                           cx_report** out);
CONDEXP_API cx_status cx_density(const cx_problem* problem, const cx_density_options* options,
                                 cx_report** out);

/* CX_OK, CX_ERR_NOT_CONVERGED or CX_ERR_VERIFICATION_FAILED. */
CONDEXP_API cx_status cx_report_status(const cx_report* report);
CONDEXP_API const char* cx_report_json(const cx_report* report);
CONDEXP_API const char* cx_report_text(const cx_report* report);
CONDEXP_API cx_status cx_report_save(const cx_report* report, const char* path);
CONDEXP_API void cx_report_free(cx_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CONDEXP_CONDEXP_H */

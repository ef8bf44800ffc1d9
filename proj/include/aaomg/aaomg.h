/* C interface to the all-at-once multigrid solver. */
#ifndef AAOMG_H
#define AAOMG_H

#include <stddef.h>
#include <stdint.h>

#if defined(AAOMG_BUILDING_LIBRARY)
#define AAOMG_API __attribute__((visibility("default")))
#else
#define AAOMG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aaomg_status {
  AAOMG_OK = 0,
  AAOMG_INVALID_ARGUMENT = 1,
  AAOMG_DIMENSION_MISMATCH = 2,
  AAOMG_SINGULAR = 3,
  AAOMG_IO_ERROR = 4,
  AAOMG_BUFFER_TOO_SMALL = 5,
  AAOMG_INTERNAL_ERROR = 6
} aaomg_status;

typedef enum aaomg_problem {
  AAOMG_POISSON = 0,
  AAOMG_STOKES = 1
} aaomg_problem;

typedef enum aaomg_smoother {
  AAOMG_NORMAL = 0,
  AAOMG_LSGS = 1,
  AAOMG_SLSGS = 2,
  AAOMG_CGS = 3,
  AAOMG_VANKA = 4
} aaomg_smoother;

typedef enum aaomg_cycle {
  AAOMG_V_CYCLE = 0,
  AAOMG_W_CYCLE = 1
} aaomg_cycle;

/* Meshes, systems and transfers for levels k_min..k_max. */
typedef struct aaomg_hierarchy aaomg_hierarchy;

typedef struct aaomg_solve_options {
  aaomg_smoother smoother;
  aaomg_cycle cycle;
  int nu_pre;
  int nu_post;
  double damping; /* ignored by the Gauss-Seidel smoothers */
  int coarsest_level;
  int max_iterations;
  double tolerance;
  uint64_t seed;
} aaomg_solve_options;

typedef struct aaomg_solve_result {
  int iterations;
  int converged;
  int diverged;
  double wall_seconds;
  double initial_norm;
  double final_norm;
} aaomg_solve_result;

typedef struct aaomg_stability {
  double lower;
  double upper;
} aaomg_stability;

typedef struct aaomg_lemma1 {
  int passed;
  int first_violation;
  double c_bar;
  int nnz;
  double inverse_inequality_delta;
  double min_margin;
} aaomg_lemma1;

AAOMG_API char const *aaomg_version(void);
AAOMG_API char const *aaomg_status_string(aaomg_status status);
/* Message of the most recent failure on the calling thread. */
AAOMG_API char const *aaomg_last_error(void);

AAOMG_API char const *aaomg_smoother_name(aaomg_smoother smoother);
AAOMG_API aaomg_status aaomg_parse_smoother(char const *name,
                                            aaomg_smoother *out);
/* 1 if the smoother is defined for the problem (CGS: Poisson, Vanka: Stokes). */
AAOMG_API int aaomg_smoother_applicable(aaomg_smoother smoother,
                                        aaomg_problem problem);

AAOMG_API aaomg_status aaomg_hierarchy_create(aaomg_problem problem,
                                              int k_min, int k_max,
                                              double alpha,
                                              aaomg_hierarchy **out);
AAOMG_API void aaomg_hierarchy_destroy(aaomg_hierarchy *h);
/* Number of unknowns on level k. */
AAOMG_API aaomg_status aaomg_hierarchy_dimension(aaomg_hierarchy const *h,
                                                 int k, int64_t *out);

/* Reference settings for a smoother on the hierarchy's problem. */
AAOMG_API aaomg_status aaomg_solve_options_default(aaomg_smoother smoother,
                                                   aaomg_problem problem,
                                                   aaomg_solve_options *out);

/* Homogeneous solve from the seeded random start on level k. history may be
   NULL; otherwise up to history_capacity norms are written, starting with the
   initial one, and *history_length receives the full count. */
AAOMG_API aaomg_status aaomg_solve(aaomg_hierarchy const *h, int k,
                                   aaomg_solve_options const *options,
                                   aaomg_solve_result *result, double *history,
                                   size_t history_capacity,
                                   size_t *history_length);

/* Dense analysis on level k of a hierarchy. */
AAOMG_API aaomg_status aaomg_stability_constants(aaomg_hierarchy const *h,
                                                 int k, aaomg_stability *out);
/* eta(nu) for nu = 1..nu_max into eta (length nu_max); bound may be NULL. */
AAOMG_API aaomg_status aaomg_smoothing_curve(aaomg_hierarchy const *h, int k,
                                             aaomg_smoother smoother,
                                             double damping, int nu_max,
                                             double *eta, double *bound,
                                             double *c_bar);
AAOMG_API aaomg_status aaomg_lemma1_check(aaomg_hierarchy const *h, int k,
                                          int nu_max, aaomg_lemma1 *out);
AAOMG_API aaomg_status aaomg_normal_equation_radius(aaomg_hierarchy const *h,
                                                    int k, double tau,
                                                    double *out);

/* MatrixMarket dump of the system matrix and plain-text mesh dump. */
AAOMG_API aaomg_status aaomg_write_matrix(aaomg_hierarchy const *h, int k,
                                          char const *path);
AAOMG_API aaomg_status aaomg_write_mesh(aaomg_hierarchy const *h, int k,
                                        char const *path);

#ifdef __cplusplus
}
#endif

#endif

#ifndef DDGEO_DDGEO_H
#define DDGEO_DDGEO_H

/*
 * C interface to the data-driven geometric control library.
 *
 * All objects are opaque handles created by ddgeo_*_create / ddgeo_*_load /
 * computing functions and released with the matching ddgeo_*_free. Every
 * fallible call returns a ddgeo_status; on failure the output arguments are
 * left untouched and ddgeo_last_error() describes the problem (per thread).
 *
 * Matrices cross the boundary as row-major double arrays.
 * Strings returned through char** are owned by the caller; release them with
 * ddgeo_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DDGEO_BUILDING_LIBRARY)
#    define DDGEO_API __declspec(dllexport)
#  else
#    define DDGEO_API __declspec(dllimport)
#  endif
#else
#  define DDGEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddgeo_status {
    DDGEO_OK = 0,
    DDGEO_INVALID_ARGUMENT = 1,
    DDGEO_DIMENSION_MISMATCH = 2,
    DDGEO_NOT_PERSISTENTLY_EXCITING = 3,
    DDGEO_HORIZON_TOO_SHORT = 4,
    DDGEO_NOT_CONTROLLED_INVARIANT = 5,
    DDGEO_TRAJECTORY_NOT_INFORMATIVE = 6,
    DDGEO_RESIDUAL_EXCEEDS_TOLERANCE = 7,
    DDGEO_DEGENERATE_SYSTEM = 8,
    DDGEO_BLOCK_TRIANGULARIZATION_FAILED = 9,
    DDGEO_NO_STEALTHY_ATTACK = 10,
    DDGEO_IO_ERROR = 11,
    DDGEO_PARSE_ERROR = 12,
    DDGEO_INTERNAL_ERROR = 99
} ddgeo_status;

typedef struct ddgeo_tolerances {
    double rank_rel;     /* relative SVD cutoff for rank and kernels */
    double subspace_eq;  /* max principal angle (rad) for subspace equality */
    double residual_abs; /* absolute residual bound */
} ddgeo_tolerances;

typedef enum ddgeo_subspace_kind {
    DDGEO_VSTAR = 0, /* largest controlled invariant in Ker C */
    DDGEO_SSTAR = 1, /* smallest conditioned invariant containing Im B */
    DDGEO_RSTAR = 2  /* V* ∩ S* */
} ddgeo_subspace_kind;

typedef struct ddgeo_system ddgeo_system;
typedef struct ddgeo_data ddgeo_data;
typedef struct ddgeo_subspace ddgeo_subspace;
typedef struct ddgeo_trajectory ddgeo_trajectory;
typedef struct ddgeo_attack_plan ddgeo_attack_plan;
typedef struct ddgeo_attack_outcome ddgeo_attack_outcome;

/* misc */
DDGEO_API const char* ddgeo_version(void);
DDGEO_API const char* ddgeo_last_error(void);
DDGEO_API const char* ddgeo_status_name(ddgeo_status status);
DDGEO_API void ddgeo_string_free(char* s);
DDGEO_API ddgeo_tolerances ddgeo_default_tolerances(void);

/* systems (ground truth; only the model oracle and simulators use them) */
DDGEO_API ddgeo_status ddgeo_system_create(size_t n, size_t m, size_t p, const double* a, const double* b,
                                           const double* c, ddgeo_system** out);
DDGEO_API ddgeo_status ddgeo_system_consensus(ddgeo_system** out);
DDGEO_API ddgeo_status ddgeo_system_random(size_t n, size_t m, size_t p, uint64_t seed, ddgeo_system** out);
/* Strictly proper SISO realization with the given real zeros and poles. */
DDGEO_API ddgeo_status ddgeo_system_siso(const double* zeros, size_t zero_count, const double* poles,
                                         size_t pole_count, ddgeo_system** out);
DDGEO_API ddgeo_status ddgeo_system_load(const char* dir, ddgeo_system** out);
DDGEO_API ddgeo_status ddgeo_system_save(const ddgeo_system* sys, const char* dir);
DDGEO_API ddgeo_status ddgeo_system_dims(const ddgeo_system* sys, size_t* n, size_t* m, size_t* p);
DDGEO_API void ddgeo_system_free(ddgeo_system* sys);

/* experiment data; horizon/experiments of 0 select the defaults T = n, N = n + mT + 2n */
DDGEO_API ddgeo_status ddgeo_collect(const ddgeo_system* sys, size_t horizon, size_t experiments, uint64_t seed,
                                     const ddgeo_tolerances* tol, ddgeo_data** out);
DDGEO_API ddgeo_status ddgeo_data_load(const char* dir, const ddgeo_tolerances* tol, ddgeo_data** out);
DDGEO_API ddgeo_status ddgeo_data_save(const ddgeo_data* data, const char* dir);
DDGEO_API ddgeo_status ddgeo_data_dims(const ddgeo_data* data, size_t* n, size_t* m, size_t* p, size_t* horizon,
                                       size_t* experiments);
DDGEO_API ddgeo_status ddgeo_data_persistently_exciting(const ddgeo_data* data, const ddgeo_tolerances* tol,
                                                        int* result);
DDGEO_API void ddgeo_data_free(ddgeo_data* data);

/* subspaces */
DDGEO_API ddgeo_status ddgeo_subspace_from_data(const ddgeo_data* data, ddgeo_subspace_kind kind,
                                                const ddgeo_tolerances* tol, ddgeo_subspace** out);
DDGEO_API ddgeo_status ddgeo_subspace_from_model(const ddgeo_system* sys, ddgeo_subspace_kind kind,
                                                 const ddgeo_tolerances* tol, ddgeo_subspace** out);
DDGEO_API ddgeo_status ddgeo_subspace_dims(const ddgeo_subspace* s, size_t* ambient_dim, size_t* dim);
/* basis: ambient_dim x dim, orthonormal columns */
DDGEO_API ddgeo_status ddgeo_subspace_basis(const ddgeo_subspace* s, double* basis);
DDGEO_API ddgeo_status ddgeo_subspace_json(const ddgeo_subspace* s, char** json);
DDGEO_API ddgeo_status ddgeo_principal_angle(const ddgeo_subspace* a, const ddgeo_subspace* b, double* radians);
DDGEO_API void ddgeo_subspace_free(ddgeo_subspace* s);

/* single trajectories */
/* states: n x (T+1), inputs: m x T */
DDGEO_API ddgeo_status ddgeo_trajectory_create(size_t n, size_t m, size_t horizon, const double* states,
                                               const double* inputs, ddgeo_trajectory** out);
DDGEO_API ddgeo_status ddgeo_trajectory_random(const ddgeo_system* sys, size_t horizon, uint64_t seed,
                                               ddgeo_trajectory** out);
DDGEO_API void ddgeo_trajectory_free(ddgeo_trajectory* traj);

/* feedback and zeros */
/* gain: m x n. residual (nullable): ||(I - VV^+) X_1 G V||. */
DDGEO_API ddgeo_status ddgeo_feedback(const ddgeo_trajectory* traj, const ddgeo_subspace* v,
                                      const ddgeo_tolerances* tol, double* gain, double* residual);
/* ||(I - VV^T)(A + BF)V|| for a gain F (m x n). */
DDGEO_API ddgeo_status ddgeo_invariance_residual(const ddgeo_system* sys, const double* gain,
                                                 const ddgeo_subspace* v, double* residual);
/* Largest relative distance from V of a `steps`-step run of A + BF started on V's basis. */
DDGEO_API ddgeo_status ddgeo_closed_loop_drift(const ddgeo_system* sys, const double* gain,
                                               const ddgeo_subspace* v, int steps, double* drift);
/* Zeros are written sorted by (re, im); *count receives the number found. Fails with
   DDGEO_INVALID_ARGUMENT when capacity is too small. */
DDGEO_API ddgeo_status ddgeo_zeros(const ddgeo_trajectory* traj, const ddgeo_subspace* vstar,
                                   const ddgeo_tolerances* tol, double* re, double* im, size_t capacity,
                                   size_t* count);
DDGEO_API ddgeo_status ddgeo_zeros_model(const ddgeo_system* sys, const ddgeo_tolerances* tol, double* re,
                                         double* im, size_t capacity, size_t* count);
DDGEO_API ddgeo_status ddgeo_zero_membership(const ddgeo_data* data, const ddgeo_subspace* vstar, double re,
                                             double im, const ddgeo_tolerances* tol, int* is_zero,
                                             size_t* kernel_dim);

/* stealthy attacks */
DDGEO_API ddgeo_status ddgeo_attack_design(const ddgeo_data* data, const ddgeo_tolerances* tol, double energy,
                                           size_t onset_step, ddgeo_attack_plan** out);
DDGEO_API ddgeo_status ddgeo_attack_plan_info(const ddgeo_attack_plan* plan, size_t* horizon, size_t* m,
                                              size_t* generator_count, size_t* rstar_dim);
/* attack: m*T stacked u_a(0..T-1) */
DDGEO_API ddgeo_status ddgeo_attack_plan_input(const ddgeo_attack_plan* plan, double* attack);
DDGEO_API void ddgeo_attack_plan_free(ddgeo_attack_plan* plan);
/* Constant nominal input (m) and initial state (n, nullable for zero). */
DDGEO_API ddgeo_status ddgeo_attack_simulate(const ddgeo_system* sys, const ddgeo_attack_plan* plan,
                                             const double* nominal_input, const double* x0, size_t total_steps,
                                             ddgeo_attack_outcome** out);
/* Maxima over the run; rstar_distance is the largest distance of the state deviation from R*. */
DDGEO_API ddgeo_status ddgeo_attack_outcome_summary(const ddgeo_attack_outcome* outcome, double* max_state_deviation,
                                                    double* max_output_deviation, double* rstar_distance);
DDGEO_API ddgeo_status ddgeo_attack_detect(const ddgeo_attack_outcome* outcome, double threshold, int* detected);
DDGEO_API ddgeo_status ddgeo_attack_outcome_csv(const ddgeo_attack_outcome* outcome, char** csv);
DDGEO_API void ddgeo_attack_outcome_free(ddgeo_attack_outcome* outcome);

/* Randomized data-driven vs model agreement suite. report (nullable) receives JSON. */
DDGEO_API ddgeo_status ddgeo_verify(int trials, uint64_t seed, const ddgeo_tolerances* tol, int* failures,
                                    char** report);

#ifdef __cplusplus
}
#endif

#endif

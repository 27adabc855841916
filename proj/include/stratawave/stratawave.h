/* C interface of libstratawave. All objects are opaque handles; every call
 * returns an sw_status and leaves a message for sw_last_error() on failure.
 * Strings handed out by the library are released with sw_free(). */
#ifndef STRATAWAVE_H
#define STRATAWAVE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status {
  SW_OK = 0,
  SW_INVALID_ARGUMENT = 1,
  SW_DOMAIN_ERROR = 2,
  SW_DEGENERATE_BRANCH = 3,
  SW_AMPLITUDE_TOO_LARGE = 4,
  SW_INVALID_PROFILE = 5,
  SW_NUMERICAL_FAILURE = 6,
  SW_NO_CONVERGENCE = 7,
  SW_SETUP_ERROR = 8,
  SW_DEGENERATE_INPUT = 9,
  SW_IO_ERROR = 10,
  SW_INTERNAL_ERROR = 99
} sw_status;

typedef enum sw_layer { SW_LOWER = 0, SW_UPPER = 1 } sw_layer;

typedef struct sw_params sw_params;
typedef struct sw_branch sw_branch;
typedef struct sw_field sw_field;
typedef struct sw_flow sw_flow;

typedef struct sw_solver_options {
  int nx;         /* Fourier nodes over one period */
  int ny;         /* Chebyshev nodes per layer */
  double tol;     /* Newton tolerance on sup|Psi| */
  int harmonics;  /* initial truncation of the interface */
} sw_solver_options;

const char* sw_version(void);
const char* sw_status_name(sw_status status);
/* Message of the last failing call on this thread ("" if none). */
const char* sw_last_error(void);
void sw_free(void* p);

/* Fluid parameters: rho, rho_bar, g, sigma, omega, omega_bar, wave_speed. */
sw_status sw_params_create(sw_params** out);
sw_status sw_params_from_json(const char* json, sw_params** out);
sw_status sw_params_to_json(const sw_params* p, char** json);
sw_status sw_params_set(sw_params* p, const char* name, double value);
sw_status sw_params_get(const sw_params* p, const char* name, double* value);
sw_status sw_params_validate(const sw_params* p);
void sw_params_destroy(sw_params* p);

/* Dispersion relation. */
sw_status sw_mu(const sw_params* p, int k, double lambda, double* out);
sw_status sw_bifurcation_points(const sw_params* p, int k, double* lambda1, double* lambda2);
sw_status sw_transversality(const sw_params* p, int k, int i, double* out);
sw_status sw_kernel_is_simple(const sw_params* p, int k, int i, int j_max, int* out);
sw_status sw_sigma_threshold(const sw_params* p, int k_max, double* out);
sw_status sw_dispersion_json(const sw_params* p, int k_max, char** json);

/* Second-order expansion of branch (k, i) at amplitude s. */
sw_status sw_expansion_json(const sw_params* p, int k, int i, double s, char** json);

/* Newton continuation. */
void sw_solver_options_default(sw_solver_options* o);
sw_status sw_branch_trace(const sw_params* p, int k, int i, double s_max, double ds, const sw_solver_options* o,
                          sw_branch** out);
/* A single corrected point at amplitude s, seeded by the expansion. */
sw_status sw_branch_correct(const sw_params* p, int k, int i, double s, const sw_solver_options* o, sw_branch** out);
size_t sw_branch_size(const sw_branch* b);
sw_status sw_branch_point(const sw_branch* b, size_t index, double* s, double* lambda, double* residual);
sw_status sw_branch_coefficients(const sw_branch* b, size_t index, double* out, size_t capacity, size_t* count);
sw_status sw_branch_json(const sw_branch* b, char** json);
sw_status sw_branch_csv(const sw_branch* b, char** csv);
void sw_branch_destroy(sw_branch* b);

/* Stream functions of one layer. lambda may be NULL (use the bifurcation point). */
sw_status sw_field_asymptotic(const sw_params* p, sw_layer layer, int k, int i, double s, const double* lambda,
                              sw_field** out);
sw_status sw_field_elliptic(const sw_params* p, sw_layer layer, const sw_branch* b, size_t index,
                            const sw_solver_options* o, sw_field** out);
/* out = {psi, psi_x, psi_y, psi_xx, psi_xy, psi_yy}; reference or physical coordinates. */
sw_status sw_field_eval(const sw_field* f, double x, double y, int physical, double out[6]);
sw_status sw_field_csv(const sw_field* f, int nx, int ny, int pushforward, char** csv);
sw_status sw_field_velocity(const sw_field* f, int nx, int ny, double* max_divergence, double* tolerance);
void sw_field_destroy(sw_field* f);

/* Stagnation points, critical curves, separatrix and streamlines of a lower-layer field.
 * upper may be NULL; it adds upper-layer streamlines to the picture. */
sw_status sw_flow_analyze(const sw_field* lower, const sw_field* upper, int nx, int ny, int streamlines,
                          sw_flow** out);
sw_status sw_flow_stagnation_count(const sw_flow* f, size_t* n);
sw_status sw_flow_report_json(const sw_flow* f, char** json);
sw_status sw_flow_streamlines_csv(const sw_flow* f, char** csv);
sw_status sw_flow_svg(const sw_flow* f, int width, int height, char** svg);
void sw_flow_destroy(sw_flow* f);

/* Psi(lambda, eta) on nx uniform nodes; eta = sum coeffs[j-1] cos(j k x). */
sw_status sw_psi(const sw_params* p, double lambda, int k, const double* coeffs, size_t n, int nx, int ny,
                 double* out, size_t capacity, size_t* count);

/* Acceptance suite. ids: comma-separated ("AC-1,AC-7") or NULL for all. */
sw_status sw_verify(const char* ids, uint64_t seed, char** json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* STRATAWAVE_H */

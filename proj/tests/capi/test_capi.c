/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "stratawave/stratawave.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

int main(void) {
  sw_params* p = NULL;
  double v = 0.0, l1 = 0.0, l2 = 0.0, m = 0.0;
  char* text = NULL;

  EXPECT(strlen(sw_version()) > 0);
  EXPECT(sw_params_create(&p) == SW_OK);
  EXPECT(sw_params_get(p, "rho", &v) == SW_OK && v == 2.0);
  EXPECT(sw_params_set(p, "omega_bar", 0.0) == SW_OK);
  EXPECT(sw_params_set(p, "viscosity", 1.0) == SW_INVALID_ARGUMENT);
  EXPECT(strlen(sw_last_error()) > 0);
  EXPECT(sw_params_validate(p) == SW_OK);

  EXPECT(sw_mu(p, 1, 0.0, &m) == SW_OK);
  EXPECT(fabs(m + 19.6) < 1e-12);
  EXPECT(sw_bifurcation_points(p, 1, &l1, &l2) == SW_OK);
  EXPECT(fabs(l1 + sqrt(9.8 * tanh(1.0))) < 1e-12);
  EXPECT(fabs(l1 + l2) < 1e-12);
  EXPECT(sw_mu(p, 0, 0.0, &m) == SW_INVALID_ARGUMENT);
  EXPECT(sw_mu(NULL, 1, 0.0, &m) == SW_INVALID_ARGUMENT);

  /* round trip through JSON */
  EXPECT(sw_params_to_json(p, &text) == SW_OK);
  {
    sw_params* q = NULL;
    EXPECT(sw_params_from_json(text, &q) == SW_OK);
    EXPECT(sw_params_get(q, "g", &v) == SW_OK && v == 9.8);
    sw_params_destroy(q);
    EXPECT(sw_params_from_json("{\"rho\": ", &q) != SW_OK);
    EXPECT(q == NULL);
  }
  sw_free(text);

  {
    sw_params* bad = NULL;
    EXPECT(sw_params_create(&bad) == SW_OK);
    EXPECT(sw_params_set(bad, "rho", 0.5) == SW_OK);
    EXPECT(sw_params_validate(bad) != SW_OK);
    sw_params_destroy(bad);
  }

  /* a short branch and a field from its last point */
  {
    sw_solver_options o;
    sw_branch* b = NULL;
    sw_field* f = NULL;
    double s = 0, lambda = 0, residual = 0, out[6];
    size_t n = 0, count = 0;
    double coeffs[64];
    sw_solver_options_default(&o);
    o.nx = 64;
    o.ny = 25;
    o.harmonics = 16;
    EXPECT(sw_branch_trace(p, 1, 1, 0.01, 0.005, &o, &b) == SW_OK);
    n = sw_branch_size(b);
    EXPECT(n >= 2);
    EXPECT(sw_branch_point(b, n - 1, &s, &lambda, &residual) == SW_OK);
    EXPECT(fabs(s - 0.01) < 1e-14 && residual < o.tol);
    EXPECT(sw_branch_point(b, n, &s, &lambda, &residual) == SW_INVALID_ARGUMENT);
    EXPECT(sw_branch_coefficients(b, n - 1, coeffs, 64, &count) == SW_OK);
    EXPECT(count >= 2 && coeffs[0] == -0.01);
    EXPECT(sw_field_elliptic(p, SW_LOWER, b, n - 1, &o, &f) == SW_OK);
    EXPECT(sw_field_eval(f, 0.3, -1.0, 0, out) == SW_OK);
    EXPECT(fabs(out[0] - 0.5) < 1e-12);
    EXPECT(sw_field_csv(f, 8, 5, 1, &text) == SW_OK);
    EXPECT(strncmp(text, "x,y_ref,Y,psi", 13) == 0);
    sw_free(text);
    sw_field_destroy(f);
    sw_branch_destroy(b);
  }

  /* flow analysis of the asymptotic field */
  {
    sw_field* lower = NULL;
    sw_flow* flow = NULL;
    size_t n = 0;
    EXPECT(sw_field_asymptotic(p, SW_LOWER, 1, 1, 0.02, NULL, &lower) == SW_OK);
    EXPECT(sw_flow_analyze(lower, NULL, 128, 64, 2, &flow) == SW_OK);
    EXPECT(sw_flow_stagnation_count(flow, &n) == SW_OK && n == 3);
    EXPECT(sw_flow_svg(flow, 400, 200, &text) == SW_OK);
    EXPECT(strstr(text, "</svg>") != NULL);
    sw_free(text);
    sw_flow_destroy(flow);
    sw_field_destroy(lower);
  }

  EXPECT(sw_verify("AC-99", 1, &text, NULL) == SW_INVALID_ARGUMENT);
  EXPECT(strcmp(sw_status_name(SW_NO_CONVERGENCE), "no-convergence") == 0);

  /* destroy accepts NULL */
  sw_params_destroy(NULL);
  sw_branch_destroy(NULL);
  sw_field_destroy(NULL);
  sw_flow_destroy(NULL);
  sw_free(NULL);
  sw_params_destroy(p);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("C interface: all checks passed\n");
  return failures ? 1 : 0;
}

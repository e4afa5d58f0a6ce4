#include <stdio.h>
#include <string.h>
#include "hypercone.h"

int main(void) {
    HcCone *cone = NULL;
    HcVec *f = NULL;
    double value = 0.0;
    int exact = 0;
    if (hc_cone_uniform(3, &cone) != HC_STATUS_OK) return 10;
    if (hc_vec_from_json("[3, 1, 2]", &f) != HC_STATUS_OK) return 11;
    if (hc_lp_norm(cone, f, "-inf", &value, &exact) != HC_STATUS_OK) return 12;
    if (value != 1.0 || !exact) return 13;
    if (hc_lp_norm(cone, f, "2", &value, NULL) != HC_STATUS_INVALID_INPUT) return 14;
    if (hc_last_error() == NULL) return 15;

    const char *argv[] = {"check-mcp", "--catalog", "c", "--lam", "0", "--eta", "1"};
    char *report = NULL;
    if (hc_command(argv, 7, &report) != HC_STATUS_COUNTEREXAMPLE) return 16;
    if (strstr(report, "\"schema\":1") == NULL) return 17;
    hc_string_free(report);

    hc_vec_free(f);
    hc_cone_free(cone);
    puts("ok");
    return 0;
}

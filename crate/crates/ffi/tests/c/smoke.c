#include <math.h>
#include <stdio.h>
#include <string.h>

#include "dulac.h"

static const char *CASE2 =
    "{\"eigenvalues\":{\"alpha\":\"1\",\"beta\":\"1/2\"},\"centre_dim\":1,"
    "\"jet_order\":2,\"degree\":3,"
    "\"terms\":[{\"component\":\"y\",\"exponents\":[0,0,2],\"coeff\":{\"(0)\":\"1\"}}]}";

int main(void) {
    DulacField *f = NULL;
    DulacSeries *s = NULL;
    double y1, z1, u1[1];

    if (dulac_field_from_json(CASE2, &f) != DULAC_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", dulac_last_error());
        return 1;
    }
    if (dulac_series_new(f, 1, NULL, &s) != DULAC_STATUS_OK) {
        fprintf(stderr, "series: %s\n", dulac_last_error());
        return 1;
    }
    if (dulac_series_centre_dim(s) != 1) {
        return 1;
    }
    if (dulac_series_eval(s, 0.01, 1.0, 1.0, 0.0, 0.0, &y1, &z1, u1, 1) != DULAC_STATUS_OK) {
        fprintf(stderr, "eval: %s\n", dulac_last_error());
        return 1;
    }
    if (fabs(y1 - 0.01 * (1.0 + log(100.0))) > 1e-14 || fabs(z1 - 0.1) > 1e-15) {
        fprintf(stderr, "values %g %g\n", y1, z1);
        return 1;
    }

    char *json = NULL;
    if (dulac_resonances_json("2/x", "1/2", 4, &json) != DULAC_STATUS_PARSE || json != NULL) {
        return 1;
    }
    if (strlen(dulac_last_error()) == 0) {
        return 1;
    }

    dulac_series_free(s);
    dulac_field_free(f);
    printf("ok\n");
    return 0;
}

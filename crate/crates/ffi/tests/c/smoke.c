#include <stdio.h>
#include <string.h>

#include "minlocal.h"

int main(void) {
    MinlocalVerdict *v = NULL;
    if (minlocal_decide("SL", "Q(i)", 8, &v) != MINLOCAL_STATUS_OK) {
        fprintf(stderr, "decide failed: %s\n", minlocal_last_error());
        return 1;
    }
    if (minlocal_verdict_minimal(v) != MINLOCAL_TRI_YES || minlocal_verdict_totally_minimal(v) != MINLOCAL_TRI_NO) {
        return 2;
    }
    char *json = minlocal_verdict_to_json(v);
    printf("%s\n", json);
    minlocal_string_free(json);
    minlocal_verdict_free(v);

    uint64_t order = 0;
    if (minlocal_mu_order("Qp=7", 6, &order) != MINLOCAL_STATUS_OK || order != 6) {
        return 3;
    }
    if (minlocal_mu_order("Q(j)", 6, &order) != MINLOCAL_STATUS_PARSE || minlocal_last_error() == NULL) {
        return 4;
    }
    return 0;
}

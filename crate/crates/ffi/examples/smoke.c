#include <stdio.h>
#include "ergolab.h"

int main(void) {
    ErgolabConfig *cfg = NULL;
    ErgolabResult *res = NULL;
    ErgolabRow row;
    int64_t fl;
    int32_t flag;

    if (ergolab_config_from_json("{\"preset\": \"trivial_ones\"}", &cfg) != ERGOLAB_STATUS_OK) {
        fprintf(stderr, "config: %s\n", ergolab_last_error());
        return 1;
    }
    if (ergolab_config_set(cfg, "schedule.n_max=300") != ERGOLAB_STATUS_OK) return 1;
    if (ergolab_run(cfg, 1, &res) != ERGOLAB_STATUS_OK) {
        fprintf(stderr, "run: %s\n", ergolab_last_error());
        return 1;
    }
    size_t rows = ergolab_result_rows(res);
    if (ergolab_result_row(res, rows - 1, &row) != ERGOLAB_STATUS_OK) return 1;
    printf("N=%llu value=%g\n", (unsigned long long)row.n, row.value_re);

    if (ergolab_floor_pow("2", "1/2", 999999, &fl, &flag) != ERGOLAB_STATUS_OK) return 1;
    printf("floor=%lld flag=%d\n", (long long)fl, flag);
    if (ergolab_floor_pow("2", "5/2", 3, &fl, &flag) != ERGOLAB_STATUS_VALIDATION) return 1;

    ergolab_result_free(res);
    ergolab_config_free(cfg);
    return 0;
}

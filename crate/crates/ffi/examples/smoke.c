#include <stdio.h>
#include "superprolong.h"

int main(void) {
    SpExperiment *h = NULL;
    if (sp_experiment_run(5, 1, SP_MODE_FULL, SP_ROUTE_FULL_G0, &h) != SP_STATUS_OK) {
        fprintf(stderr, "%s\n", sp_last_error());
        return 1;
    }
    size_t even = 0, odd = 0;
    sp_experiment_total(h, &even, &odd);
    printf("%zu|%zu\n", even, odd);
    sp_experiment_free(h);
    return 0;
}

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "cluster_teleport.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    CtChannel *ch = NULL;
    CtInput *in = NULL;
    CtResult *res = NULL;
    double v = 0.0;

    CHECK(ct_channel_new(0.3, 0, 0.4, 0, sqrt(0.5), 0, 0.5, 0, &ch) == CT_ERROR_OK);
    CHECK(ct_input_new(0.6, 0, 0.8, 0, &in) == CT_ERROR_OK);
    CHECK(ct_success_probability(ch, &v) == CT_ERROR_OK);
    CHECK(fabs(v - 0.5) < 1e-12);

    int failures = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        CHECK(ct_proposed_teleport(in, ch, seed, &res) == CT_ERROR_OK);
        CtStatus st;
        CHECK(ct_result_status(res, &st) == CT_ERROR_OK);
        if (st == CT_STATUS_FAIL_RECOVERABLE) {
            CHECK(ct_result_sender_fidelity(res, &v) == CT_ERROR_OK);
            CHECK(fabs(v - 1.0) < 1e-9);
            ++failures;
        } else {
            CHECK(ct_result_target_fidelity(res, &v) == CT_ERROR_OK);
            CHECK(fabs(v - 1.0) < 1e-9);
        }
        char *json = ct_result_transcript_json(res);
        CHECK(json != NULL && json[0] == '[');
        ct_string_free(json);
        ct_result_free(res);
    }
    CHECK(failures > 0);

    CHECK(ct_ramirez_teleport(in, ch, 1.0, 0, &res) == CT_ERROR_POVM_NOT_PSD);
    CHECK(strstr(ct_last_error_message(), "positive semidefinite") != NULL);

    CHECK(ct_geometric_success(0.5, 2, &v) == CT_ERROR_OK && v == 0.75);
    CHECK(ct_geometric_success(1.5, 2, &v) == CT_ERROR_INVALID_ARGUMENT);

    ct_input_free(in);
    ct_channel_free(ch);
    puts("ok");
    return 0;
}

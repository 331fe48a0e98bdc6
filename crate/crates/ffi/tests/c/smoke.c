#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "quasiheat.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        enum QhStatus s_ = (call);                                         \
        if (s_ != QhStatus_Ok) {                                           \
            char msg_[256];                                                \
            qh_last_error_message(msg_, sizeof msg_);                      \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_, msg_);       \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    QhParams *params = NULL;
    CHECK(qh_params_new(1.0, 0.001, &params));

    double d_eff = -1.0;
    CHECK(qh_effective_diffusivity(params, 0.0, &d_eff));

    QhProfile *profile = NULL;
    CHECK(qh_similarity_solve(params, 1.0, -1.0, 5.0, 0.0, 0.0, &profile));
    double z0 = 0.0, v1 = 0.0;
    CHECK(qh_profile_front(profile, &z0));
    CHECK(qh_profile_front_velocity(profile, 1.0, &v1));

    double times[2] = {0.05, 0.1};
    QhReport *report = NULL;
    CHECK(qh_pde_solve(params, QH_MODEL_QUASILINEAR, 1.0, 2.0, 0.02, 0.1, times, 2, &report));
    size_t snapshots = 0, nodes = 0;
    CHECK(qh_report_shape(report, &snapshots, &nodes));
    double *values = malloc(nodes * sizeof *values);
    double t = 0.0;
    CHECK(qh_report_snapshot(report, 1, &t, values, nodes));

    QhParams *bad = NULL;
    enum QhStatus status = qh_params_new(1.0, -1.0, &bad);

    printf("d_eff0=%g z0=%.6f v1=%.6f snapshots=%zu nodes=%zu t=%g T0=%.12f bad=%d\n", d_eff, z0, v1,
           snapshots, nodes, t, values[0], (int)status);

    free(values);
    qh_report_free(report);
    qh_profile_free(profile);
    qh_params_free(params);
    return 0;
}

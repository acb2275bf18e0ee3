#include <math.h>
#include <stdio.h>
#include "hpdns.h"

/* Binomial check: su(2), M = 1, r = pi/4 splits the photon evenly. */
int main(void) {
    HpdnsParams *p = NULL;
    if (hpdns_params_new(HPDNS_ALGEBRA_SU2, 1, 0, 0.7853981633974483, 0.0, &p) != HPDNS_STATUS_OK)
        return 1;
    HpdnsDistribution *d = NULL;
    if (hpdns_distribution_new(p, &d) != HPDNS_STATUS_OK)
        return 2;
    double probs[2];
    size_t written = 0;
    if (hpdns_distribution_copy(d, probs, 2, &written) != HPDNS_STATUS_OK || written != 2)
        return 3;
    if (fabs(probs[0] - 0.5) > 1e-12 || fabs(probs[1] - 0.5) > 1e-12)
        return 4;
    hpdns_distribution_free(d);
    hpdns_params_free(p);

    HpdnsParams *bad = NULL;
    if (hpdns_params_new(HPDNS_ALGEBRA_SU2, 3, 5, 0.1, 0.0, &bad) != HPDNS_STATUS_DOMAIN || bad)
        return 5;
    printf("%s\n", hpdns_last_error());
    return 0;
}

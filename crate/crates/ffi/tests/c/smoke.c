#include <math.h>
#include <stdio.h>
#include "geohamilton.h"

int main(void) {
    const double tri[] = {0.0, 0.0, 0.3, 0.0, 0.3, 0.4};
    GhPointSet *pts = NULL;
    if (gh_points_new(tri, 3, 2, 2.0, &pts) != GH_STATUS_OK) return 1;
    GhHittingRadii r;
    if (gh_hitting_radii(pts, 1, &r) != GH_STATUS_OK) return 2;
    if (fabs(r.hamiltonian - 0.5) > 1e-12) return 3;
    gh_points_free(pts);
    if (gh_points_new(tri, 3, 2, 0.5, &pts) != GH_STATUS_INVALID_ARGUMENT) return 4;
    if (gh_last_error_message() == NULL) return 5;
    printf("ok %s\n", gh_version());
    return 0;
}

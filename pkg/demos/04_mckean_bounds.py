#!/usr/bin/env python3
#
# Desc.: On the hyperbolic plane, lambda_1 of geodesic disks decreases to the
#        fundamental tone 1/4.  Compare with the closed-form lower bounds.
#
from eigenmoment import bessa_montenegro_bound, cheung_leung_bound, mckean_bound, space_form_bounds

print(f"{'R':>4} {'mckean':>8} {'cheung':>8} {'bessa':>8} {'lambda_lo':>10} {'lambda_hi':>10}")
for R in range(1, 16, 2):
    rep = space_form_bounds(-1.0, 2, float(R))
    est = rep.lambda_estimate
    print(
        f"{R:4d} {rep.mckean:8.4f} {rep.cheung_leung:8.4f} {rep.bessa_montenegro:8.4f} "
        f"{est.lower:10.6f} {est.upper:10.6f}"
    )

print("\nlimits as R -> inf:", mckean_bound(2, -1.0), cheung_leung_bound(2, -1.0, 0.0, float("inf")))
print("flat 3-ball, R=1:", bessa_montenegro_bound(3, 0.0, 1.0))
# a mean curvature bound can make the hypothesis fail
print("m=2, b=0, R=1, h=1:", cheung_leung_bound(2, 0.0, 1.0, 1.0))

#!/usr/bin/env python3
#
# Desc.: The first exit-time moment A_1 is the torsional rigidity.  It gives a
#        crude bracket on lambda_1 before any iteration happens.
#
import math

from eigenmoment import ModelSpace, lambda1_sandwich, space_form_warping, torsional_bounds, torsional_rigidity

for m, exact in ((2, math.pi / 8), (3, 4 * math.pi / 45)):
    ball = ModelSpace(m, space_form_warping(0.0), 1.0)
    a1 = torsional_rigidity(ball)
    lo, hi = torsional_bounds(ball)
    est = lambda1_sandwich(ball)
    print(f"m={m}: A_1 = {a1:.12f} (closed form {exact:.12f})")
    print(f"      {lo:.4f} <= [{est.lower:.6f}, {est.upper:.6f}] <= {hi:.4f}")

# on hyperbolic balls the bracket tightens relative to the radius
print()
for R in (0.5, 1.0, 2.0, 4.0):
    ball = ModelSpace(2, space_form_warping(-1.0), R)
    lo, hi = torsional_bounds(ball)
    print(f"hyperbolic disk R={R}: torsion bracket [{lo:.4f}, {hi:.4f}], A_1 = {torsional_rigidity(ball):.6f}")

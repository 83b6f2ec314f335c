#!/usr/bin/env python3
#
# Desc.: Read lambda_1 off the growth rate of the moment spectrum, and see the
#        factor 2 between the two Laplacian normalizations.
#
import math

from eigenmoment import ModelSpace, build_hierarchy, lambda1_growth, lambda1_sandwich, reconcile, space_form_warping
from eigenmoment.growth import ANALYST, root_estimate, ratio_estimate

cases = {
    "unit 3-ball": ModelSpace(3, space_form_warping(0.0), 1.0),
    "unit disk": ModelSpace(2, space_form_warping(0.0), 1.0),
    "hemisphere": ModelSpace(2, space_form_warping(1.0), math.pi / 2),
}

for name, space in cases.items():
    hier = build_hierarchy(space, 200)
    rep = reconcile(hier, lambda1_sandwich(space))
    print(f"{name}: sandwich {rep.midpoint:.6f}, ratio {rep.probabilist.ratio_estimate:.6f}, "
          f"root {rep.probabilist.root_estimate:.6f}, verbatim/midpoint {rep.analyst_factor:.4f}")

# the root form converges slowly, like log(n)/n
hier = build_hierarchy(cases["unit disk"], 200)
for n in (10, 50, 100, 200):
    print(f"n={n:3d}  ratio {ratio_estimate(hier, n):.8f}  root {root_estimate(hier, n):.8f}")
print("verbatim normalization:", lambda1_growth(hier, ANALYST))

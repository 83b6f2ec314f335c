#!/usr/bin/env python3
#
# Desc.: Build isoperimetric comparison spaces from bounding data (g, h) and
#        test the balance condition that the eigenvalue comparisons rely on.
#
import numpy as np

from eigenmoment import (
    BoundingFunctions,
    ComparisonSpaceSpec,
    balance_check,
    build_comparison_space,
    space_form_warping,
    transplanted_convexity_check,
)
from eigenmoment.comparison import RadialFunction, constant

hyp = space_form_warping(-1.0)

# with g = 1 and h = 0 nothing changes: W(s(r)) = w(r)
spec = ComparisonSpaceSpec(hyp, BoundingFunctions(constant(1.0), constant(0.0)), 3, 5.0)
res = build_comparison_space(spec)
r = res.grid.nodes
print("g=1, h=0:  sup|W(s) - w| =", np.max(np.abs(res.W_on_base_grid() - hyp.eval(r))))
print("           balanced:", balance_check(res, spec).balanced)

# a mean curvature bound h bends the warping: (m-1) eta_W = (m-1) eta_w - m h
spec = ComparisonSpaceSpec(hyp, BoundingFunctions(constant(1.0), constant(0.1)), 3, 2.0)
res = build_comparison_space(spec)
W = res.W_model.warping
x = np.array([0.5, 1.0, 1.5])
print("\ng=1, h=0.1: 2 eta_W       ", 2 * W.deriv(x) / W.eval(x))
print("            2 coth - 0.3   ", 2 / np.tanh(x) - 0.3)
report = balance_check(res, spec)
print(f"            balanced: {report.balanced} (worst margin {report.worst_margin:.2e} at r={report.worst_radius:.3f})")
print("           ", transplanted_convexity_check(res, spec).diagnostic)

# a tangency bound g < 1 stretches the radius
g = RadialFunction(lambda t: 1 / (1 + np.asarray(t)), lambda t: -1 / (1 + np.asarray(t)) ** 2)
spec = ComparisonSpaceSpec(hyp, BoundingFunctions(g, constant(0.0)), 3, 1.0)
res = build_comparison_space(spec)
print(f"\ng=1/(1+r):  s(1) = {res.stretched_radius:.10f}")

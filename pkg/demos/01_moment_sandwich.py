#!/usr/bin/env python3
#
# Desc.: Watch the lower and upper moment quotients close in on the first
#        Dirichlet eigenvalue of the unit 3-ball (exact value pi^2).
#
import math

from eigenmoment import ModelSpace, build_hierarchy, lambda1_sandwich, space_form_warping

ball = ModelSpace(3, space_form_warping(0.0), 1.0)

# every step of the hierarchy gives a bracket rho_k <= lambda_1 <= sigma_k
hier = build_hierarchy(ball, k_max=12)
print(f"{'k':>3} {'rho_k':>14} {'sigma_k':>14} {'width':>10}")
for k, rho, sigma, _ in hier.rows():
    print(f"{k:3d} {rho:14.10f} {sigma:14.10f} {(sigma - rho) / rho:10.2e}")

est = lambda1_sandwich(ball, tol=1e-8)
print(f"\nstopped at k={est.iterations}: [{est.lower:.12f}, {est.upper:.12f}]")
print(f"pi^2                      {math.pi**2:.12f}")
print(f"eigenfunction residual    {est.residual_norm:.2e}")

# the normalized iterate g_k approaches sin(pi r) / (pi r)
for r in (0.25, 0.5, 0.75):
    print(f"g({r}) = {est.eigenfunction(r):.8f}   exact {math.sin(math.pi * r) / (math.pi * r):.8f}")

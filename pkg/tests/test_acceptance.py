"""Acceptance criteria 1-11, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eigenmoment.bounds import bessa_montenegro_bound, cheung_leung_bound, intrinsic_ordering_check
from eigenmoment.comparison import (
    BoundingFunctions,
    ComparisonSpaceSpec,
    balance_check,
    build_comparison_space,
    constant,
    spec_from_dict,
    transplanted_convexity_check,
)
from eigenmoment.cli import PRESETS
from eigenmoment.errors import MonotonicityViolation
from eigenmoment.growth import ANALYST, PROBABILIST, lambda1_growth
from eigenmoment.moments import (
    build_hierarchy,
    check_sandwich,
    eigen_residual,
    lambda1_sandwich,
    torsional_bounds,
    torsional_rigidity,
)
from eigenmoment.warping import ModelSpace, space_form_warping
from oracles import richardson_eigenvalue

N = 4097
TOL = 1e-4
RESULTS = {}

BALL = (0.0, 3, 1.0)
DISK = (0.0, 2, 1.0)
HEMISPHERE = (1.0, 2, math.pi / 2)


def model(b, m, R):
    return ModelSpace(m, space_form_warping(b), R)


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS[number] = line
    print(line)
    return ok


def criterion_1():
    start = time.perf_counter()
    est = lambda1_sandwich(model(*BALL), tol=1e-3, k_max=100, N=N)
    elapsed = time.perf_counter() - start
    grid = est.eigenfunction.grid
    r = grid.nodes
    exact = grid.samples(np.where(r > 0, np.sin(math.pi * r) / np.where(r > 0, math.pi * r, 1.0), 1.0))
    residual = eigen_residual(model(*BALL), math.pi**2, exact)
    ok = (
        est.lower <= math.pi**2 <= est.upper
        and est.relative_width <= 1e-3
        and est.iterations <= 100
        and elapsed <= 10.0
        and residual <= 1e-6
    )
    return record(
        1,
        ok,
        f"3-ball [{est.lower:.8f}, {est.upper:.8f}] vs pi^2={math.pi**2:.8f}, width {est.relative_width:.2e}, "
        f"k={est.iterations}, {elapsed:.2f}s, exact-mode residual {residual:.2e}",
    )


def criterion_2():
    est = lambda1_sandwich(model(*DISK), TOL, N=N)
    ref = richardson_eigenvalue(lambda r: r, 2, 1.0)
    gap = abs(est.midpoint - ref) / ref
    return record(2, gap <= 1e-3, f"disk midpoint {est.midpoint:.8f} vs finite-difference {ref:.8f}, rel gap {gap:.2e}")


def criterion_3():
    space = model(*HEMISPHERE)
    est = lambda1_sandwich(space, TOL, N=N)
    residual = eigen_residual(space, 2.0, space.grid(N).sample(np.cos))
    ok = est.contains(2.0, rel=1e-3) and abs(est.midpoint - 2) / 2 <= 1e-3 and residual <= 1e-6
    return record(3, ok, f"hemisphere [{est.lower:.10f}, {est.upper:.10f}], cos r residual {residual:.2e}")


def criterion_4():
    a1 = torsional_rigidity(model(*DISK), N=N)
    rel = abs(a1 - math.pi / 8) / (math.pi / 8)
    ok = rel <= 1e-6
    parts = [f"A1(disk) rel err {rel:.2e}"]
    for params, (lo_ref, hi_ref) in ((DISK, (4, 8)), (BALL, (6, 15))):
        lo, hi = torsional_bounds(model(*params), N=N)
        est = lambda1_sandwich(model(*params), TOL, N=N)
        ok = ok and lo <= est.lower and est.upper <= hi
        ok = ok and math.isclose(lo, lo_ref, rel_tol=1e-9) and math.isclose(hi, hi_ref, rel_tol=1e-9)
        parts.append(f"m={params[1]}: {lo:.6f} <= [{est.lower:.4f}, {est.upper:.4f}] <= {hi:.6f}")
    return record(4, ok, "; ".join(parts))


def criterion_5():
    violations, cases = 0, 0
    for b in (-1.0, 0.0, 1.0):
        for m in (2, 3, 5):
            for R in (0.5, 1.0, 2.0):
                hier = build_hierarchy(model(b, m, R), 60, N=N)
                cases += 1
                for k in range(1, 61):
                    try:
                        check_sandwich(hier.lower_quotients, hier.upper_quotients, k)
                    except MonotonicityViolation:
                        violations += 1
    return record(5, violations == 0, f"{cases} spaces x 60 steps, {violations} monotonicity violations")


def criterion_6():
    ok = True
    worst_bound_gap = -math.inf
    lows = []
    for R in range(1, 16):
        est = lambda1_sandwich(model(-1.0, 2, float(R)), TOL, N=N)
        lows.append(est.lower)
        ok = ok and est.lower >= 0.25
        for bound in (cheung_leung_bound(2, -1.0, 0.0, R), bessa_montenegro_bound(2, -1.0, R)):
            worst_bound_gap = max(worst_bound_gap, bound - est.upper)
            ok = ok and bound <= est.upper
    ok = ok and est.upper <= 0.30
    return record(
        6,
        ok,
        f"min lower {min(lows):.6f} >= 0.25, lambda(B_15) upper {est.upper:.6f} <= 0.30, "
        f"max(bound - upper) {worst_bound_gap:.3e} <= 0",
    )


def criterion_7():
    sup = 0.0
    for b, R in ((-1.0, 2.0), (0.0, 2.0), (1.0, 2.0)):
        spec = ComparisonSpaceSpec(space_form_warping(b), BoundingFunctions(constant(1.0), constant(0.0)), 3, R)
        res = build_comparison_space(spec, N)
        r = res.grid.nodes
        sup = max(sup, float(np.max(np.abs(res.W_on_base_grid() - space_form_warping(b).eval(r)))))
    m, c = 3, 0.1
    spec = ComparisonSpaceSpec(space_form_warping(-1.0), BoundingFunctions(constant(1.0), constant(c)), m, 2.0)
    res = build_comparison_space(spec, N)
    r = res.grid.nodes[1:-1]
    W = res.W_model.warping
    ident = float(np.max(np.abs((m - 1) * W.deriv(r) / W.eval(r) - ((m - 1) / np.tanh(r) - m * c))))
    return record(7, sup <= 1e-8 and ident <= 1e-6, f"sup|W o s - w| = {sup:.2e}, identity error {ident:.2e}")


def criterion_8():
    balanced = []
    for name in ("hyperbolic", "hyperbolic-plane"):
        spec = spec_from_dict(PRESETS[name])
        balanced.append(balance_check(build_comparison_space(spec, N), spec).balanced)
    spec = spec_from_dict(PRESETS["theorem-b"])
    res = build_comparison_space(spec, N)
    conv = transplanted_convexity_check(res, spec, k_small=10)
    ok = all(balanced) and conv.holds and not conv.skipped
    detail = conv.diagnostic if conv.skipped else f"worst f''-eta f' = {min(conv.worst_values):.3e}"
    return record(8, ok, f"hyperbolic presets balanced={balanced}; convexity on h=0.1 spec: holds={conv.holds} ({detail})")


def criterion_9():
    ok = True
    parts = []
    for name, params in (("ball", BALL), ("disk", DISK), ("hemisphere", HEMISPHERE)):
        est = lambda1_sandwich(model(*params), TOL, N=N)
        hier = build_hierarchy(model(*params), 200, N=N)
        prob = lambda1_growth(hier, PROBABILIST)
        anal = lambda1_growth(hier, ANALYST)
        mid = est.midpoint
        gaps = [abs(prob.ratio_estimate - mid) / mid, abs(prob.root_estimate - mid) / mid]
        twice = [abs(anal.ratio_estimate - 2 * mid) / (2 * mid), abs(anal.root_estimate - 2 * mid) / (2 * mid)]
        ok = ok and max(gaps) <= 1e-2 and max(twice) <= 1e-2
        parts.append(f"{name} probabilist gap {max(gaps):.2e}, verbatim vs 2x {max(twice):.2e}")
    return record(9, ok, "; ".join(parts))


def criterion_10():
    hyp, flat, cap = (model(b, 2, 1.0) for b in (-1.0, 0.0, 1.0))
    upper = intrinsic_ordering_check(hyp, flat, TOL, N=N)
    lower = intrinsic_ordering_check(flat, cap, TOL, N=N)
    ok = upper.holds and lower.holds and min(upper.margin, lower.margin) > 10 * TOL
    return record(
        10,
        ok,
        f"cap {lower.higher_curvature.midpoint:.5f} <= disk {lower.lower_curvature.midpoint:.5f} "
        f"<= hyperbolic {upper.lower_curvature.midpoint:.5f}, margins {lower.margin:.4f}, {upper.margin:.4f}",
    )


def criterion_11():
    worst = 0.0
    for params in (BALL, DISK, HEMISPHERE):
        a = lambda1_sandwich(model(*params), TOL, N=2049)
        b = lambda1_sandwich(model(*params), TOL, N=4097)
        for x, y in ((a.lower, b.lower), (a.upper, b.upper), (a.midpoint, b.midpoint)):
            worst = max(worst, abs(x - y) / y)
    return record(11, worst <= 1e-5, f"max relative change 2049 -> 4097: {worst:.2e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    passed = sum(bool(c()) for c in CRITERIA)
    print(f"{passed}/{len(CRITERIA)} criteria pass")
    sys.exit(0 if passed == len(CRITERIA) else 1)

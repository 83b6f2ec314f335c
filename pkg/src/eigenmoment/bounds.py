"""Closed-form first-eigenvalue bounds and comparison reports built on the sandwich.

For ``b <= 0`` the quantity ``sqrt(-b) coth(R sqrt(-b))`` is read as ``1/R``
when ``b == 0``; ``R = inf`` is accepted and gives the fundamental-tone limit.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .comparison import (
    BoundingFunctions,
    ComparisonSpaceSpec,
    balance_check,
    build_comparison_space,
    constant,
)
from .errors import InfeasibleHypothesis, NotComparable, PositiveCurvature, PreconditionError
from .moments import (
    DEFAULT_KMAX,
    DEFAULT_NODES,
    DEFAULT_TOL,
    GreenOperator,
    lambda1_sandwich,
    torsional_bounds,
)
from .warping import REG_FRACTION, ModelSpace, curvature_profile, eta, space_form_warping


def _nonpositive(b):
    if b > 0:
        raise PositiveCurvature(f"bound requires curvature b <= 0, got {b}")


def coth_term(b, R):
    """``sqrt(-b) coth(R sqrt(-b))``, read as ``1/R`` for ``b == 0``."""
    _nonpositive(b)
    if b == 0:
        return 1.0 / R
    k = math.sqrt(-b)
    if math.isinf(R):
        return k
    return k / math.tanh(k * R)


def mckean_bound(n, b):
    """``(n-1)^2 |b| / 4``: the fundamental tone floor of a Cartan-Hadamard manifold."""
    _nonpositive(b)
    if n < 2:
        raise PreconditionError("dimension must be at least 2")
    return (n - 1) ** 2 * abs(b) / 4.0


def cheung_leung_bound(m, b, h_sup, R):
    """``((m-1) coth_term - m h_sup)^2 / 4``, or ``None`` when the feasibility condition fails."""
    L = (m - 1) * coth_term(b, R) - m * h_sup
    if L < 0:
        return None
    return 0.25 * L * L


def bessa_montenegro_bound(n, b, R):
    return 0.25 * max(n / R, (n - 1) * coth_term(b, R)) ** 2


def _require_unit_tangency(spec):
    if not spec.bounds.is_unit_tangency:
        r = np.linspace(0.0, spec.radius, 1001)
        if not np.allclose(spec.bounds.g(r), 1.0, rtol=0, atol=1e-12):
            raise PreconditionError("this comparison needs the tangency bound g == 1")


def poincare_constant(spec, N=DEFAULT_NODES):
    """``L_R = (m-1) inf eta_w - m sup h`` over ``[0, R]`` by a grid scan.

    ``eta_w`` diverges at the pole, so its infimum is taken over ``(0, R]``.
    """
    r = np.linspace(0.0, spec.radius, N)
    inf_eta = float(np.min(eta(spec.base_warping, r[1:], REG_FRACTION * spec.radius)))
    sup_h = float(np.max(spec.bounds.h(r)))
    return (spec.dim - 1) * inf_eta - spec.dim * sup_h


def l_r_bound(spec, N=DEFAULT_NODES):
    _require_unit_tangency(spec)
    L = poincare_constant(spec, N)
    if L < 0:
        raise InfeasibleHypothesis(f"(m-1) inf eta_w < m sup h (L_R = {L:.6g})")
    return 0.25 * L * L


@dataclass(frozen=True, eq=False)
class ExtrinsicEstimate:
    """Sandwich estimate on a comparison ball, labelled by the side it bounds."""

    side: str
    estimate: object
    stretched_radius: float
    balance: object
    chained_upper: Optional[float] = None
    l_r_bound: Optional[float] = None
    comparison: object = field(default=None, repr=False)

    def to_dict(self):
        out = {
            "bounds": "upper" if self.side == "upper" else "lower",
            "stretched_radius": self.stretched_radius,
            "balanced": self.balance.balanced,
            **self.estimate.to_dict(),
        }
        if self.chained_upper is not None:
            out["torsional_upper"] = self.chained_upper
        if self.side == "lower":
            out["l_r_bound"] = self.l_r_bound
        return out


def _gate(result, spec, check_balance):
    report = balance_check(result, spec)
    if check_balance and not report.balanced:
        raise InfeasibleHypothesis(
            f"comparison space is not balanced from below "
            f"(worst margin {report.worst_margin:.3g} at r = {report.worst_radius:.4g})"
        )
    return report


def extrinsic_upper(spec, tol=DEFAULT_TOL, k_max=DEFAULT_KMAX, N=DEFAULT_NODES, check_balance=True):
    """Upper bound for extrinsic balls: the first eigenvalue of the ``W`` ball of radius ``s(R)``."""
    result = build_comparison_space(spec, N)
    report = _gate(result, spec, check_balance)
    op = GreenOperator(result.W_model, N=N)
    estimate = lambda1_sandwich(result.W_model, tol, k_max, operator=op)
    _, chained = torsional_bounds(result.W_model, operator=op)
    return ExtrinsicEstimate(
        side="upper",
        estimate=estimate,
        stretched_radius=result.stretched_radius,
        balance=report,
        chained_upper=chained,
        comparison=result,
    )


def extrinsic_lower(spec, tol=DEFAULT_TOL, k_max=DEFAULT_KMAX, N=DEFAULT_NODES, check_balance=True):
    """Lower bound for extrinsic balls from the ``g == 1`` comparison ball of radius ``R``."""
    _require_unit_tangency(spec)
    result = build_comparison_space(spec, N)
    report = _gate(result, spec, check_balance)
    estimate = lambda1_sandwich(result.W_model, tol, k_max, N=N)
    try:
        lr = l_r_bound(spec, N)
    except InfeasibleHypothesis:
        lr = None
    return ExtrinsicEstimate(
        side="lower",
        estimate=estimate,
        stretched_radius=result.stretched_radius,
        balance=report,
        l_r_bound=lr,
        comparison=result,
    )


@dataclass(frozen=True, eq=False)
class OrderingReport:
    lower_curvature: object
    higher_curvature: object
    margin: float
    holds: bool

    def to_dict(self):
        return {
            "lower_curvature_interval": [self.lower_curvature.lower, self.lower_curvature.upper],
            "higher_curvature_interval": [self.higher_curvature.lower, self.higher_curvature.upper],
            "margin": self.margin,
            "holds": self.holds,
        }


def intrinsic_ordering_check(space_lo, space_hi, tol=DEFAULT_TOL, k_max=DEFAULT_KMAX, N=DEFAULT_NODES):
    """Less curvature, larger first eigenvalue.

    ``space_lo`` must have the pointwise smaller radial curvature.  The check
    holds when the bracket of ``space_lo`` does not sit below the bracket of
    ``space_hi``; ``margin`` is ``lower(space_lo) - upper(space_hi)``.
    """
    if space_lo.dim != space_hi.dim or abs(space_lo.radius - space_hi.radius) > 1e-12:
        raise NotComparable("spaces must share dimension and radius")
    r = np.linspace(0.0, space_lo.radius, N)[1:]
    k_lo = curvature_profile(space_lo.warping, r)
    k_hi = curvature_profile(space_hi.warping, r)
    if np.any(k_lo > k_hi + 1e-9 * (1 + np.abs(k_hi))):
        raise NotComparable("radial curvature profiles are not pointwise ordered")
    est_lo = lambda1_sandwich(space_lo, tol, k_max, N=N)
    est_hi = lambda1_sandwich(space_hi, tol, k_max, N=N)
    margin = est_lo.lower - est_hi.upper
    return OrderingReport(
        lower_curvature=est_lo,
        higher_curvature=est_hi,
        margin=margin,
        holds=est_lo.upper >= est_hi.lower,
    )


@dataclass(frozen=True, eq=False)
class BoundsReport:
    mckean: Optional[float]
    cheung_leung: Optional[float]
    bessa_montenegro: Optional[float]
    l_r_bound: Optional[float]
    torsional_lower: float
    torsional_upper: float
    lambda_estimate: object

    def lower_bounds(self):
        names = ("mckean", "cheung_leung", "bessa_montenegro", "l_r_bound", "torsional_lower")
        return {name: getattr(self, name) for name in names}

    def consistent(self):
        upper = self.lambda_estimate.upper
        ok = all(v is None or v <= upper * (1 + 1e-12) for v in self.lower_bounds().values())
        return ok and self.torsional_upper >= self.lambda_estimate.lower * (1 - 1e-12)

    def to_dict(self):
        out = dict(self.lower_bounds())
        out["torsional_upper"] = self.torsional_upper
        out["feasible"] = {
            "cheung_leung": self.cheung_leung is not None,
            "l_r_bound": self.l_r_bound is not None,
        }
        out["sandwich"] = self.lambda_estimate.to_dict()
        out["consistent"] = self.consistent()
        return out


BOUND_NAMES = ("mckean", "cheung_leung", "bessa_montenegro", "l_r_bound", "torsional_lower")


def space_form_bounds(b, m, R, h_sup=0.0, tol=DEFAULT_TOL, k_max=DEFAULT_KMAX, N=DEFAULT_NODES):
    """All bounds for the geodesic ball of radius ``R`` in the space form of curvature ``b``.

    The closed-form bounds need ``b <= 0`` and are ``None`` otherwise.
    """
    space = ModelSpace(m, space_form_warping(b), R)
    op = GreenOperator(space, N=N)
    estimate = lambda1_sandwich(space, tol, k_max, operator=op)
    t_lo, t_hi = torsional_bounds(space, operator=op)
    mck = cl = bm = None
    if b <= 0:
        mck = mckean_bound(m, b)
        cl = cheung_leung_bound(m, b, h_sup, R)
        bm = bessa_montenegro_bound(m, b, R)
    spec = ComparisonSpaceSpec(space.warping, BoundingFunctions(constant(1.0), constant(h_sup)), m, R)
    try:
        lr = l_r_bound(spec, N)
    except InfeasibleHypothesis:
        lr = None
    return BoundsReport(mck, cl, bm, lr, t_lo, t_hi, estimate)

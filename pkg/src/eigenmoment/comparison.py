"""Isoperimetric comparison spaces built from a warping ``w`` and radial bounds ``g``, ``h``.

``g`` bounds the radial tangency from below and ``h`` the radial mean
curvature.  The construction stretches the radial coordinate by
``s(r) = int_0^r dt / g`` and solves for ``Lambda`` in

    (Lambda w g)' = m Lambda (w' - h w) / g,     (Lambda^{1/(m-1)})'(0) = 1,

giving the warping ``W(s) = Lambda(r(s))**(1/(m-1))``.  The equation is
integrated for ``z = ln(Lambda / w**(m-1))``, where the pole singularity
cancels and the boundary condition becomes ``z(0) = 0``:

    z' = m (eta_w - h) / g**2 - m eta_w - (ln g)'.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .errors import InvalidBounds, InvalidWarping, NonSmoothBounds, OdeBlowup
from .moments import DEFAULT_NODES, build_hierarchy
from .quadrature import ProductSimpson, RadialSamples, cumulative_integral, uniform_grid
from .warping import (
    REG_FRACTION,
    ModelSpace,
    WarpingFunction,
    eta,
    validate_warping,
    warping_from_dict,
)

Z_LIMIT = 700.0
ROUNDOFF_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """A radial bound with its derivative; ``deriv`` falls back to centered differences."""

    value: Callable
    deriv: Optional[Callable] = None
    label: str = "custom"
    params: dict = field(default_factory=dict)
    fd_step: float = 1e-6

    def __call__(self, r):
        return np.asarray(self.value(np.asarray(r, dtype=float)), dtype=float) + np.zeros(np.shape(r))

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        if self.deriv is not None:
            return np.asarray(self.deriv(r), dtype=float) + np.zeros(r.shape)
        step = self.fd_step
        lo = np.maximum(r - step, 0.0)
        return (self(r + step) - self(lo)) / (r + step - lo)

    @property
    def is_constant(self):
        return self.label == "constant"


def constant(c):
    c = float(c)
    return RadialFunction(
        value=lambda r: np.full(np.shape(r), c),
        deriv=lambda r: np.zeros(np.shape(r)),
        label="constant",
        params={"value": c},
    )


def tabulated(samples):
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2 or samples.shape[0] < 2:
        raise InvalidBounds("tabulated bound needs a list of [r, value] pairs")
    order = np.argsort(samples[:, 0])
    r, v = samples[order, 0], samples[order, 1]
    spline = PchipInterpolator(r, v, extrapolate=True)
    return RadialFunction(
        value=spline,
        deriv=spline.derivative(),
        label="tabulated",
        params={"samples": samples[order].tolist()},
    )


PRESETS = {"zero": 0.0, "one": 1.0}


def radial_function_from_doc(doc):
    """Accepts a number, a preset name, ``{"kind": "constant", ...}`` or a tabulated document."""
    if isinstance(doc, (int, float)):
        return constant(doc)
    if isinstance(doc, str):
        if doc not in PRESETS:
            raise InvalidBounds(f"unknown preset {doc!r}; expected one of {sorted(PRESETS)}")
        return constant(PRESETS[doc])
    kind = doc.get("kind")
    if kind == "constant":
        return constant(doc["value"])
    if kind == "tabulated":
        return tabulated(doc["samples"])
    if kind in PRESETS:
        return constant(PRESETS[kind])
    raise InvalidBounds(f"unknown bound kind {kind!r}")


def radial_function_to_doc(f):
    if f.label == "constant":
        return {"kind": "constant", "value": f.params["value"]}
    if f.label == "tabulated":
        return {"kind": "tabulated", "samples": f.params["samples"]}
    return {"kind": f.label}


@dataclass(frozen=True, eq=False)
class BoundingFunctions:
    g: RadialFunction
    h: RadialFunction

    def validate(self, R, n=2001):
        r = np.linspace(0.0, R, n)
        gv = self.g(r)
        if abs(gv[0] - 1.0) > 1e-12:
            raise InvalidBounds(f"tangency bound must satisfy g(0) = 1, got {gv[0]}")
        if not np.all((gv > 0) & (gv <= 1 + 1e-12)):
            raise InvalidBounds("tangency bound must lie in (0, 1]")
        if not np.all(np.isfinite(self.h(r))):
            raise InvalidBounds("mean curvature bound is not finite on [0, R]")

    @property
    def is_unit_tangency(self):
        return self.g.is_constant and self.g.params["value"] == 1.0


@dataclass(frozen=True, eq=False)
class ComparisonSpaceSpec:
    base_warping: WarpingFunction
    bounds: BoundingFunctions
    dim: int
    radius: float

    def __post_init__(self):
        report = validate_warping(self.base_warping, self.dim, R=self.radius)
        if not report.valid:
            raise InvalidWarping("; ".join(report.violations))
        # the base model ball must exist on [0, R]
        ModelSpace(self.dim, self.base_warping, self.radius)

    @property
    def base_space(self):
        return ModelSpace(self.dim, self.base_warping, self.radius)

    def to_dict(self):
        from .warping import warping_to_dict

        return {
            "w": warping_to_dict(self.base_warping),
            "g": radial_function_to_doc(self.bounds.g),
            "h": radial_function_to_doc(self.bounds.h),
            "m": self.dim,
            "R": self.radius,
        }


def spec_from_dict(doc):
    try:
        w = warping_from_dict(doc["w"])
        g = radial_function_from_doc(doc.get("g", "one"))
        h = radial_function_from_doc(doc.get("h", "zero"))
        return ComparisonSpaceSpec(w, BoundingFunctions(g, h), int(doc["m"]), float(doc["R"]))
    except KeyError as exc:
        raise InvalidBounds(f"comparison spec is missing field {exc.args[0]!r}") from None


def stretching(bounds, R, N=DEFAULT_NODES):
    """``s(r) = int_0^r dt / g(t)`` on a uniform grid over ``[0, R]``."""
    bounds.validate(R)
    grid = uniform_grid(R, N)
    return cumulative_integral(grid.sample(lambda r: 1.0 / bounds.g(r)))


def _z_prime(spec):
    w, g, h, m = spec.base_warping, spec.bounds.g, spec.bounds.h, spec.dim
    r_eps = REG_FRACTION * spec.radius

    def zp(r):
        r = np.asarray(r, dtype=float)
        gv, dg, hv = g(r), g.derivative(r), h(r)
        small = r < r_eps
        safe = np.where(small, r_eps, r)
        # m eta_w (1 - g^2) / g^2, whose limit at the pole is -2 m g'(0) / g(0)
        stretch = np.where(
            small,
            -2.0 * m * dg / gv,
            m * eta(w, safe, r_eps) * (1.0 - gv**2) / gv**2,
        )
        out = stretch - m * hv / gv**2 - dg / gv
        if not np.all(np.isfinite(out)):
            raise NonSmoothBounds("bound derivatives are not finite")
        return out

    return zp


@dataclass(frozen=True, eq=False)
class ComparisonSpaceResult:
    stretched_radius: float
    W_model: ModelSpace
    lambda_profile: RadialSamples
    stretch: RadialSamples
    log_ratio: RadialSamples
    z_prime: Callable = field(repr=False)

    @property
    def grid(self):
        return self.stretch.grid

    def W_on_base_grid(self):
        """``W(s(r))`` at the base grid nodes."""
        m = self.W_model.dim
        return self.lambda_profile.values ** (1.0 / (m - 1))


def _rk4(f, grid):
    """Classical RK4 for ``y' = f(r)``, ``y(0) = 0`` on the grid nodes."""
    r = grid.nodes
    h = grid.spacing
    k1 = f(r[:-1])
    k23 = f(r[:-1] + h / 2)
    k4 = f(r[1:])
    steps = h / 6 * (k1 + 4 * k23 + k4)
    return np.concatenate([[0.0], np.cumsum(steps)])


def build_comparison_space(spec, N=DEFAULT_NODES):
    bounds, w, m, R = spec.bounds, spec.base_warping, spec.dim, spec.radius
    s = stretching(bounds, R, N)
    grid = s.grid
    r = grid.nodes
    zp = _z_prime(spec)
    z = _rk4(zp, grid)
    if np.any(np.abs(z) > Z_LIMIT):
        raise OdeBlowup("log-ratio of Lambda to w^(m-1) left [-700, 700]")
    zp_nodes = zp(r)
    gvals = bounds.g(r)
    r_of_s = CubicHermiteSpline(s.values, r, gvals)
    z_of_r = CubicHermiteSpline(r, z, zp_nodes)
    s_end = float(s.values[-1])
    p = 1.0 / (m - 1)
    g_of = bounds.g

    def to_r(x):
        return np.clip(r_of_s(np.clip(np.asarray(x, dtype=float), 0.0, s_end)), 0.0, R)

    def W(x):
        rr = to_r(x)
        return w.eval(rr) * np.exp(p * z_of_r(rr))

    def dW(x):
        rr = to_r(x)
        return g_of(rr) * np.exp(p * z_of_r(rr)) * (w.deriv(rr) + p * w.eval(rr) * zp(rr))

    step = 1e-5 * s_end

    def d2W(x):
        x = np.asarray(x, dtype=float)
        lo = np.clip(x - step, 0.0, s_end)
        hi = np.clip(x + step, 0.0, s_end)
        return (dW(hi) - dW(lo)) / (hi - lo)

    Wfun = WarpingFunction(
        eval=W,
        deriv=dW,
        deriv2=d2W,
        domain_end=s_end,
        label="comparison",
    )
    Lam = w.eval(r) ** (m - 1) * np.exp(z)
    if not np.all(Lam[1:] > 0):
        raise OdeBlowup("Lambda is not positive on (0, R]")
    return ComparisonSpaceResult(
        stretched_radius=s_end,
        W_model=ModelSpace(m, Wfun, s_end),
        lambda_profile=RadialSamples(grid, Lam),
        stretch=s,
        log_ratio=RadialSamples(grid, z),
        z_prime=zp,
    )


@dataclass(frozen=True)
class BalanceReport:
    balanced: bool
    positive: bool
    strict: bool
    worst_margin: float
    worst_radius: float
    violating_radii: tuple
    slack: float

    def to_dict(self):
        return {
            "balanced": self.balanced,
            "eta_minus_h_positive": self.positive,
            "strict": self.strict,
            "worst_margin": self.worst_margin,
            "worst_radius": self.worst_radius,
            "violations": len(self.violating_radii),
            "slack": self.slack,
        }


def balance_margins(result, spec):
    """``q_W(s(r)) (eta_w(r) - h(r)) - g(r)/m`` at the base grid nodes (0 at the pole)."""
    w, g, h, m = spec.base_warping, spec.bounds.g, spec.bounds.h, spec.dim
    grid = result.grid
    r = grid.nodes
    z = result.log_ratio.values
    weight = lambda x: w.eval(x) ** (m - 1)
    num = ProductSimpson(grid, weight).cumulative(np.exp(z) / g(r))
    q = np.zeros_like(r)
    q[1:] = num[1:] / result.lambda_profile.values[1:]
    margin = np.zeros_like(r)
    gap = np.full_like(r, np.inf)
    gap[1:] = eta(w, r[1:], REG_FRACTION * spec.radius) - h(r[1:])
    margin[1:] = q[1:] * gap[1:] - g(r[1:]) / m
    return margin, gap, q


def balance_check(result, spec, strict=False):
    """Check the balance-from-below inequality at every node.

    The discrete check carries a slack ``10 h^2 max|z''|`` plus a round-off
    floor; ``strict`` demands a margin above the slack away from the pole,
    where equality always holds.
    """
    margin, gap, _ = balance_margins(result, spec)
    grid = result.grid
    r = grid.nodes
    zpp = np.gradient(result.z_prime(r), grid.spacing)
    slack = 10 * grid.spacing**2 * float(np.max(np.abs(zpp))) + ROUNDOFF_SLACK
    inner = margin[1:]
    bad = inner <= slack if strict else inner < -slack
    positive = bool(np.all(gap[1:] > 0))
    worst = int(np.argmin(inner)) + 1
    return BalanceReport(
        balanced=bool(not np.any(bad)) and positive,
        positive=positive,
        strict=strict,
        worst_margin=float(margin[worst]),
        worst_radius=float(r[worst]),
        violating_radii=tuple(float(x) for x in r[1:][bad]),
        slack=slack,
    )


@dataclass(frozen=True)
class ConvexityReport:
    holds: bool
    skipped: bool
    worst_values: tuple = ()
    tolerance: float = 0.0
    diagnostic: str = ""


def transplanted_convexity_check(result, spec, k_small=10, window=(0.02, 0.98)):
    """Check ``f_k'' - eta_w f_k' >= 0`` for ``f_k = g_k^W o s`` and ``k <= k_small``.

    ``g_k^W`` are the normalized moment functions of the comparison ball; the
    sign is unaffected by the normalization.  ``f_k'`` is exact from the Green
    operator's inner quotient, ``f_k''`` a centered difference of it.
    """
    if k_small > 10 or k_small < 1:
        raise InvalidBounds("k_small must lie in [1, 10]")
    balance = balance_check(result, spec)
    if not balance.balanced:
        return ConvexityReport(
            holds=False,
            skipped=True,
            diagnostic=(
                f"skipped: comparison space is not balanced from below "
                f"(worst margin {balance.worst_margin:.3g} at r = {balance.worst_radius:.4g})"
            ),
        )
    W_space = result.W_model
    hier = build_hierarchy(W_space, k_max=max(k_small, 2), N=result.grid.count)
    s_grid = hier.grid.nodes
    r = result.grid.nodes
    s_of_r = np.clip(result.stretch.values, 0.0, s_grid[-1])
    gvals = spec.bounds.g(r)
    h = result.grid.spacing
    keep = (r[1:-1] >= window[0] * r[-1]) & (r[1:-1] <= window[1] * r[-1])
    eta_w = eta(spec.base_warping, r[1:-1][keep], REG_FRACTION * spec.radius)
    worst = []
    ok = True
    tol = 0.0
    for k in range(1, k_small + 1):
        slope = CubicHermiteSpline(
            s_grid,
            hier.normalized_slopes[k].values,
            np.gradient(hier.normalized_slopes[k].values, hier.grid.spacing, edge_order=2),
        )
        fp = slope(s_of_r) / gvals
        fpp = (fp[2:] - fp[:-2]) / (2 * h)
        val = fpp[keep] - eta_w * fp[1:-1][keep]
        scale = float(np.max(np.abs(fpp[keep])) + np.max(np.abs(eta_w * fp[1:-1][keep])))
        tol_k = 1e-6 * scale
        tol = max(tol, tol_k)
        worst.append(float(np.min(val)))
        ok = ok and worst[-1] >= -tol_k
    return ConvexityReport(holds=ok, skipped=False, worst_values=tuple(worst), tolerance=tol)

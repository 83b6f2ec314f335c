"""Warping functions and the radial geometry of rotationally symmetric model spaces.

A model space of dimension ``m`` is the warped product ``[0, R) x_w S^{m-1}``;
the warping ``w`` fixes everything: sphere volumes ``omega_{m-1} w(r)**(m-1)``,
the mean curvature ``eta_w = w'/w`` of distance spheres and the radial
sectional curvature ``-w''/w``.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .errors import InvalidWarping, NonPositiveRadius
from .quadrature import DEFAULT_NODES, cumulative_integral, uniform_grid

DEFAULT_CAP = 1.0e3
REG_FRACTION = 1.0e-6


@dataclass(frozen=True, eq=False)
class WarpingFunction:
    """A radial profile ``w`` together with ``w'`` and ``w''``.

    ``closed`` marks profiles that return to zero at ``domain_end`` (spherical
    space forms); a model ball over such a profile must stop short of it.
    """

    eval: Callable
    deriv: Callable
    deriv2: Callable
    domain_end: float
    closed: bool = False
    label: str = "custom"
    params: dict = field(default_factory=dict)

    def __call__(self, r):
        return self.eval(r)


@dataclass(frozen=True, eq=False)
class ModelSpace:
    dim: int
    warping: WarpingFunction
    radius: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise InvalidWarping(f"dimension must be an integer >= 2, got {self.dim}")
        R = float(self.radius)
        if not (math.isfinite(R) and R > 0):
            raise NonPositiveRadius(f"radius must be positive, got {self.radius}")
        end = self.warping.domain_end
        if R > end * (1 + 1e-12) or (self.warping.closed and R >= end * (1 - 1e-12)):
            raise InvalidWarping(
                f"radius {R} leaves the domain of the warping (ends at {end})"
            )
        object.__setattr__(self, "radius", R)
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def r_eps(self):
        return REG_FRACTION * self.radius

    def grid(self, N=DEFAULT_NODES):
        return uniform_grid(self.radius, N)

    def volume_weight(self, r):
        """``w(r)**(m-1)``; the radial density of the volume measure up to omega."""
        return self.warping.eval(r) ** (self.dim - 1)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple = ()

    def __bool__(self):
        return self.valid


def space_form_warping(b, cap=DEFAULT_CAP):
    """Warping of the simply connected space form of constant curvature ``b``."""
    b = float(b)
    if b > 0:
        k = math.sqrt(b)
        return WarpingFunction(
            eval=lambda r: np.sin(k * np.asarray(r, dtype=float)) / k,
            deriv=lambda r: np.cos(k * np.asarray(r, dtype=float)),
            deriv2=lambda r: -k * np.sin(k * np.asarray(r, dtype=float)),
            domain_end=math.pi / k,
            closed=True,
            label="space_form",
            params={"b": b},
        )
    if b < 0:
        k = math.sqrt(-b)
        return WarpingFunction(
            eval=lambda r: np.sinh(k * np.asarray(r, dtype=float)) / k,
            deriv=lambda r: np.cosh(k * np.asarray(r, dtype=float)),
            deriv2=lambda r: k * np.sinh(k * np.asarray(r, dtype=float)),
            domain_end=float(cap),
            label="space_form",
            params={"b": b},
        )
    return WarpingFunction(
        eval=lambda r: np.asarray(r, dtype=float) * 1.0,
        deriv=lambda r: np.ones_like(np.asarray(r, dtype=float)),
        deriv2=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        domain_end=float(cap),
        label="space_form",
        params={"b": 0.0},
    )


def _end_slope(x, y, at, fallback):
    """Slope at ``at`` from the quartic through five end samples.

    The PCHIP end formula is only first-order accurate, which shows up in
    ``w'(0)``.  The quartic slope is kept when it passes the PCHIP limiter
    (same sign as the end secant and at most three times it).
    """
    d = float(np.polyval(np.polyder(np.polyfit(x - at, y, 4)), 0.0))
    j = (0, 1) if x[0] == at else (-2, -1)
    secant = (y[j[1]] - y[j[0]]) / (x[j[1]] - x[j[0]])
    if secant == 0 or d * secant < 0 or abs(d) > 3 * abs(secant):
        return fallback
    return d


def tabulated_warping(r_samples, w_samples, fd_step=None):
    """Warping interpolated from samples with a monotone-preserving cubic.

    ``w'`` is the derivative of the interpolant and ``w''`` a centered finite
    difference of ``w'``.  Smoothness of higher order at the pole is assumed.
    """
    r = np.asarray(r_samples, dtype=float)
    w = np.asarray(w_samples, dtype=float)
    if r.ndim != 1 or r.shape != w.shape or r.size < 4:
        raise InvalidWarping("tabulated warping needs matching 1-d samples (>= 4)")
    order = np.argsort(r)
    r, w = r[order], w[order]
    if np.any(np.diff(r) <= 0):
        raise InvalidWarping("sample radii must be distinct")
    if r[0] != 0.0:
        raise InvalidWarping("tabulated warping must include r = 0")
    slopes = PchipInterpolator(r, w).derivative()(r)
    slopes[0] = _end_slope(r[:5], w[:5], r[0], slopes[0])
    slopes[-1] = _end_slope(r[-5:], w[-5:], r[-1], slopes[-1])
    spline = CubicHermiteSpline(r, w, slopes, extrapolate=False)
    dspline = spline.derivative()
    end = float(r[-1])
    step = fd_step if fd_step is not None else 0.25 * float(np.min(np.diff(r)))

    def second(x):
        x = np.asarray(x, dtype=float)
        lo = np.clip(x - step, 0.0, end)
        hi = np.clip(x + step, 0.0, end)
        return (dspline(hi) - dspline(lo)) / (hi - lo)

    return WarpingFunction(
        eval=lambda x: spline(np.asarray(x, dtype=float)),
        deriv=lambda x: dspline(np.asarray(x, dtype=float)),
        deriv2=second,
        domain_end=end,
        label="tabulated",
        params={"samples": np.column_stack([r, w]).tolist()},
    )


def warping_from_dict(doc, cap=DEFAULT_CAP):
    """Build a warping from ``{"kind": "space_form", "b": ...}`` or a tabulated document."""
    kind = doc.get("kind")
    if kind == "space_form":
        if "b" not in doc:
            raise InvalidWarping("space_form warping needs field 'b'")
        return space_form_warping(float(doc["b"]), cap=doc.get("cap", cap))
    if kind == "tabulated":
        samples = np.asarray(doc.get("samples", []), dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 2:
            raise InvalidWarping("field 'samples' must be a list of [r, w] pairs")
        return tabulated_warping(samples[:, 0], samples[:, 1])
    raise InvalidWarping(f"unknown warping kind {kind!r}")


def warping_to_dict(w):
    if w.label == "space_form":
        return {"kind": "space_form", "b": w.params["b"]}
    if w.label == "tabulated":
        return {"kind": "tabulated", "samples": w.params["samples"]}
    return {"kind": w.label}


def _check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveRadius("radius must be strictly positive")
    return r


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def eta(w, r, r_eps=None):
    """Mean curvature ``w'(r)/w(r)`` of the distance sphere of radius ``r``.

    Below ``r_eps`` the removable pole is handled by ``1/r + w''(r)/3``, which
    is the odd expansion of ``w'/w`` for ``w = r + a r^3 + ...``.
    """
    r = _check_radius(r)
    if r_eps is None:
        r_eps = REG_FRACTION * min(w.domain_end, DEFAULT_CAP)
    small = r < r_eps
    safe = np.where(small, r_eps, r)
    out = np.where(small, 1.0 / r + w.deriv2(r) / 3.0, w.deriv(safe) / w.eval(safe))
    return _scalar(out)


def curvature_profile(w, r):
    """Radial sectional curvature ``-w''(r)/w(r)``."""
    r = _check_radius(r)
    return _scalar(-w.deriv2(r) / w.eval(r))


def unit_sphere_area(m):
    """Surface measure of the unit ``(m-1)``-sphere in ``R^m``."""
    return 2.0 * math.pi ** (m / 2) / math.gamma(m / 2)


def sphere_volume(space, r):
    return _scalar(unit_sphere_area(space.dim) * space.warping.eval(r) ** (space.dim - 1))


def ball_volume(space, r, N=DEFAULT_NODES):
    r = float(r)
    if r < 0 or r > space.radius * (1 + 1e-12):
        raise NonPositiveRadius(f"radius {r} outside [0, {space.radius}]")
    if r == 0:
        return 0.0
    grid = uniform_grid(r, N)
    area = grid.sample(lambda x: sphere_volume(space, x))
    return float(cumulative_integral(area).values[-1])


def isoperimetric_quotient(space, t, N=DEFAULT_NODES):
    """``q_w(t) = int_0^t w^{m-1} / w(t)^{m-1}``, tending to ``t/m`` at the pole."""
    t = float(_check_radius(t))
    if t < space.r_eps:
        return t / space.dim
    grid = uniform_grid(t, N)
    dens = grid.sample(space.volume_weight)
    return float(cumulative_integral(dens).values[-1] / space.volume_weight(t))


def validate_warping(w, m, tol=1e-6, n_samples=2001, R=None):
    """Check the pole normalization and positivity; violations are reported, not raised."""
    problems = []
    end = w.domain_end if R is None else float(R)
    w0 = float(w.eval(0.0))
    dw0 = float(w.deriv(0.0))
    if abs(w0) > tol:
        problems.append(f"w(0) = {w0:.3g}, expected 0")
    if not abs(dw0 - 1.0) <= tol:
        problems.append(f"w'(0) = {dw0:.6g}, expected 1")
    upper = end * (1 - 1e-9) if w.closed and R is None else end
    r = np.linspace(0.0, upper, n_samples)[1:]
    vals = np.asarray(w.eval(r), dtype=float)
    bad = ~(vals > 0)
    if np.any(bad):
        problems.append(f"w is not positive at r = {float(r[bad][0]):.6g}")
    if int(m) != m or m < 2:
        problems.append(f"dimension {m} is not an integer >= 2")
    return ValidationReport(not problems, tuple(problems))

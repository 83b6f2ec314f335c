"""Exit-time moment hierarchy of geodesic balls and the two-sided eigenvalue estimate.

The moment functions solve ``Delta u_k + k u_{k-1} = 0`` with ``u_0 = 1`` and
zero boundary values.  On a model ball they are radial and
``u_k = k G(u_{k-1})`` for the radial Green operator

    G(u)(r) = int_r^R ( int_0^t w^{m-1}(s) u(s) ds / w^{m-1}(t) ) dt.

``A_k`` grows like ``k! lambda_1^{-k}``, so the iteration runs on the
normalized ``g_k = u_k / u_k(0)`` and keeps ``ln u_k(0)`` and ``ln A_k`` as
running sums.  From these,

    rho_k   = k u_{k-1}(0) / u_k(0)     nondecreasing in k,
    sigma_k = k A_{k-1} / A_k           nonincreasing in k,

and ``rho_k <= lambda_1 <= sigma_k`` for every ``k``.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IndexOutOfRange,
    MonotonicityViolation,
    NonFiniteIteration,
    NotConverged,
    PreconditionError,
)
from .quadrature import (
    DEFAULT_NODES,
    ProductSimpson,
    RadialSamples,
    cumulative_integral,
)
from .warping import eta, unit_sphere_area

DEFAULT_TOL = 1e-4
DEFAULT_KMAX = 200
# relative slack for ordering checks once both sequences sit at round-off level
ROUNDOFF = 1e-12
RESIDUAL_WINDOW = (0.05, 0.95)


class GreenOperator:
    """Radial Dirichlet Green operator of a model ball on a fixed uniform grid."""

    def __init__(self, space, grid=None, N=DEFAULT_NODES):
        self.space = space
        self.grid = space.grid(N) if grid is None else grid
        if abs(self.grid.radius - space.radius) > 1e-12 * space.radius:
            raise PreconditionError("grid does not span the model ball")
        self.omega = unit_sphere_area(space.dim)
        self.weight = space.volume_weight(self.grid.nodes)
        self._inner = ProductSimpson(self.grid, space.volume_weight)

    def inner_quotient(self, u):
        """``int_0^t w^{m-1} u / w^{m-1}(t)``; equals ``-G(u)'`` and vanishes at the pole."""
        F = self._inner.cumulative(u)
        Q = np.zeros_like(F)
        Q[1:] = F[1:] / self.weight[1:]
        return Q

    def apply_with_slope(self, u):
        Q = self.inner_quotient(u)
        tail = cumulative_integral(RadialSamples(self.grid, Q)).values
        return tail[-1] - tail, -Q

    def apply(self, u):
        return self.apply_with_slope(u)[0]

    def integrate(self, u):
        """``int_B u dV`` for a radial ``u``."""
        return self.omega * self._inner.total(u)


def green_apply(space, u):
    """Apply the Green operator to radial samples; the result vanishes at ``R``."""
    op = GreenOperator(space, grid=u.grid)
    return RadialSamples(u.grid, op.apply(u.values))


@dataclass(frozen=True, eq=False)
class MomentHierarchy:
    """Normalized moment functions and the quotient sequences up to ``k_max``.

    Array attributes are indexed by ``k``; entry 0 of the quotient arrays is
    NaN since ``rho_k`` and ``sigma_k`` start at ``k = 1``.
    """

    space: object
    k_max: int
    normalized_functions: tuple
    normalized_slopes: tuple
    log_center_values: np.ndarray
    log_moments: np.ndarray
    lower_quotients: np.ndarray
    upper_quotients: np.ndarray
    operator: GreenOperator = field(repr=False)

    @property
    def grid(self):
        return self.operator.grid

    def rows(self):
        """``(k, rho_k, sigma_k, ln A_k)`` for ``k = 1..k_max``."""
        for k in range(1, self.k_max + 1):
            yield (
                k,
                float(self.lower_quotients[k]),
                float(self.upper_quotients[k]),
                float(self.log_moments[k]),
            )


def _iterate(op):
    """Yield ``(k, g_k, g_k', ln u_k(0), ln A_k, rho_k, sigma_k)`` for k = 0, 1, ..."""
    g = np.ones(op.grid.count)
    slope = np.zeros_like(g)
    log_c = 0.0
    a_prev = op.integrate(g)
    yield 0, g, slope, log_c, math.log(a_prev), math.nan, math.nan
    k = 0
    while True:
        k += 1
        Gg, dGg = op.apply_with_slope(g)
        center = Gg[0]
        if not (math.isfinite(center) and center > 0):
            raise NonFiniteIteration(f"normalization G(g_{k - 1})(0) = {center} at k = {k}")
        g = Gg / center
        slope = dGg / center
        rho = 1.0 / center
        log_c += math.log(k) + math.log(center)
        a = op.integrate(g)
        if not (math.isfinite(a) and a > 0):
            raise NonFiniteIteration(f"moment integral {a} at k = {k}")
        sigma = rho * a_prev / a
        a_prev = a
        yield k, g, slope, log_c, log_c + math.log(a), rho, sigma


def _collect(op, steps, k_max):
    gs, slopes, lc, la, rho, sig = [], [], [], [], [], []
    for k, g, dg, log_c, log_a, r, s in steps:
        gs.append(RadialSamples(op.grid, g))
        slopes.append(RadialSamples(op.grid, dg))
        lc.append(log_c)
        la.append(log_a)
        rho.append(r)
        sig.append(s)
        if k >= k_max:
            break
    return MomentHierarchy(
        space=op.space,
        k_max=len(gs) - 1,
        normalized_functions=tuple(gs),
        normalized_slopes=tuple(slopes),
        log_center_values=np.array(lc),
        log_moments=np.array(la),
        lower_quotients=np.array(rho),
        upper_quotients=np.array(sig),
        operator=op,
    )


def build_hierarchy(space, k_max=DEFAULT_KMAX, N=DEFAULT_NODES, operator=None):
    if k_max < 2:
        raise PreconditionError("k_max must be at least 2")
    op = operator if operator is not None else GreenOperator(space, N=N)
    return _collect(op, _iterate(op), k_max)


@dataclass(frozen=True)
class MomentCheck:
    log_moment: float
    boundary_log_moment: float
    relative_disagreement: float


def moment(hierarchy, k, verify=False):
    """``ln A_k``.  With ``verify``, also the boundary-flux route.

    The flux route takes ``A_k = -u'_{k+1}(R) Vol(S_R) / (k+1)`` with the
    derivative of ``g_{k+1}`` at ``R`` from a one-sided second-order
    difference, so it is independent of the volume integral.
    """
    if not 1 <= k <= hierarchy.k_max:
        raise IndexOutOfRange(f"k = {k} outside [1, {hierarchy.k_max}]")
    log_a = float(hierarchy.log_moments[k])
    if not verify:
        return log_a
    if k + 1 > hierarchy.k_max:
        raise IndexOutOfRange("verification needs g_{k+1}; raise k_max")
    op = hierarchy.operator
    g_next = hierarchy.normalized_functions[k + 1].values
    h = op.grid.spacing
    slope = (3 * g_next[-1] - 4 * g_next[-2] + g_next[-3]) / (2 * h)
    sphere = op.omega * op.weight[-1]
    # u_{k+1} = exp(log c_{k+1}) g_{k+1}
    log_b = float(hierarchy.log_center_values[k + 1]) + math.log(-slope * sphere / (k + 1))
    return MomentCheck(log_a, log_b, abs(math.expm1(log_b - log_a)))


@dataclass(frozen=True, eq=False)
class EigenEstimate:
    lower: float
    upper: float
    iterations: int
    converged: bool
    eigenfunction: RadialSamples
    residual_norm: float
    hierarchy: MomentHierarchy = field(default=None, repr=False)

    @property
    def midpoint(self):
        return 0.5 * (self.lower + self.upper)

    @property
    def relative_width(self):
        return (self.upper - self.lower) / self.lower

    def contains(self, value, rel=0.0):
        return self.lower * (1 - rel) <= value <= self.upper * (1 + rel)

    def to_dict(self):
        return {
            "lambda_lo": self.lower,
            "lambda_hi": self.upper,
            "midpoint": self.midpoint,
            "iterations": self.iterations,
            "converged": self.converged,
            "residual_norm": self.residual_norm,
        }


def _ordered(a, b):
    """``a <= b`` up to relative round-off."""
    return a <= b + ROUNDOFF * max(abs(a), abs(b))


def check_sandwich(rho, sigma, k):
    """Raise if step ``k`` broke monotonicity or the ordering ``rho_k <= sigma_k``."""
    if not _ordered(rho[k], sigma[k]):
        raise MonotonicityViolation(f"rho_{k} = {rho[k]!r} > sigma_{k} = {sigma[k]!r}")
    if k >= 2:
        if not _ordered(rho[k - 1], rho[k]):
            raise MonotonicityViolation(f"rho decreased at k = {k}")
        if not _ordered(sigma[k], sigma[k - 1]):
            raise MonotonicityViolation(f"sigma increased at k = {k}")


def lambda1_sandwich(space, tol=DEFAULT_TOL, k_max=DEFAULT_KMAX, N=DEFAULT_NODES, operator=None):
    """Iterate the hierarchy until ``sigma_k - rho_k <= tol * rho_k``.

    Returns the bracket ``[rho_k, sigma_k]`` with ``g_k`` as the eigenfunction
    approximation; raises :class:`NotConverged` (carrying the partial estimate)
    if ``k_max`` is reached first.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    op = operator if operator is not None else GreenOperator(space, N=N)
    rho, sigma = [math.nan], [math.nan]

    def steps():
        for step in _iterate(op):
            k = step[0]
            if k:
                rho.append(step[5])
                sigma.append(step[6])
                check_sandwich(rho, sigma, k)
            yield step
            if k and sigma[k] - rho[k] <= tol * rho[k]:
                return

    hierarchy = _collect(op, steps(), k_max)
    k = hierarchy.k_max
    lower, upper = float(hierarchy.lower_quotients[k]), float(hierarchy.upper_quotients[k])
    converged = upper - lower <= tol * lower
    g = hierarchy.normalized_functions[k]
    estimate = EigenEstimate(
        lower=lower,
        upper=upper,
        iterations=k,
        converged=converged,
        eigenfunction=g,
        residual_norm=eigen_residual(space, 0.5 * (lower + upper), g),
        hierarchy=hierarchy,
    )
    if not converged:
        raise NotConverged(
            f"bracket width {(upper - lower) / lower:.3g} > tol after {k} iterations",
            estimate,
        )
    return estimate


def eigen_residual(space, lam, g, window=RESIDUAL_WINDOW):
    """Max of ``|g'' + (m-1) eta_w g' + lam g|`` on the trimmed interior, over ``max|g|``."""
    vals = g.values
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        return 0.0
    nodes = g.grid.nodes
    h = g.grid.spacing
    d1 = (vals[2:] - vals[:-2]) / (2 * h)
    d2 = (vals[2:] - 2 * vals[1:-1] + vals[:-2]) / h**2
    r = nodes[1:-1]
    keep = (r >= window[0] * g.grid.radius) & (r <= window[1] * g.grid.radius)
    r = r[keep]
    res = d2[keep] + (space.dim - 1) * eta(space.warping, r, space.r_eps) * d1[keep] + lam * vals[1:-1][keep]
    return float(np.max(np.abs(res)) / scale)


def torsional_bounds(space, N=DEFAULT_NODES, operator=None):
    """``(1 / int_0^R q_w, Vol(B_R) / A_1)`` bracketing the first eigenvalue."""
    op = operator if operator is not None else GreenOperator(space, N=N)
    ones = np.ones(op.grid.count)
    q = op.inner_quotient(ones)
    int_q = cumulative_integral(RadialSamples(op.grid, q)).values[-1]
    torsion = op.apply(ones)
    return float(1.0 / int_q), float(op.integrate(ones) / op.integrate(torsion))


def torsional_rigidity(space, N=DEFAULT_NODES):
    """``A_1``: the integral of the mean exit time over the ball."""
    op = GreenOperator(space, N=N)
    return float(op.integrate(op.apply(np.ones(op.grid.count))))


MOMENT_COLUMNS = ("k", "rho_k", "sigma_k", "ln_A_k")


def write_moments_csv(hierarchy, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(MOMENT_COLUMNS)
    for k, rho, sigma, log_a in hierarchy.rows():
        writer.writerow([k, repr(rho), repr(sigma), repr(log_a)])

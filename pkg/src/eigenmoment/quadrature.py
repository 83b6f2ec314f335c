"""Radial grids, cumulative quadrature, interpolation and monotone inversion.

All radial integrals in the package run on a uniform grid over ``[0, R]``.
Plain integrands go through composite Simpson; integrands of the form
``w(s)**(m-1) * u(s)``, whose weight vanishes to high order at the pole, go
through :class:`ProductSimpson`, which integrates the weight exactly against a
piecewise-quadratic interpolant of ``u``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import InvalidGrid, NotMonotone, OutOfDomain, OutOfRange

MIN_NODES = 16
DEFAULT_NODES = 4097


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing nodes on ``[0, R]`` with ``nodes[0] == 0``."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise InvalidGrid(f"a radial grid needs at least {MIN_NODES} nodes")
        if nodes[0] != 0.0 or not np.all(np.diff(nodes) > 0):
            raise InvalidGrid("nodes must start at 0 and increase strictly")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def count(self):
        return self.nodes.size

    @property
    def radius(self):
        return float(self.nodes[-1])

    @property
    def spacing(self):
        return self.radius / (self.count - 1)

    def samples(self, values):
        return RadialSamples(self, values)

    def sample(self, func):
        """Evaluate a vectorized callable at the nodes."""
        return RadialSamples(self, func(self.nodes))


def uniform_grid(R, N=DEFAULT_NODES):
    if not N >= MIN_NODES:
        raise InvalidGrid(f"N={N} is below the minimum of {MIN_NODES}")
    if not (np.isfinite(R) and R > 0):
        raise InvalidGrid(f"radius must be positive and finite, got {R}")
    nodes = np.linspace(0.0, float(R), int(N))
    nodes[-1] = float(R)
    return RadialGrid(nodes)


@dataclass(frozen=True, eq=False)
class RadialSamples:
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.count,):
            raise ValueError(
                f"expected {self.grid.count} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("radial samples must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @cached_property
    def interpolant(self):
        return PchipInterpolator(self.grid.nodes, self.values, extrapolate=False)

    def __call__(self, r):
        return interpolate(self, r)


def cumulative_integral(f):
    """``F(t) = int_0^t f`` at every node (composite Simpson, ``F(0) = 0``)."""
    grid = f.grid
    F = cumulative_simpson(f.values, dx=grid.spacing, initial=0.0)
    return RadialSamples(grid, F)


def tail_integral(f):
    """``T(r) = int_r^R f`` computed as ``F(R) - F(r)`` from the same accumulation."""
    F = cumulative_integral(f).values
    return RadialSamples(f.grid, F[-1] - F)


def _check_domain(grid, r):
    r = np.asarray(r, dtype=float)
    slack = 1e-12 * grid.radius
    if np.any(r < -slack) or np.any(r > grid.radius + slack):
        raise OutOfDomain(f"radius outside [0, {grid.radius}]")
    return np.clip(r, 0.0, grid.radius)


def interpolate(f, r):
    """Monotone-preserving cubic (PCHIP) interpolation; exact at the nodes."""
    r = _check_domain(f.grid, r)
    out = f.interpolant(r)
    return float(out) if out.ndim == 0 else out


def invert_monotone(f, y):
    """Solve ``interpolate(f, r) == y`` for a strictly increasing ``f``."""
    vals = f.values
    if not np.all(np.diff(vals) > 0):
        raise NotMonotone("samples are not strictly increasing")
    if not vals[0] <= y <= vals[-1]:
        raise OutOfRange(f"{y} is outside [{vals[0]}, {vals[-1]}]")
    nodes = f.grid.nodes
    # bracket on the containing cell, then let brentq (bisection + secant) finish
    i = int(np.searchsorted(vals, y))
    if i < vals.size and vals[i] == y:
        return float(nodes[i])
    lo, hi = nodes[max(i - 1, 0)], nodes[min(i, vals.size - 1)]
    interp = f.interpolant
    r = brentq(lambda t: float(interp(t)) - y, lo, hi, xtol=1e-14 * (1 + hi), rtol=1e-15)
    return float(r)


def _lagrange_basis(t):
    """Quadratic Lagrange basis on the local nodes t = 0, 1, 2."""
    return np.stack([(t - 1) * (t - 2) / 2, -t * (t - 2), t * (t - 1) / 2])


class ProductSimpson:
    """Cumulative ``int_0^{r_i} weight(s) u(s) ds`` with the weight integrated exactly.

    ``u`` is replaced by its quadratic interpolant on consecutive node pairs
    (the Simpson panels; the last interval of an odd-length grid borrows the
    preceding panel) and each interval is integrated against ``weight`` with
    Gauss-Legendre.  For ``weight == 1`` this reproduces cumulative Simpson.
    The interval weights depend only on the grid and the weight function, so
    they are computed once and reused across many ``u``.
    """

    def __init__(self, grid, weight, order=8):
        self.grid = grid
        nodes = grid.nodes
        h = grid.spacing
        n_int = grid.count - 1
        starts = np.arange(n_int)
        panel = np.minimum(starts - starts % 2, grid.count - 3)
        x, wq = np.polynomial.legendre.leggauss(order)
        # quadrature points on every interval [r_i, r_{i+1}]
        pts = nodes[starts, None] + (x[None, :] + 1) * (h / 2)
        wvals = np.asarray(weight(pts), dtype=float) * (wq * h / 2)
        local_t = (pts - nodes[panel, None]) / h
        basis = _lagrange_basis(local_t)  # (3, n_int, order)
        self._coef = np.einsum("bij,ij->ib", basis, wvals)  # (n_int, 3)
        self._index = panel[:, None] + np.arange(3)[None, :]

    def increments(self, u):
        u = np.asarray(u, dtype=float)
        return np.einsum("ib,ib->i", self._coef, u[self._index])

    def cumulative(self, u):
        out = np.empty(self.grid.count)
        out[0] = 0.0
        np.cumsum(self.increments(u), out=out[1:])
        return out

    def total(self, u):
        return float(self.increments(u).sum())

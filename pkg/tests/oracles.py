"""Independent reference computations used by the tests.

Nothing here imports the package: each oracle reaches its answer by a
different route (power series, closed forms, a matrix eigensolver).
"""

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal


def sinh_series(x, terms=40):
    """``sinh`` and ``cosh`` summed from their Taylor series."""
    s = c = 0.0
    term = 1.0
    for n in range(2 * terms):
        if n > 0:
            term *= x / n
        if n % 2:
            s += term
        else:
            c += term
    return s, c


def radial_dirichlet_eigenvalue(w, m, R, n=4000):
    """Smallest eigenvalue of ``-(w^{m-1} g')' = lam w^{m-1} g`` with ``g(R) = 0``.

    Vertex-centred finite volumes on a half-shifted grid so the pole needs
    no boundary condition: the flux through ``r = 0`` vanishes because the
    weight does.  The generalized problem is symmetrized by the mass matrix.
    """
    h = R / n
    r = (np.arange(n) + 0.5) * h  # cell centres, the last one sits h/2 inside R
    faces = np.arange(n + 1) * h
    p = w(faces) ** (m - 1)
    mass = w(r) ** (m - 1) * h
    main = (p[:-1] + p[1:]) / h
    main[-1] = p[-2] / h + p[-1] / (h / 2)  # Dirichlet value at the outer face
    off = -p[1:-1] / h
    scale = 1.0 / np.sqrt(mass)
    d = main * scale**2
    e = off * scale[:-1] * scale[1:]
    vals = eigh_tridiagonal(d, e, select="i", select_range=(0, 0), eigvals_only=True)
    return float(vals[0])


def richardson_eigenvalue(w, m, R, n=2000):
    """Second-order solver extrapolated once to remove the ``h^2`` term."""
    coarse = radial_dirichlet_eigenvalue(w, m, R, n)
    fine = radial_dirichlet_eigenvalue(w, m, R, 2 * n)
    return (4 * fine - coarse) / 3


def bessel_disk_eigenvalue():
    """Square of the first zero of ``J_0``, bracketed and bisected on its series."""

    def j0(x):
        total, term = 0.0, 1.0
        for k in range(60):
            if k:
                term *= -(x * x / 4) / (k * k)
            total += term
        return total

    lo, hi = 2.0, 3.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if j0(lo) * j0(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return (0.5 * (lo + hi)) ** 2


def disk_torsion(R=1.0):
    """``int_0^R 2 pi r (R^2 - r^2) / 4 dr``."""
    return math.pi * R**4 / 8


def ball3_torsion(R=1.0):
    return 4 * math.pi * R**5 / 45

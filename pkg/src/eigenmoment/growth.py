"""Growth-rate reading of the moment spectrum.

The first eigenvalue is the critical ``eta`` at which
``(eta / c)**n * A_n / n!`` stops being bounded.  Since ``A_n ~ C n! lambda_1**-n``
the critical value is ``c * lambda_1``.  Taken verbatim the criterion uses
``c = 2`` ("analyst" normalization, moments of ``Delta``); with the
half-Laplacian convention of probabilists the moments pick up ``2**n`` and the
criterion returns ``lambda_1`` itself (``c = 1``).  Both are reported.
"""

import math
from dataclasses import dataclass

from .errors import InsufficientDepth, PreconditionError

ANALYST = "analyst"
PROBABILIST = "probabilist"
_SCALE = {ANALYST: 2.0, PROBABILIST: 1.0}
MIN_DEPTH = 10
GAP_FLAG = 0.02


@dataclass(frozen=True)
class GrowthEstimate:
    ratio_estimate: float
    root_estimate: float
    n_used: int
    normalization: str


def _scale(normalization):
    try:
        return _SCALE[normalization]
    except KeyError:
        raise ValueError(f"normalization must be one of {sorted(_SCALE)}") from None


def ratio_estimate(hierarchy, n, normalization=PROBABILIST):
    """``c n A_{n-1} / A_n``."""
    log_a = hierarchy.log_moments
    return _scale(normalization) * n * math.exp(log_a[n - 1] - log_a[n])


def root_estimate(hierarchy, n, normalization=PROBABILIST):
    """``c (n! / A_n)**(1/n)``, evaluated in the log domain."""
    return _scale(normalization) * math.exp((math.lgamma(n + 1) - hierarchy.log_moments[n]) / n)


def lambda1_growth(hierarchy, normalization=PROBABILIST, n=None):
    if hierarchy.k_max < MIN_DEPTH:
        raise InsufficientDepth(f"need k_max >= {MIN_DEPTH}, hierarchy has {hierarchy.k_max}")
    n = hierarchy.k_max if n is None else int(n)
    if not 1 <= n <= hierarchy.k_max:
        raise InsufficientDepth(f"n = {n} is outside the computed spectrum")
    return GrowthEstimate(
        ratio_estimate=ratio_estimate(hierarchy, n, normalization),
        root_estimate=root_estimate(hierarchy, n, normalization),
        n_used=n,
        normalization=normalization,
    )


@dataclass(frozen=True)
class ReconciliationReport:
    probabilist: GrowthEstimate
    analyst: GrowthEstimate
    midpoint: float
    ratio_gap: float
    root_gap: float
    analyst_factor: float
    flagged: bool

    def to_dict(self):
        return {
            "ratio": self.probabilist.ratio_estimate,
            "root": self.probabilist.root_estimate,
            "normalization": self.probabilist.normalization,
            "gap_vs_sandwich": self.ratio_gap,
            "root_gap_vs_sandwich": self.root_gap,
            "analyst_ratio": self.analyst.ratio_estimate,
            "analyst_root": self.analyst.root_estimate,
            "analyst_over_midpoint": self.analyst_factor,
            "n_used": self.probabilist.n_used,
            "sandwich_midpoint": self.midpoint,
            "flagged": self.flagged,
        }


def reconcile(hierarchy, sandwich):
    """Relative gaps between the growth estimates and the sandwich midpoint."""
    if not sandwich.converged:
        raise PreconditionError("reconciliation needs a converged sandwich estimate")
    prob = lambda1_growth(hierarchy, PROBABILIST)
    anal = lambda1_growth(hierarchy, ANALYST)
    mid = sandwich.midpoint
    ratio_gap = abs(prob.ratio_estimate - mid) / mid
    root_gap = abs(prob.root_estimate - mid) / mid
    return ReconciliationReport(
        probabilist=prob,
        analyst=anal,
        midpoint=mid,
        ratio_gap=ratio_gap,
        root_gap=root_gap,
        analyst_factor=anal.ratio_estimate / mid,
        flagged=ratio_gap > GAP_FLAG,
    )

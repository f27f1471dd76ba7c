"""Hoeffding confidence intervals on pairwise win estimates.

For a pair compared directly in z units with empirical win rate m_hat, the
half-width c = sqrt(-ln(delta) / (2 z)) bounds |m_hat - truth| with failure
probability delta (bounded outcomes in [0, 1]). A verdict is issued only when
the whole interval clears 0.5: the first system wins iff m_hat - c > 0.5, the
second iff m_hat + c < 0.5, otherwise the pair is undecided. Pairs never
observed together are always undecided.

The default constant is -ln(delta); ``two_sided=True`` switches to the
standard two-sided constant ln(2/delta), which widens every interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Ranking, ValidationError
from .pairwise import AccumulatedMatrix

__all__ = [
    "ConfidenceReport",
    "hoeffding_halfwidth",
    "confidence_report",
    "pair_margin",
    "significance_margins",
]


def hoeffding_halfwidth(z: int, delta: float, two_sided: bool = False) -> float:
    """Half-width of the confidence interval after z direct comparisons."""
    if z < 1:
        raise ValidationError("half-width is undefined without direct comparisons")
    if not 0.0 < delta <= 1.0:
        raise ValidationError("delta must be in (0, 1]")
    constant = math.log(2.0 / delta) if two_sided else -math.log(delta)
    return math.sqrt(constant / (2.0 * z)) + 0.0  # normalizes -0.0 at delta == 1


@dataclass(frozen=True)
class ConfidenceReport:
    """Per-pair win estimates, interval half-widths, and verdicts.

    Matrices are indexed by ordered pair: ``m_hat[i, j]`` is i's empirical
    win rate over j (NaN when never co-observed), ``verdict[i, j]`` is +1 if
    i wins, -1 if j wins, 0 if undecided.
    """

    delta: float
    two_sided: bool
    m_hat: np.ndarray
    direct_counts: np.ndarray
    halfwidth: np.ndarray
    verdict: np.ndarray

    @property
    def n_systems(self) -> int:
        return self.m_hat.shape[0]

    def decided_pairs(self) -> int:
        """Number of unordered pairs with a verdict."""
        iu = np.triu_indices(self.n_systems, 1)
        return int((self.verdict[iu] != 0).sum())


def confidence_report(
    acc: AccumulatedMatrix, delta: float, two_sided: bool = False
) -> ConfidenceReport:
    """Evaluate every pair of an accumulation at confidence level delta."""
    if not 0.0 < delta <= 1.0:
        raise ValidationError("delta must be in (0, 1]")
    z = acc.direct_counts.astype(np.int64)
    compared = z > 0
    m_hat = np.full(z.shape, np.nan)
    np.divide(acc.direct_wins, z, out=m_hat, where=compared)
    constant = math.log(2.0 / delta) if two_sided else -math.log(delta)
    halfwidth = np.full(z.shape, np.nan)
    np.sqrt(np.divide(constant, 2.0 * z, out=halfwidth, where=compared), out=halfwidth, where=compared)
    halfwidth[compared] += 0.0  # normalizes -0.0 at delta == 1
    verdict = np.zeros(z.shape, dtype=np.int8)
    with np.errstate(invalid="ignore"):
        verdict[compared & (m_hat - halfwidth > 0.5)] = 1
        verdict[compared & (m_hat + halfwidth < 0.5)] = -1
    np.fill_diagonal(verdict, 0)
    return ConfidenceReport(delta, two_sided, m_hat, z, halfwidth, verdict)


def pair_margin(report: ConfidenceReport, i: int, j: int) -> float:
    """Signed distance between 0.5 and the (i, j) interval; 0 when undecided.

    Positive when i wins ((m_hat - c) - 0.5), negative when j wins
    ((m_hat + c) - 0.5), so the margin matrix is antisymmetric.
    """
    v = int(report.verdict[i, j])
    if v == 0:
        return 0.0
    m = report.m_hat[i, j]
    c = report.halfwidth[i, j]
    return float(m - c - 0.5) if v > 0 else float(m + c - 0.5)


def significance_margins(report: ConfidenceReport, order: Ranking) -> np.ndarray:
    """Margin matrix with rows and columns arranged best to worst.

    ``order`` is the aggregate ranking of the same accumulation; cell (a, b)
    holds the signed margin of the a-th best system against the b-th best.
    """
    n = report.n_systems
    if order.universe_size != n:
        raise ValidationError("ranking universe does not match report")
    out = np.zeros((n, n))
    ids = order.ordering
    for a in range(n):
        for b in range(n):
            if a != b:
                out[a, b] = pair_margin(report, ids[a], ids[b])
    return out

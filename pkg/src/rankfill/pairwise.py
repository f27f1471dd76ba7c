"""Pairwise win matrices induced by partial rankings, and their accumulation.

``entries[i, j]`` is the probability that system i precedes system j in a
uniformly random complete ranking compatible with the partial ranking:
1 or 0 when both are observed, 0.5 when neither is, and the gap-uniformity
value (r+1)/(k+1) when exactly one is. The diagonal is fixed at 0.5 by
convention and excluded from every downstream sum.

Accumulation sums unit matrices over many partial rankings and additionally
tracks, per pair, how many units observed both systems and how many of those
each system won. Imputed entries never count as direct comparisons (they are
deterministic given the chain, so they carry no independent evidence).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .model import PartialRanking, ValidationError
from .combinat import enumerate_compatible

__all__ = [
    "PairwiseMatrix",
    "AccumulatedMatrix",
    "matrix_from_partial",
    "matrix_from_partial_oracle",
    "accumulate",
]

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PairwiseMatrix:
    """Win probabilities for every ordered pair; complement across the
    diagonal (entries[i, j] + entries[j, i] == 1 off-diagonal)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValidationError("entries must be a square matrix")
        entries = entries.copy()
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def n_systems(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class AccumulatedMatrix:
    """Sum of unit win matrices plus direct-comparison bookkeeping.

    ``sums[i, j] + sums[j, i] == units`` off-diagonal. ``direct_counts`` is
    the symmetric count of units observing both systems; ``direct_wins[i, j]``
    counts those units in which i preceded j. ``row_masses`` holds the exact
    per-system row sums (Fractions): every unit entry is a low-denominator
    rational, so keeping the totals exact lets downstream tie-breaks see
    mathematically equal masses as equal (float row sums can differ in the
    last ulp across systems that are exactly tied).
    """

    sums: np.ndarray
    units: int
    direct_counts: np.ndarray
    direct_wins: np.ndarray
    row_masses: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        for name in ("sums", "direct_counts", "direct_wins"):
            arr = np.asarray(getattr(self, name)).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (self.sums.shape == self.direct_counts.shape == self.direct_wins.shape):
            raise ValidationError("matrix shapes must agree")

    @property
    def n_systems(self) -> int:
        return self.sums.shape[0]


def _float_entries(pr: PartialRanking) -> np.ndarray:
    n = pr.universe_size
    chain = np.asarray(pr.ordered, dtype=np.intp)
    k = len(chain)
    entries = np.full((n, n), 0.5)
    if k:
        idx = np.arange(k)
        entries[np.ix_(chain, chain)] = idx[:, None] < idx[None, :]
        if k < n:
            observed = np.zeros(n, dtype=bool)
            observed[chain] = True
            free = np.flatnonzero(~observed)
            entries[np.ix_(free, chain)] = ((idx + 1.0) / (k + 1.0))[None, :]
            entries[np.ix_(chain, free)] = ((k - idx) / (k + 1.0))[:, None]
    np.fill_diagonal(entries, 0.5)
    return entries


def _exact_entries(pr: PartialRanking) -> np.ndarray:
    n = pr.universe_size
    chain = pr.ordered
    k = len(chain)
    entries = np.full((n, n), _HALF, dtype=object)
    for a, i in enumerate(chain):
        for b, j in enumerate(chain):
            if a != b:
                entries[i, j] = Fraction(1) if a < b else Fraction(0)
    free = pr.unobserved()
    for b, j in enumerate(chain):
        p = Fraction(b + 1, k + 1)
        for u in free:
            entries[u, j] = p
            entries[j, u] = 1 - p
    return entries


def matrix_from_partial(pr: PartialRanking, exact: bool = False) -> PairwiseMatrix:
    """Win matrix of one partial ranking (float by default, Fractions if exact)."""
    if exact:
        return PairwiseMatrix(_exact_entries(pr))
    return PairwiseMatrix(_float_entries(pr))


def matrix_from_partial_oracle(pr: PartialRanking, exact: bool = True) -> PairwiseMatrix:
    """Win matrix by exhaustive enumeration of compatible completions.

    Test oracle, limited to universes of at most 8 systems. Exact mode
    returns Fractions wins/total; float mode their quotients.
    """
    if pr.universe_size > 8:
        raise ValidationError("oracle enumeration is limited to 8 systems")
    completions = enumerate_compatible(pr)
    total = len(completions)
    n = pr.universe_size
    orders = np.array([c.ordering for c in completions], dtype=np.intp)
    ranks = np.empty_like(orders)
    ranks[np.arange(total)[:, None], orders] = np.arange(n)[None, :]
    win_counts = (ranks[:, :, None] < ranks[:, None, :]).sum(axis=0)
    if exact:
        entries = np.full((n, n), _HALF, dtype=object)
        for i in range(n):
            for j in range(n):
                if i != j:
                    entries[i, j] = Fraction(int(win_counts[i, j]), total)
    else:
        entries = win_counts / total
        np.fill_diagonal(entries, 0.5)
    return PairwiseMatrix(entries)


def accumulate(partials: Iterable[PartialRanking], exact: bool = False) -> AccumulatedMatrix:
    """Sum the unit matrices of many partial rankings over one shared universe.

    The float path never adds rounded entries: it accumulates integer
    numerators (direct 0/1 wins; imputed masses over their shared denominator
    k+1 per chain length k; half masses recovered from observation counts by
    inclusion-exclusion) and divides once at the end, so the exact row masses
    come for free and accumulation is order-independent. Exact mode sums
    Fraction matrices directly and is the slow reference.
    """
    if exact:
        return _accumulate_exact(partials)
    direct_counts: np.ndarray | None = None
    direct_wins: np.ndarray | None = None
    observed_units: np.ndarray | None = None
    imputed: dict[int, np.ndarray] = {}
    units = 0
    n = -1
    for pr in partials:
        if direct_counts is None:
            n = pr.universe_size
            direct_counts = np.zeros((n, n), dtype=np.int64)
            direct_wins = np.zeros((n, n), dtype=np.int64)
            observed_units = np.zeros(n, dtype=np.int64)
        elif pr.universe_size != n:
            raise ValidationError(
                f"mismatched universe sizes: {pr.universe_size} != {n}"
            )
        units += 1
        chain = np.asarray(pr.ordered, dtype=np.intp)
        k = len(chain)
        if k == 0:
            continue
        observed_units[chain] += 1
        idx = np.arange(k)
        block = np.ix_(chain, chain)
        direct_counts[block] += 1
        direct_wins[block] += idx[:, None] < idx[None, :]
        if k < n:
            observed = np.zeros(n, dtype=bool)
            observed[chain] = True
            free = np.flatnonzero(~observed)
            layer = imputed.get(k)
            if layer is None:
                layer = imputed.setdefault(k, np.zeros((n, n), dtype=np.int64))
            layer[np.ix_(free, chain)] += (idx + 1)[None, :]
            layer[np.ix_(chain, free)] += (k - idx)[:, None]
    if direct_counts is None:
        raise ValidationError("accumulate needs at least one partial ranking")
    np.fill_diagonal(direct_counts, 0)
    # units in which neither system was observed contribute 0.5 per pair
    both_unobserved = (
        units - observed_units[:, None] - observed_units[None, :] + direct_counts
    )
    np.fill_diagonal(both_unobserved, 0)
    sums = direct_wins + 0.5 * both_unobserved
    for k, layer in imputed.items():
        sums += layer / (k + 1)
    np.fill_diagonal(sums, 0.5 * units)
    row_masses = _exact_row_masses(direct_wins, both_unobserved, imputed)
    return AccumulatedMatrix(sums, units, direct_counts, direct_wins, row_masses)


def _exact_row_masses(
    direct_wins: np.ndarray, both_unobserved: np.ndarray, imputed: dict[int, np.ndarray]
) -> tuple[Fraction, ...]:
    n = direct_wins.shape[0]
    totals = [
        Fraction(int(w)) + Fraction(int(h), 2)
        for w, h in zip(direct_wins.sum(axis=1), both_unobserved.sum(axis=1))
    ]
    for k, layer in imputed.items():
        for i, numerator in enumerate(layer.sum(axis=1)):
            totals[i] += Fraction(int(numerator), k + 1)
    return tuple(totals[:n])


def _accumulate_exact(partials: Iterable[PartialRanking]) -> AccumulatedMatrix:
    sums: np.ndarray | None = None
    direct_counts: np.ndarray | None = None
    direct_wins: np.ndarray | None = None
    units = 0
    n = -1
    for pr in partials:
        if sums is None:
            n = pr.universe_size
            sums = np.full((n, n), Fraction(0), dtype=object)
            direct_counts = np.zeros((n, n), dtype=np.int64)
            direct_wins = np.zeros((n, n), dtype=np.int64)
        elif pr.universe_size != n:
            raise ValidationError(
                f"mismatched universe sizes: {pr.universe_size} != {n}"
            )
        units += 1
        sums += _exact_entries(pr)
        chain = np.asarray(pr.ordered, dtype=np.intp)
        if len(chain):
            idx = np.arange(len(chain))
            block = np.ix_(chain, chain)
            direct_counts[block] += 1
            direct_wins[block] += idx[:, None] < idx[None, :]
    if sums is None:
        raise ValidationError("accumulate needs at least one partial ranking")
    np.fill_diagonal(direct_counts, 0)
    row_masses = tuple(
        sum(sums[i, j] for j in range(n) if j != i) for i in range(n)
    )
    return AccumulatedMatrix(sums, units, direct_counts, direct_wins, row_masses)

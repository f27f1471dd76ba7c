"""Counting and sampling of complete rankings compatible with a partial chain.

A partial ranking of k observed systems out of n admits n!/k! compatible
complete rankings (the linear extensions of a k-chain among n items). The
quantity driving imputation is the probability that a uniformly random
compatible completion places a given unobserved item above the observed item
at 0-based chain rank r. Gap uniformity gives the closed form

    p(k, r) = (r + 1) / (k + 1),

independent of n: a single unobserved item is equally likely to land in any
of the k+1 gaps around the chain, and the remaining unobserved items do not
disturb that marginal. ``win_probability_sum`` evaluates the same quantity as
an explicit sum over head arrangements (variations, insertions, and
interleavings of the two chains) and is kept as an independent cross-check;
the identity is only used as the production path because the test suite
verifies sum, identity, and exhaustive enumeration against each other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .model import PartialRanking, Ranking, ValidationError, ranking_from_ordering

__all__ = [
    "shuffle_count",
    "variation_count",
    "compatible_count",
    "unobserved_win_probability",
    "win_probability_sum",
    "ImputationTable",
    "build_imputation_table",
    "enumerate_compatible",
    "sample_compatible",
    "MAX_ENUMERATION_UNIVERSE",
]

# Exhaustive enumeration is factorial; 10 items already mean up to 3.6M rankings.
MAX_ENUMERATION_UNIVERSE = 10

# Fractions stay exact up to this universe size by default; beyond it lookups
# fall back to floats (documented relative accuracy 1e-9 for the sum form).
DEFAULT_EXACT_THRESHOLD = 64


def shuffle_count(a: int, b: int) -> int:
    """Number of interleavings of two lists of lengths a and b that preserve
    each list's internal order: C(a+b, a)."""
    if a < 0 or b < 0:
        raise ValidationError("shuffle_count needs nonnegative lengths")
    return math.comb(a + b, a)


def variation_count(a: int, b: int) -> int:
    """Number of ordered selections of a items out of b: b!/(b-a)!."""
    if not 0 <= a <= b:
        raise ValidationError("variation_count needs 0 <= a <= b")
    return math.perm(b, a)


def compatible_count(n: int, k: int) -> int:
    """Number of complete rankings of n items preserving a k-chain: n!/k!."""
    if not 0 <= k <= n:
        raise ValidationError("compatible_count needs 0 <= k <= n")
    return math.perm(n, n - k)


def _check_nkr(n: int, k: int, r: int) -> None:
    if not 1 <= k <= n - 1:
        raise ValidationError(f"need 1 <= k <= n-1, got n={n} k={k}")
    if not 0 <= r <= k - 1:
        raise ValidationError(f"need 0 <= r <= k-1, got k={k} r={r}")


def unobserved_win_probability(n: int, k: int, r: int, exact: bool = False):
    """P(unobserved item precedes the observed item at rank r) = (r+1)/(k+1).

    r counts the observed items strictly above the target, 0-based.
    """
    _check_nkr(n, k, r)
    if exact:
        return Fraction(r + 1, k + 1)
    return (r + 1) / (k + 1)


def win_probability_sum(n: int, k: int, r: int, exact: bool = True):
    """Cross-check form of :func:`unobserved_win_probability`.

    Counts compatible completions ranking the unobserved item i above the
    observed item at rank r by the position s of i's head block: choose an
    ordered head of s further unobserved items, insert i (s+1 ways),
    interleave with the r observed items above the target, then permute and
    interleave the two tails. Exact mode returns a Fraction; float mode
    evaluates the terms through lgamma and is accurate to ~1e-9 relative.
    """
    _check_nkr(n, k, r)
    m = n - k  # unobserved items, including i
    if exact:
        total = 0
        for s in range(m):
            total += (
                variation_count(s, m - 1)
                * (s + 1)
                * shuffle_count(r, s + 1)
                * math.factorial(m - s - 1)
                * shuffle_count(m - s - 1, k - r - 1)
            )
        return Fraction(total, compatible_count(n, k))
    log_total_compatible = math.lgamma(n + 1) - math.lgamma(k + 1)
    acc = 0.0
    for s in range(m):
        log_term = (
            math.lgamma(m) - math.lgamma(m - s)          # variations of s out of m-1
            + math.log(s + 1)                            # insertion slots for i
            + _log_comb(r + s + 1, s + 1)                # head interleavings
            + math.lgamma(m - s)                         # (m-s-1)! tail permutations
            + _log_comb(n - s - r - 2, m - s - 1)        # tail interleavings
        )
        acc += math.exp(log_term - log_total_compatible)
    return acc


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@dataclass(frozen=True)
class ImputationTable:
    """Precomputed win probabilities for every (n, k, r) with n <= n_max.

    The value only depends on (k, r), so storage is a triangular (k, r) array;
    lookups validate the full triple. Values are exact Fractions for
    n <= exact_threshold and floats beyond.
    """

    n_max: int
    exact_threshold: int
    _rows: tuple[tuple[Fraction, ...], ...]

    def lookup(self, n: int, k: int, r: int):
        if not 2 <= n <= self.n_max:
            raise ValidationError(f"n={n} outside table range [2, {self.n_max}]")
        _check_nkr(n, k, r)
        value = self._rows[k - 1][r]
        if n <= self.exact_threshold:
            return value
        return float(value)

    def entries(self) -> Iterator[tuple[int, int, int, Fraction | float]]:
        """All (n, k, r, value) triples covered by the table."""
        for n in range(2, self.n_max + 1):
            for k in range(1, n):
                for r in range(k):
                    yield n, k, r, self.lookup(n, k, r)


def build_imputation_table(
    n_max: int, exact_threshold: int = DEFAULT_EXACT_THRESHOLD
) -> ImputationTable:
    """Fill the table for all valid (n, k, r); work is O(n_max^2)."""
    if n_max < 2:
        raise ValidationError("n_max must be at least 2")
    rows = tuple(
        tuple(Fraction(r + 1, k + 1) for r in range(k)) for k in range(1, n_max)
    )
    return ImputationTable(n_max, exact_threshold, rows)


def enumerate_compatible(pr: PartialRanking) -> list[Ranking]:
    """All complete rankings preserving the chain's relative order.

    Exhaustive (n!/k! results); guarded to universes of at most
    ``MAX_ENUMERATION_UNIVERSE`` systems.
    """
    n = pr.universe_size
    if n > MAX_ENUMERATION_UNIVERSE:
        raise ValidationError(
            f"enumeration is limited to {MAX_ENUMERATION_UNIVERSE} systems, got {n}"
        )
    chain = pr.ordered
    free = pr.unobserved()
    out: list[Ranking] = []
    for positions in itertools.combinations(range(n), len(chain)):
        slots = [-1] * n
        for pos, sys_id in zip(positions, chain):
            slots[pos] = sys_id
        rest = [p for p in range(n) if slots[p] == -1]
        for perm in itertools.permutations(free):
            filled = slots[:]
            for pos, sys_id in zip(rest, perm):
                filled[pos] = sys_id
            out.append(ranking_from_ordering(filled))
    return out


def sample_compatible(
    pr: PartialRanking, seed: int | np.random.Generator | None = None
) -> Ranking:
    """Draw a uniformly random compatible completion.

    Each completion corresponds to exactly one choice of (positions for the
    observed chain, arrangement of the unobserved items), so sampling both
    uniformly yields the uniform distribution over completions.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = pr.universe_size
    chain = np.asarray(pr.ordered, dtype=np.intp)
    k = len(chain)
    filled = np.empty(n, dtype=np.intp)
    taken = np.zeros(n, dtype=bool)
    if k:
        positions = np.sort(rng.choice(n, size=k, replace=False))
        filled[positions] = chain
        taken[positions] = True
    free = np.asarray(pr.unobserved(), dtype=np.intp)
    if free.size:
        filled[~taken] = rng.permutation(free)
    return ranking_from_ordering(filled.tolist())

"""Independent brute-force oracles shared across the test modules.

Everything here recomputes expected values from first principles (exhaustive
enumeration, direct arithmetic) without touching the library's production
code paths, so the tests stay two-sided.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from rankfill import PartialRanking, Ranking


def brute_completions(pr: PartialRanking) -> list[tuple[int, ...]]:
    """All permutations of 0..N-1 preserving the chain order, by filtering."""
    chain = pr.ordered
    out = []
    for perm in itertools.permutations(range(pr.universe_size)):
        pos = {sys_id: p for p, sys_id in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b in zip(chain, chain[1:])):
            out.append(perm)
    return out


def brute_interleavings(a: list, b: list) -> list[tuple]:
    """All order-preserving merges of two disjoint lists."""
    if not a:
        return [tuple(b)]
    if not b:
        return [tuple(a)]
    first_a = [(a[0], *rest) for rest in brute_interleavings(a[1:], b)]
    first_b = [(b[0], *rest) for rest in brute_interleavings(a, b[1:])]
    return first_a + first_b


def brute_pairwise(pr: PartialRanking) -> np.ndarray:
    """Exact win proportions over all compatible completions, via filtering."""
    completions = brute_completions(pr)
    n = pr.universe_size
    total = len(completions)
    counts = np.zeros((n, n), dtype=np.int64)
    for perm in completions:
        pos = {sys_id: p for p, sys_id in enumerate(perm)}
        for i in range(n):
            for j in range(n):
                if i != j and pos[i] < pos[j]:
                    counts[i, j] += 1
    entries = np.full((n, n), Fraction(1, 2), dtype=object)
    for i in range(n):
        for j in range(n):
            if i != j:
                entries[i, j] = Fraction(int(counts[i, j]), total)
    return entries


def brute_tau(r1: Ranking, r2: Ranking) -> float:
    """Kendall tau-a by explicit double loop over pairs."""
    n = r1.universe_size
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            d1 = r1.rank_of[i] - r1.rank_of[j]
            d2 = r2.rank_of[i] - r2.rank_of[j]
            if d1 * d2 > 0:
                concordant += 1
            else:
                discordant += 1
    return (concordant - discordant) / (n * (n - 1) / 2)


def random_partial(rng: np.random.Generator, n_max: int = 8) -> PartialRanking:
    """A random partial ranking with universe size 2..n_max."""
    n = int(rng.integers(2, n_max + 1))
    k = int(rng.integers(0, n + 1))
    chain = rng.permutation(n)[:k]
    return PartialRanking(n, tuple(int(x) for x in chain))

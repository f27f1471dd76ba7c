"""Core domain types: partial rankings, complete rankings, and score containers.

System ids are dense integers in [0, N). Scores are "higher is better"
everywhere; lower-is-better metrics must be negated at ingestion. Absence is
explicit (a present 0.0 is a real score), and exact score ties break by
ascending system id so every derived ordering is deterministic.

All types are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "ValidationError",
    "PartialRanking",
    "Ranking",
    "ScoreTable",
    "ScoreTensor",
    "ranking_from_ordering",
    "partial_from_scores",
    "partial_from_masked",
    "task_partials",
    "instance_partials",
    "relabel_systems",
]


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def _frozen_array(arr: np.ndarray, dtype=None) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class PartialRanking:
    """A strict ordering, best first, of a subset of the systems 0..N-1.

    Systems not listed in ``ordered`` are unobserved. An empty chain is legal
    and carries no information.
    """

    universe_size: int
    ordered: tuple[int, ...]

    def __post_init__(self) -> None:
        chain = tuple(int(x) for x in self.ordered)
        object.__setattr__(self, "ordered", chain)
        if self.universe_size < 0:
            raise ValidationError("universe_size must be nonnegative")
        if len(set(chain)) != len(chain):
            raise ValidationError("duplicate system id in partial ranking")
        if chain and (min(chain) < 0 or max(chain) >= self.universe_size):
            raise ValidationError("system id out of range for universe")

    @property
    def observed_count(self) -> int:
        return len(self.ordered)

    def unobserved(self) -> tuple[int, ...]:
        observed = set(self.ordered)
        return tuple(i for i in range(self.universe_size) if i not in observed)


@dataclass(frozen=True)
class Ranking:
    """A total order of all N systems, best first, with its inverse view.

    ``rank_of[i]`` is the 0-based position of system i (0 = best), so
    ``rank_of[ordering[p]] == p`` for every position p.
    """

    universe_size: int
    ordering: tuple[int, ...]
    rank_of: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        ordering = tuple(int(x) for x in self.ordering)
        object.__setattr__(self, "ordering", ordering)
        n = self.universe_size
        if len(ordering) != n:
            raise ValidationError(f"ordering has {len(ordering)} entries, expected {n}")
        rank = [-1] * n
        for pos, sys_id in enumerate(ordering):
            if not 0 <= sys_id < n:
                raise ValidationError(f"system id {sys_id} out of range [0, {n})")
            if rank[sys_id] != -1:
                raise ValidationError(f"duplicate system id {sys_id} in ordering")
            rank[sys_id] = pos
        object.__setattr__(self, "rank_of", tuple(rank))


def ranking_from_ordering(ordering: Sequence[int]) -> Ranking:
    """Build a Ranking from a best-first permutation of 0..N-1."""
    ordering = tuple(int(x) for x in ordering)
    return Ranking(len(ordering), ordering)


@dataclass(frozen=True)
class ScoreTable:
    """Task-level scores: one optional real score per (system, task) cell.

    ``values`` is an (N, T) float array; ``mask`` marks present cells. Values
    under a False mask are never read.
    """

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self) -> None:
        values = _frozen_array(self.values, dtype=np.float64)
        mask = _frozen_array(self.mask, dtype=bool)
        if values.ndim != 2 or values.shape != mask.shape:
            raise ValidationError("values and mask must be equal-shape 2-D arrays")
        if not np.all(np.isfinite(values[mask])):
            raise ValidationError("present scores must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)

    @property
    def n_systems(self) -> int:
        return self.values.shape[0]

    @property
    def n_tasks(self) -> int:
        return self.values.shape[1]

    def observed_systems(self) -> np.ndarray:
        """Boolean vector: system has at least one present score."""
        return self.mask.any(axis=1)


@dataclass(frozen=True)
class ScoreTensor:
    """Instance-level scores: per task t an (N, K_t) array of optional scores.

    Tasks may have different instance counts. Missingness can cover a whole
    (system, task) pair or any individual cell.
    """

    values: tuple[np.ndarray, ...]
    masks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        values = tuple(_frozen_array(v, dtype=np.float64) for v in self.values)
        masks = tuple(_frozen_array(m, dtype=bool) for m in self.masks)
        if len(values) != len(masks) or not values:
            raise ValidationError("need one (values, mask) pair per task")
        n = values[0].shape[0]
        for v, m in zip(values, masks):
            if v.ndim != 2 or v.shape != m.shape:
                raise ValidationError("per-task values and mask must be equal-shape 2-D arrays")
            if v.shape[0] != n:
                raise ValidationError("all tasks must cover the same system universe")
            if v.shape[1] < 1:
                raise ValidationError("each task needs at least one instance")
            if not np.all(np.isfinite(v[m])):
                raise ValidationError("present scores must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masks", masks)

    @property
    def n_systems(self) -> int:
        return self.values[0].shape[0]

    @property
    def n_tasks(self) -> int:
        return len(self.values)

    @property
    def instance_counts(self) -> tuple[int, ...]:
        return tuple(v.shape[1] for v in self.values)

    def observed_systems(self) -> np.ndarray:
        out = np.zeros(self.n_systems, dtype=bool)
        for m in self.masks:
            out |= m.any(axis=1)
        return out


def partial_from_scores(scores: Sequence[float | None], universe_size: int) -> PartialRanking:
    """Order the observed systems by score, descending, ties by ascending id.

    ``scores`` has one entry per system; None marks an unobserved system.
    NaN for a present score is rejected.
    """
    if len(scores) != universe_size:
        raise ValidationError(f"expected {universe_size} scores, got {len(scores)}")
    observed: list[tuple[float, int]] = []
    for sys_id, s in enumerate(scores):
        if s is None:
            continue
        s = float(s)
        if math.isnan(s):
            raise ValidationError(f"NaN score for system {sys_id}")
        observed.append((s, sys_id))
    observed.sort(key=lambda pair: (-pair[0], pair[1]))
    return PartialRanking(universe_size, tuple(sys_id for _, sys_id in observed))


def partial_from_masked(values: np.ndarray, mask: np.ndarray) -> PartialRanking:
    """Fast array variant of :func:`partial_from_scores` (inputs pre-validated)."""
    obs = np.flatnonzero(mask)
    if obs.size == 0:
        return PartialRanking(len(mask), ())
    order = np.lexsort((obs, -values[obs]))
    return PartialRanking(len(mask), tuple(int(i) for i in obs[order]))


def task_partials(table: ScoreTable) -> Iterator[PartialRanking]:
    """One partial ranking per task, in task order."""
    for t in range(table.n_tasks):
        yield partial_from_masked(table.values[:, t], table.mask[:, t])


def instance_partials(tensor: ScoreTensor) -> Iterator[PartialRanking]:
    """One partial ranking per (task, instance) unit, tasks outer."""
    for v, m in zip(tensor.values, tensor.masks):
        for k in range(v.shape[1]):
            yield partial_from_masked(v[:, k], m[:, k])


def relabel_systems(data: ScoreTable | ScoreTensor, perm: Sequence[int]):
    """Rename system ids: old id i becomes perm[i]. Returns the same type."""
    perm = np.asarray(perm, dtype=np.intp)
    n = data.n_systems
    if perm.shape != (n,) or sorted(perm.tolist()) != list(range(n)):
        raise ValidationError("perm must be a permutation of 0..N-1")
    if isinstance(data, ScoreTable):
        values = np.empty_like(data.values)
        mask = np.empty_like(data.mask)
        values[perm] = data.values
        mask[perm] = data.mask
        return ScoreTable(values, mask)
    values = []
    masks = []
    for v, m in zip(data.values, data.masks):
        nv = np.empty_like(v)
        nm = np.empty_like(m)
        nv[perm] = v
        nm[perm] = m
        values.append(nv)
        masks.append(nm)
    return ScoreTensor(tuple(values), tuple(masks))

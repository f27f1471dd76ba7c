"""Final system rankings: one-level, two-level, and mean aggregation.

One-level ("sigma-l") sums every unit win matrix (per task, or per task and
instance) and applies a single Borda step: system i scores the row sum
sum_j M[i, j], higher is better. Two-level ("sigma-2l") first reduces each
task to a complete ranking by a per-task Borda step, then aggregates the T
rankings by summed rank positions, lower is better. The mean baseline
("mean") averages available scores per system and sorts.

Every tie anywhere breaks by ascending system id so results are reproducible.
Systems observed in no unit still receive a position: imputation floats them
to the middle under the matrix methods, and the mean baseline ranks them last
and flags them in the result metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    Ranking,
    ScoreTable,
    ScoreTensor,
    ValidationError,
    instance_partials,
    ranking_from_ordering,
    task_partials,
)
from .pairwise import AccumulatedMatrix, accumulate

__all__ = [
    "METHODS",
    "AggregateResult",
    "borda_scores",
    "borda_from_matrix",
    "borda_on_rankings",
    "rank_one_level_task",
    "rank_one_level_instance",
    "rank_two_level",
    "rank_by_mean_task",
    "rank_by_mean_instance",
    "rank_dataset",
]

METHODS = ("sigma-l", "sigma-2l", "mean")


@dataclass(frozen=True)
class AggregateResult:
    """A ranking plus the per-system scores that produced it.

    ``scores`` is indexed by system id: accumulated win mass for "sigma-l",
    summed rank positions for "sigma-2l" (lower is better there), and the
    mean score for "mean" (NaN for systems with no observed score).
    ``unobserved`` lists systems that appeared in no aggregation unit.
    """

    method: str
    level: str
    ranking: Ranking
    scores: np.ndarray
    unobserved: tuple[int, ...]


def borda_scores(acc: AccumulatedMatrix) -> np.ndarray:
    """Per-system accumulated win mass (float view of the exact totals)."""
    if acc.row_masses is not None:
        return np.array([float(b) for b in acc.row_masses])
    sums = acc.sums
    return (sums.sum(axis=1) - sums.diagonal()).astype(np.float64)


def borda_from_matrix(acc: AccumulatedMatrix) -> Ranking:
    """Order systems by accumulated win mass, descending, ties by id.

    Uses the exact row masses so mathematically tied systems really hit the
    id tie-break instead of being separated by float rounding.
    """
    if acc.units < 1:
        raise ValidationError("accumulation must contain at least one unit")
    if acc.row_masses is not None:
        masses = acc.row_masses
        order = sorted(range(len(masses)), key=lambda i: (-masses[i], i))
        return ranking_from_ordering(order)
    return _order_descending(borda_scores(acc))


def _order_descending(scores: np.ndarray) -> Ranking:
    n = len(scores)
    order = np.lexsort((np.arange(n), -scores)).tolist()
    return ranking_from_ordering(order)


def borda_on_rankings(rankings: list[Ranking]) -> Ranking:
    """Aggregate complete rankings by summed rank positions, ascending."""
    if not rankings:
        raise ValidationError("need at least one ranking")
    n = rankings[0].universe_size
    for r in rankings:
        if r.universe_size != n:
            raise ValidationError("rankings must share one universe")
    sums = np.zeros(n, dtype=np.int64)
    for r in rankings:
        sums += np.asarray(r.rank_of)
    order = np.lexsort((np.arange(n), sums)).tolist()
    return ranking_from_ordering(order)


def _rank_sums(rankings: list[Ranking]) -> np.ndarray:
    sums = np.zeros(rankings[0].universe_size, dtype=np.int64)
    for r in rankings:
        sums += np.asarray(r.rank_of)
    return sums


def rank_one_level_task(table: ScoreTable) -> AggregateResult:
    """One-level aggregation over per-task partial rankings."""
    if table.n_tasks < 1:
        raise ValidationError("need at least one task")
    acc = accumulate(task_partials(table))
    return AggregateResult(
        method="sigma-l",
        level="task",
        ranking=borda_from_matrix(acc),
        scores=borda_scores(acc),
        unobserved=_never_observed(table),
    )


def rank_one_level_instance(tensor: ScoreTensor) -> AggregateResult:
    """One-level aggregation over per-(task, instance) partial rankings."""
    acc = accumulate(instance_partials(tensor))
    return AggregateResult(
        method="sigma-l",
        level="instance",
        ranking=borda_from_matrix(acc),
        scores=borda_scores(acc),
        unobserved=_never_observed(tensor),
    )


def rank_two_level(tensor: ScoreTensor) -> AggregateResult:
    """Per-task Borda rankings first, then Borda over the T rankings."""
    per_task: list[Ranking] = []
    for values, mask in zip(tensor.values, tensor.masks):
        sub = ScoreTensor((values,), (mask,))
        per_task.append(borda_from_matrix(accumulate(instance_partials(sub))))
    final = borda_on_rankings(per_task)
    return AggregateResult(
        method="sigma-2l",
        level="instance",
        ranking=final,
        scores=_rank_sums(per_task).astype(np.float64),
        unobserved=_never_observed(tensor),
    )


def _never_observed(data: ScoreTable | ScoreTensor) -> tuple[int, ...]:
    observed = data.observed_systems()
    return tuple(int(i) for i in np.flatnonzero(~observed))


def _mean_result(means: np.ndarray, observed: np.ndarray, level: str) -> AggregateResult:
    n = len(means)
    order = sorted(
        range(n),
        key=lambda i: (not observed[i], -means[i] if observed[i] else 0.0, i),
    )
    scores = np.where(observed, means, np.nan)
    return AggregateResult(
        method="mean",
        level=level,
        ranking=ranking_from_ordering(order),
        scores=scores,
        unobserved=tuple(int(i) for i in np.flatnonzero(~observed)),
    )


def rank_by_mean_task(table: ScoreTable) -> AggregateResult:
    """Mean of present task scores per system, descending; scoreless last."""
    if table.n_tasks < 1:
        raise ValidationError("need at least one task")
    observed = table.observed_systems()
    counts = np.maximum(table.mask.sum(axis=1), 1)
    means = np.where(table.mask, table.values, 0.0).sum(axis=1) / counts
    return _mean_result(means, observed, "task")


def rank_by_mean_instance(tensor: ScoreTensor) -> AggregateResult:
    """Per-task mean over present cells, then mean over contributing tasks."""
    n = tensor.n_systems
    task_mean_sum = np.zeros(n)
    task_count = np.zeros(n, dtype=np.int64)
    for values, mask in zip(tensor.values, tensor.masks):
        cells = mask.sum(axis=1)
        has_any = cells > 0
        means = np.where(mask, values, 0.0).sum(axis=1) / np.maximum(cells, 1)
        task_mean_sum[has_any] += means[has_any]
        task_count += has_any
    observed = task_count > 0
    means = task_mean_sum / np.maximum(task_count, 1)
    return _mean_result(means, observed, "instance")


def rank_dataset(data: ScoreTable | ScoreTensor, method: str) -> AggregateResult:
    """Dispatch a method name onto a dataset of matching granularity."""
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; choose from {METHODS}")
    if isinstance(data, ScoreTable):
        if method == "sigma-l":
            return rank_one_level_task(data)
        if method == "mean":
            return rank_by_mean_task(data)
        raise ValidationError("sigma-2l needs instance-level data")
    if method == "sigma-l":
        return rank_one_level_instance(data)
    if method == "sigma-2l":
        return rank_two_level(data)
    return rank_by_mean_instance(data)

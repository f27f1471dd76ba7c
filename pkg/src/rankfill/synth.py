"""Synthetic benchmark generation and the two corruption operators.

Scores for system n are iid Gumbel draws centered at phi * n with scale
beta, so the difference between neighbouring systems is logistic with mean
phi: phi = 0 makes all systems exchangeable, phi = 1 gives a near-clean
consensus ranking with higher ids better. Corruptions either remove a
proportion eta of (system, task) pairs (entire tasks for a system, taking
every instance with them at instance granularity) or rescale one task's
scores by a positive factor, which leaves every induced partial ranking
unchanged.

All operations are deterministic given their seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ScoreTable, ScoreTensor, ValidationError

__all__ = [
    "GumbelConfig",
    "generate_gumbel",
    "corrupt_missing_task",
    "corrupt_missing_instance",
    "scale_task",
    "removal_count",
]


@dataclass(frozen=True)
class GumbelConfig:
    """Shape and dispersion of a synthetic benchmark."""

    systems: int
    tasks: int
    instances: int
    phi: float
    beta: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("systems", "tasks", "instances", "seed"):
            if not isinstance(getattr(self, name), int):
                raise ValidationError(f"{name} must be an integer")
        if min(self.systems, self.tasks, self.instances) < 1:
            raise ValidationError("systems, tasks and instances must be >= 1")
        if not 0.0 <= self.phi <= 1.0:
            raise ValidationError("phi must lie in [0, 1]")
        if self.beta <= 0.0:
            raise ValidationError("beta must be positive")


def generate_gumbel(cfg: GumbelConfig) -> ScoreTensor:
    """Draw the full (systems, tasks, instances) score tensor, no missing cells."""
    rng = np.random.default_rng(cfg.seed)
    loc = cfg.phi * np.arange(cfg.systems, dtype=np.float64)[:, None, None]
    draws = rng.gumbel(loc=loc, scale=cfg.beta, size=(cfg.systems, cfg.tasks, cfg.instances))
    values = tuple(np.ascontiguousarray(draws[:, t, :]) for t in range(cfg.tasks))
    masks = tuple(np.ones((cfg.systems, cfg.instances), dtype=bool) for _ in range(cfg.tasks))
    return ScoreTensor(values, masks)


def removal_count(eta: float, cells: int) -> int:
    """Number of cells to remove: eta * cells rounded to nearest, clamped."""
    if not 0.0 <= eta <= 1.0:
        raise ValidationError("eta must lie in [0, 1]")
    return int(min(max(np.floor(eta * cells + 0.5), 0), cells))


def corrupt_missing_task(table: ScoreTable, eta: float, seed: int | None = None) -> ScoreTable:
    """Blank a uniform sample of round(eta * N * T) (system, task) cells."""
    n, t = table.n_systems, table.n_tasks
    count = removal_count(eta, n * t)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(n * t, size=count, replace=False)
    mask = table.mask.copy()
    mask.flat[chosen] = False
    values = table.values.copy()
    values[~mask] = np.nan
    return ScoreTable(values, mask)


def corrupt_missing_instance(tensor: ScoreTensor, eta: float, seed: int | None = None) -> ScoreTensor:
    """Blank every instance of round(eta * N * T) uniformly chosen (system, task) pairs."""
    n, t = tensor.n_systems, tensor.n_tasks
    count = removal_count(eta, n * t)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(n * t, size=count, replace=False)
    drop = np.zeros((n, t), dtype=bool)
    drop.flat[chosen] = True
    values = []
    masks = []
    for task, (v, m) in enumerate(zip(tensor.values, tensor.masks)):
        nv = v.copy()
        nm = m.copy()
        nm[drop[:, task], :] = False
        nv[~nm] = np.nan
        values.append(nv)
        masks.append(nm)
    return ScoreTensor(tuple(values), tuple(masks))


def scale_task(data: ScoreTable | ScoreTensor, task: int, factor: float):
    """Multiply one task's present scores by a positive factor."""
    if factor <= 0.0:
        raise ValidationError("scale factor must be positive")
    if not 0 <= task < data.n_tasks:
        raise ValidationError(f"task index {task} out of range")
    if isinstance(data, ScoreTable):
        values = data.values.copy()
        col = values[:, task]
        col[data.mask[:, task]] *= factor
        return ScoreTable(values, data.mask)
    values = list(data.values)
    scaled = values[task].copy()
    scaled[data.masks[task]] *= factor
    values[task] = scaled
    return ScoreTensor(tuple(values), data.masks)

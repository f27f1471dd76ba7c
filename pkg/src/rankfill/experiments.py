"""Ranking-comparison metrics and the robustness / agreement experiment drivers.

Robustness follows one method across corruption levels: for each eta and
repeat the dataset is corrupted with a derived seed, re-aggregated, and
compared by Kendall tau against the same method's full-data ranking.
Agreement corrupts once per (eta, repeat) and compares the rankings of every
requested method pair on that shared corrupted dataset.

Per-repeat seeds are a pure function of (base_seed, eta index, repeat), so
curves are reproducible bit for bit and repeats can run in any order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .aggregate import METHODS, rank_dataset
from .model import Ranking, ScoreTable, ScoreTensor, ValidationError
from .synth import corrupt_missing_instance, corrupt_missing_task

__all__ = [
    "kendall_tau",
    "topk_same",
    "derive_seed",
    "RobustnessSample",
    "AgreementSample",
    "robustness_curve",
    "agreement_analysis",
    "summarize_robustness",
]


def kendall_tau(r1: Ranking, r2: Ranking) -> float:
    """Kendall tau-a between two complete rankings of the same universe."""
    if r1.universe_size != r2.universe_size:
        raise ValidationError("rankings must share one universe")
    n = r1.universe_size
    if n < 2:
        raise ValidationError("tau needs at least two systems")
    a = np.asarray(r1.rank_of)
    b = np.asarray(r2.rank_of)
    concordance = np.sign(a[:, None] - a[None, :]) * np.sign(b[:, None] - b[None, :])
    iu = np.triu_indices(n, 1)
    return float(concordance[iu].sum() / (n * (n - 1) // 2))


def topk_same(r1: Ranking, r2: Ranking, k: int) -> bool:
    """True iff both rankings contain the same set of k best systems."""
    if r1.universe_size != r2.universe_size:
        raise ValidationError("rankings must share one universe")
    if not 1 <= k <= r1.universe_size:
        raise ValidationError(f"k must lie in [1, {r1.universe_size}]")
    return set(r1.ordering[:k]) == set(r2.ordering[:k])


def derive_seed(base_seed: int, *indices: int) -> int:
    """Stable 64-bit child seed for one (experiment, cell) coordinate."""
    state = np.random.SeedSequence([int(base_seed), *map(int, indices)])
    return int(state.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class RobustnessSample:
    eta: float
    repeat: int
    method: str
    tau: float


@dataclass(frozen=True)
class AgreementSample:
    eta: float
    repeat: int
    method_a: str
    method_b: str
    tau: float
    top1_same: bool
    top3_same: bool


def _check_methods(data: ScoreTable | ScoreTensor, methods: Sequence[str]) -> None:
    if not methods:
        raise ValidationError("need at least one method")
    for m in methods:
        if m not in METHODS:
            raise ValidationError(f"unknown method {m!r}; choose from {METHODS}")
    if isinstance(data, ScoreTable) and "sigma-2l" in methods:
        raise ValidationError("sigma-2l needs instance-level data")


def _corrupt(data: ScoreTable | ScoreTensor, eta: float, seed: int):
    if isinstance(data, ScoreTable):
        return corrupt_missing_task(data, eta, seed)
    return corrupt_missing_instance(data, eta, seed)


def robustness_curve(
    data: ScoreTable | ScoreTensor,
    methods: Sequence[str],
    etas: Sequence[float],
    repeats: int,
    base_seed: int,
) -> list[RobustnessSample]:
    """Tau against each method's own full-data ranking, per eta and repeat.

    The corruption draw is shared by all methods within one (eta, repeat)
    cell so methods are compared on identical removals.
    """
    _check_methods(data, methods)
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    reference = {m: rank_dataset(data, m).ranking for m in methods}
    samples: list[RobustnessSample] = []
    for eta_index, eta in enumerate(etas):
        for repeat in range(repeats):
            corrupted = _corrupt(data, eta, derive_seed(base_seed, eta_index, repeat))
            for m in methods:
                tau = kendall_tau(rank_dataset(corrupted, m).ranking, reference[m])
                samples.append(RobustnessSample(float(eta), repeat, m, tau))
    return samples


def agreement_analysis(
    data: ScoreTable | ScoreTensor,
    methods: Sequence[str],
    etas: Sequence[float],
    repeats: int,
    base_seed: int,
) -> list[AgreementSample]:
    """Pairwise method agreement (tau, top-1/top-3 set identity) per corruption."""
    _check_methods(data, methods)
    if len(methods) < 2:
        raise ValidationError("agreement needs at least two methods")
    if data.n_systems < 3:
        raise ValidationError("top-3 agreement needs at least three systems")
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    samples: list[AgreementSample] = []
    for eta_index, eta in enumerate(etas):
        for repeat in range(repeats):
            corrupted = _corrupt(data, eta, derive_seed(base_seed, eta_index, repeat))
            rankings = [rank_dataset(corrupted, m).ranking for m in methods]
            for ia in range(len(methods)):
                for ib in range(ia + 1, len(methods)):
                    ra, rb = rankings[ia], rankings[ib]
                    samples.append(
                        AgreementSample(
                            float(eta),
                            repeat,
                            methods[ia],
                            methods[ib],
                            kendall_tau(ra, rb),
                            topk_same(ra, rb, 1),
                            topk_same(ra, rb, 3),
                        )
                    )
    return samples


def summarize_robustness(
    samples: Sequence[RobustnessSample],
) -> list[tuple[float, str, float, float]]:
    """Per (eta, method): mean and sample standard deviation of tau."""
    groups: dict[tuple[float, str], list[float]] = {}
    order: list[tuple[float, str]] = []
    for s in samples:
        key = (s.eta, s.method)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(s.tau)
    out = []
    for eta, method in order:
        taus = np.asarray(groups[(eta, method)])
        std = float(taus.std(ddof=1)) if len(taus) > 1 else 0.0
        out.append((eta, method, float(taus.mean()), std))
    return out

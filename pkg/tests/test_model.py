from __future__ import annotations

import numpy as np
import pytest

from rankfill import (
    PartialRanking,
    Ranking,
    ScoreTable,
    ScoreTensor,
    ValidationError,
    partial_from_scores,
    ranking_from_ordering,
    relabel_systems,
)
from rankfill.model import partial_from_masked


def test_ranking_inverse_examples():
    assert ranking_from_ordering([2, 0, 1]).rank_of == (1, 2, 0)
    assert ranking_from_ordering([0, 1, 2]).rank_of == (0, 1, 2)
    assert ranking_from_ordering([1, 0]).rank_of == (1, 0)


def test_ranking_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 12))
        ordering = tuple(int(x) for x in rng.permutation(n))
        r = ranking_from_ordering(ordering)
        assert r.ordering == ordering
        assert all(r.rank_of[r.ordering[p]] == p for p in range(n))


def test_ranking_rejects_bad_orderings():
    with pytest.raises(ValidationError):
        ranking_from_ordering([0, 0, 1])
    with pytest.raises(ValidationError):
        ranking_from_ordering([0, 3, 1])
    with pytest.raises(ValidationError):
        Ranking(3, (0, 1))


def test_partial_from_scores_examples():
    assert partial_from_scores([0.9, None, 0.5], 3).ordered == (0, 2)
    assert partial_from_scores([None, None], 2).ordered == ()
    assert partial_from_scores([0.5, 0.5, 0.1], 3).ordered == (0, 1, 2)


def test_partial_from_scores_rejects_nan_and_bad_length():
    with pytest.raises(ValidationError):
        partial_from_scores([0.1, float("nan")], 2)
    with pytest.raises(ValidationError):
        partial_from_scores([0.1], 2)


def test_partial_monotone_transform_invariance():
    rng = np.random.default_rng(1)
    for _ in range(30):
        n = int(rng.integers(2, 10))
        scores = [float(s) if rng.random() < 0.7 else None for s in rng.normal(size=n)]
        base = partial_from_scores(scores, n)
        warped = [None if s is None else float(np.exp(3 * s) + 1) for s in scores]
        assert partial_from_scores(warped, n) == base


def test_partial_relabel_equivariance():
    rng = np.random.default_rng(2)
    for _ in range(30):
        n = int(rng.integers(2, 9))
        values = rng.normal(size=n)
        mask = rng.random(size=n) < 0.6
        perm = rng.permutation(n)
        base = partial_from_masked(values, mask)
        relabeled_values = np.empty_like(values)
        relabeled_mask = np.empty_like(mask)
        relabeled_values[perm] = values
        relabeled_mask[perm] = mask
        moved = partial_from_masked(relabeled_values, relabeled_mask)
        # ties are impossible here (continuous draws), so orders must map over
        assert moved.ordered == tuple(int(perm[i]) for i in base.ordered)


def test_partial_ranking_validation():
    with pytest.raises(ValidationError):
        PartialRanking(3, (0, 0))
    with pytest.raises(ValidationError):
        PartialRanking(3, (0, 5))
    assert PartialRanking(4, ()).unobserved() == (0, 1, 2, 3)


def test_score_table_rejects_nonfinite_present_cells():
    values = np.array([[1.0, np.nan]])
    with pytest.raises(ValidationError):
        ScoreTable(values, np.array([[True, True]]))
    # same array is fine when the NaN cell is absent
    table = ScoreTable(values, np.array([[True, False]]))
    assert table.n_systems == 1 and table.n_tasks == 2
    assert not table.values.flags.writeable


def test_score_tensor_shape_validation():
    good = ScoreTensor(
        (np.zeros((2, 3)), np.zeros((2, 1))),
        (np.ones((2, 3), bool), np.ones((2, 1), bool)),
    )
    assert good.instance_counts == (3, 1)
    with pytest.raises(ValidationError):
        ScoreTensor((np.zeros((2, 3)), np.zeros((3, 1))), (np.ones((2, 3), bool), np.ones((3, 1), bool)))


def test_relabel_systems_round_trip():
    rng = np.random.default_rng(3)
    values = rng.normal(size=(4, 3))
    mask = rng.random(size=(4, 3)) < 0.7
    table = ScoreTable(values, mask)
    perm = np.array([2, 0, 3, 1])
    inverse = np.argsort(perm)
    back = relabel_systems(relabel_systems(table, perm), inverse)
    assert np.array_equal(back.mask, table.mask)
    assert np.allclose(back.values[back.mask], table.values[table.mask])

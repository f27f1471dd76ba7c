from __future__ import annotations

import io
import json

import numpy as np
import pytest

from rankfill import ScoreTable, ScoreTensor, ValidationError, rank_by_mean_task, rank_dataset
from rankfill.io import (
    LabeledScores,
    ParseError,
    negate_tasks,
    parse_long_csv,
    parse_wide_matrix,
    ranking_json,
    sniff_level,
    write_confidence_csv,
    write_heatmap_csv,
    write_long_csv,
    write_ranking_csv,
    write_robustness_csv,
)
from rankfill import PartialRanking, accumulate, confidence_report
from rankfill.experiments import RobustnessSample

WIDE_FIXTURE = """Model,Classification,Structured Prediction,Question Answering,Sentence Retrieval
M0,90.3,X,76.3,93.7
M1,90.1,X,75.0,X
M2,89.3,75.5,75.2,92.4
M3,89.0,76.7,73.4,93.3
M4,88.3,X,X,X
M5,X,X,X,X
M6,87.9,75.6,X,91.9
M7,X,X,X,92.6
M8,X,75.4,X,X
M9,88.2,74.6,X,89.0
"""


def test_parse_long_task_level(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("system,task,score\nalpha,t1,0.5\nalpha,t2,0.25\nbeta,t1,0.75\nbeta,t2,0.1\n")
    labeled = parse_long_csv(path, "task")
    assert labeled.system_names == ("alpha", "beta")
    assert labeled.task_names == ("t1", "t2")
    assert labeled.data.mask.all()
    assert labeled.data.values[1, 0] == 0.75


def test_parse_long_missing_row_reduces_observed(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("system,task,score\nalpha,t1,0.5\nalpha,t2,0.25\nbeta,t2,0.1\n")
    labeled = parse_long_csv(path, "task")
    assert labeled.data.mask.tolist() == [[True, True], [False, True]]
    assert labeled.data.mask[:, 0].sum() == 1


def test_parse_long_errors_carry_line_numbers(tmp_path):
    dup = tmp_path / "dup.csv"
    dup.write_text("system,task,score\na,t,1.0\na,t,2.0\n")
    with pytest.raises(ParseError, match="line 3.*duplicate"):
        parse_long_csv(dup, "task")
    bad = tmp_path / "bad.csv"
    bad.write_text("system,task,score\na,t,oops\n")
    with pytest.raises(ParseError, match="line 2.*non-numeric"):
        parse_long_csv(bad, "task")
    nan = tmp_path / "nan.csv"
    nan.write_text("system,task,score\na,t,nan\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_long_csv(nan, "task")
    short = tmp_path / "short.csv"
    short.write_text("system,task,score\na,t\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_long_csv(short, "task")


def test_parse_long_header_mismatch(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("system,task,instance,score\na,t,0,1.0\n")
    with pytest.raises(ParseError, match="expected header"):
        parse_long_csv(path, "task")
    assert sniff_level(path) == "instance"


def test_parse_long_instance_level(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text(
        "system,task,instance,score\n"
        "a,t1,i0,1.0\na,t1,i1,2.0\nb,t1,i0,3.0\nb,t1,i1,4.0\n"
        "a,t2,i0,5.0\n"
    )
    labeled = parse_long_csv(path, "instance")
    tensor = labeled.data
    assert isinstance(tensor, ScoreTensor)
    assert tensor.instance_counts == (2, 1)
    assert tensor.masks[1].tolist() == [[True], [False]]


def test_wide_matrix_fixture_counts_and_values():
    labeled = parse_wide_matrix_from_text(WIDE_FIXTURE)
    table = labeled.data
    assert labeled.system_names == tuple(f"M{i}" for i in range(10))
    assert table.n_systems == 10 and table.n_tasks == 4
    assert int((~table.mask).sum()) == 18
    assert table.values[0, 0] == 90.3
    assert not table.mask[5].any()  # all-X row accepted


def parse_wide_matrix_from_text(text: str):
    import tempfile, pathlib

    with tempfile.TemporaryDirectory() as d:
        p = pathlib.Path(d) / "wide.csv"
        p.write_text(text)
        return parse_wide_matrix(p)


def test_wide_matrix_mean_ranking_matches_printed_result():
    labeled = parse_wide_matrix_from_text(WIDE_FIXTURE)
    result = rank_by_mean_task(labeled.data)
    names = [labeled.system_names[i] for i in result.ranking.ordering]
    # hand-checked means; M2 and M3 tie at 83.1 and break by id; M5 has no
    # scores at all, sinks to the bottom, and is flagged
    assert names == ["M7", "M4", "M0", "M6", "M9", "M2", "M3", "M1", "M8", "M5"]
    assert result.unobserved == (5,)


def test_wide_matrix_rejects_junk_cells():
    text = "sys,t1\nA,fine\n"
    with pytest.raises(ParseError, match="non-numeric"):
        parse_wide_matrix_from_text(text)


def test_wide_matrix_case_insensitive_x_and_empty():
    labeled = parse_wide_matrix_from_text("sys,t1,t2\nA,x,\nB,1.5,2.5\n")
    assert labeled.data.mask.tolist() == [[False, False], [True, True]]


def test_long_round_trip_table(tmp_path):
    rng = np.random.default_rng(70)
    values = rng.normal(size=(4, 3))
    mask = rng.random(size=(4, 3)) < 0.7
    mask[0, 0] = True
    labeled = LabeledScores(
        ScoreTable(values, mask), ("a", "b", "c", "d"), ("t1", "t2", "t3")
    )
    buf = io.StringIO()
    write_long_csv(labeled, buf)
    path = tmp_path / "out.csv"
    path.write_text(buf.getvalue())
    back = parse_long_csv(path, "task")
    # systems or tasks with no present cells at all drop out of the file, so
    # compare on the observed sub-universe
    kept_sys = [i for i in range(4) if mask[i].any()]
    kept_task = [j for j in range(3) if mask[:, j].any()]
    assert back.system_names == tuple(labeled.system_names[i] for i in kept_sys)
    assert back.task_names == tuple(labeled.task_names[j] for j in kept_task)
    sub_vals = values[np.ix_(kept_sys, kept_task)]
    sub_mask = mask[np.ix_(kept_sys, kept_task)]
    assert np.array_equal(back.data.mask, sub_mask)
    assert np.array_equal(back.data.values[sub_mask], sub_vals[sub_mask])


def test_long_round_trip_tensor(tmp_path):
    rng = np.random.default_rng(71)
    values = tuple(rng.normal(size=(3, k)) for k in (2, 4))
    masks = tuple(np.ones((3, k), bool) for k in (2, 4))
    labeled = LabeledScores(ScoreTensor(values, masks), ("a", "b", "c"), ("t1", "t2"))
    buf = io.StringIO()
    write_long_csv(labeled, buf)
    path = tmp_path / "out.csv"
    path.write_text(buf.getvalue())
    back = parse_long_csv(path, "instance")
    assert back.system_names == labeled.system_names
    assert back.data.instance_counts == (2, 4)
    for a, b in zip(back.data.values, values):
        assert np.array_equal(a, b)


def test_negate_tasks_equals_negating_table():
    values = np.array([[1.0, 2.0], [3.0, 4.0]])
    labeled = LabeledScores(ScoreTable(values, np.ones((2, 2), bool)), ("a", "b"), ("t1", "t2"))
    negated = negate_tasks(labeled, ["t2"])
    assert np.array_equal(negated.data.values, np.array([[1.0, -2.0], [3.0, -4.0]]))
    with pytest.raises(ValidationError):
        negate_tasks(labeled, ["nope"])


def test_ranking_json_schema_and_order():
    table = ScoreTable(np.array([[1.0], [2.0]]), np.ones((2, 1), bool))
    result = rank_dataset(table, "sigma-l")
    payload = json.loads(ranking_json(result, ("a", "b")))
    assert list(payload) == [
        "method",
        "level",
        "ordering",
        "system_names",
        "borda_scores",
        "unobserved_systems",
    ]
    assert payload["ordering"] == [1, 0]
    assert payload["borda_scores"] == [0.0, 1.0]
    mean_payload = json.loads(ranking_json(rank_dataset(table, "mean"), ("a", "b")))
    assert mean_payload["borda_scores"] is None


def test_csv_writers_emit_pinned_headers():
    table = ScoreTable(np.array([[1.0], [2.0]]), np.ones((2, 1), bool))
    result = rank_dataset(table, "sigma-l")
    buf = io.StringIO()
    write_ranking_csv(result, ("a", "b"), buf)
    assert buf.getvalue().splitlines()[0] == "position,system_id,system_name,score"

    buf = io.StringIO()
    write_robustness_csv([RobustnessSample(0.1, 0, "mean", 1.0)], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "eta,repeat,method,tau"
    assert lines[1] == "0.1,0,mean,1.0"

    report = confidence_report(accumulate([PartialRanking(2, (0, 1))] * 4), 0.5)
    buf = io.StringIO()
    write_confidence_csv(report, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "i,j,m_hat,z,c,verdict,margin"
    assert lines[1].startswith("0,1,1.0,4,")

    buf = io.StringIO()
    write_heatmap_csv(np.array([[0.0, 0.25], [-0.25, 0.0]]), ("b", "a"), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "system,b,a"
    assert lines[1] == "b,0.0,0.25"


def test_confidence_csv_blank_when_never_compared():
    report = confidence_report(accumulate([PartialRanking(2, (0,))]), 0.5)
    buf = io.StringIO()
    write_confidence_csv(report, buf)
    assert buf.getvalue().splitlines()[1] == "0,1,,0,,undecided,0.0"

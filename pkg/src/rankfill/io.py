"""File formats: long/wide score CSVs in, rankings and report tables out.

Long format has header ``system,task,score`` (task level) or
``system,task,instance,score`` (instance level); missing cells are simply
absent rows. Wide format has one system per row, one task per column, and a
case-insensitive ``X`` or an empty cell for a missing score. Names are
interned to dense ids in first-appearance order and carried alongside the
data so emitted artifacts are self-describing.

Output schemas (headers are part of the contract):
    ranking JSON   {"method", "level", "ordering", "system_names",
                    "borda_scores", "unobserved_systems"}
    robustness CSV eta,repeat,method,tau
    agreement CSV  eta,repeat,method_a,method_b,tau,top1_same,top3_same
    confidence CSV i,j,m_hat,z,c,verdict,margin
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .aggregate import AggregateResult
from .confidence import ConfidenceReport, pair_margin
from .model import ScoreTable, ScoreTensor, ValidationError

__all__ = [
    "ParseError",
    "LabeledScores",
    "sniff_level",
    "parse_long_csv",
    "parse_wide_matrix",
    "negate_tasks",
    "write_long_csv",
    "write_scores_json",
    "ranking_json",
    "write_ranking_csv",
    "write_robustness_csv",
    "write_robustness_json",
    "write_agreement_csv",
    "write_agreement_json",
    "write_confidence_csv",
    "write_confidence_json",
    "write_heatmap_csv",
]

LONG_TASK_HEADER = ["system", "task", "score"]
LONG_INSTANCE_HEADER = ["system", "task", "instance", "score"]


class ParseError(ValidationError):
    """Malformed input file; the message names the offending line."""


@dataclass(frozen=True)
class LabeledScores:
    """A score container plus the names behind its dense ids."""

    data: ScoreTable | ScoreTensor
    system_names: tuple[str, ...]
    task_names: tuple[str, ...]

    @property
    def level(self) -> str:
        return "task" if isinstance(self.data, ScoreTable) else "instance"


def _read_rows(path: str | Path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        rows = [(reader.line_num, row) for row in reader if row]
    return [h.strip() for h in header], rows


def sniff_level(path: str | Path) -> str:
    """Decide task vs instance level from a long CSV header (header read only)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
    header = [h.strip() for h in header]
    if header == LONG_TASK_HEADER:
        return "task"
    if header == LONG_INSTANCE_HEADER:
        return "instance"
    raise ParseError(f"{path}: unrecognized header {header!r}")


def _parse_score(raw: str, path, line: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"{path}: line {line}: non-numeric score {raw!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"{path}: line {line}: non-finite score {raw!r}")
    return value


class _Interner:
    def __init__(self) -> None:
        self.ids: dict[str, int] = {}

    def intern(self, name: str) -> int:
        if name not in self.ids:
            self.ids[name] = len(self.ids)
        return self.ids[name]

    def names(self) -> tuple[str, ...]:
        return tuple(self.ids)


def parse_long_csv(path: str | Path, level: str) -> LabeledScores:
    """Read a long-format score file at the requested granularity."""
    if level not in ("task", "instance"):
        raise ValidationError(f"unknown level {level!r}")
    header, rows = _read_rows(path)
    expected = LONG_TASK_HEADER if level == "task" else LONG_INSTANCE_HEADER
    if header != expected:
        raise ParseError(f"{path}: expected header {expected!r}, found {header!r}")
    systems = _Interner()
    tasks = _Interner()
    instances: dict[int, _Interner] = {}
    cells: dict[tuple, float] = {}
    for line, row in rows:
        if len(row) != len(expected):
            raise ParseError(f"{path}: line {line}: expected {len(expected)} fields, got {len(row)}")
        sys_id = systems.intern(row[0])
        task_id = tasks.intern(row[1])
        if level == "task":
            key: tuple = (sys_id, task_id)
        else:
            inst_id = instances.setdefault(task_id, _Interner()).intern(row[2])
            key = (sys_id, task_id, inst_id)
        if key in cells:
            raise ParseError(f"{path}: line {line}: duplicate cell for {row[:-1]!r}")
        cells[key] = _parse_score(row[-1], path, line)
    n, t = len(systems.ids), len(tasks.ids)
    if n == 0 or t == 0:
        raise ParseError(f"{path}: no score rows")
    if level == "task":
        values = np.full((n, t), np.nan)
        mask = np.zeros((n, t), dtype=bool)
        for (i, j), score in cells.items():
            values[i, j] = score
            mask[i, j] = True
        data: ScoreTable | ScoreTensor = ScoreTable(values, mask)
    else:
        counts = [len(instances[j].ids) for j in range(t)]
        values_t = [np.full((n, k), np.nan) for k in counts]
        masks_t = [np.zeros((n, k), dtype=bool) for k in counts]
        for (i, j, k), score in cells.items():
            values_t[j][i, k] = score
            masks_t[j][i, k] = True
        data = ScoreTensor(tuple(values_t), tuple(masks_t))
    return LabeledScores(data, systems.names(), tasks.names())


def parse_wide_matrix(path: str | Path) -> LabeledScores:
    """Read a wide score matrix: system rows, task columns, X/empty missing."""
    header, rows = _read_rows(path)
    if len(header) < 2:
        raise ParseError(f"{path}: need a system column and at least one task column")
    task_names = tuple(header[1:])
    system_names: list[str] = []
    seen: set[str] = set()
    scores: list[list[float]] = []
    present: list[list[bool]] = []
    for line, row in rows:
        if len(row) != len(header):
            raise ParseError(f"{path}: line {line}: expected {len(header)} fields, got {len(row)}")
        name = row[0].strip()
        if name in seen:
            raise ParseError(f"{path}: line {line}: duplicate system {name!r}")
        seen.add(name)
        system_names.append(name)
        vals: list[float] = []
        mask: list[bool] = []
        for cell in row[1:]:
            cell = cell.strip()
            if cell == "" or cell.lower() == "x":
                vals.append(np.nan)
                mask.append(False)
            else:
                vals.append(_parse_score(cell, path, line))
                mask.append(True)
        scores.append(vals)
        present.append(mask)
    if not system_names:
        raise ParseError(f"{path}: no system rows")
    table = ScoreTable(np.asarray(scores), np.asarray(present))
    return LabeledScores(table, tuple(system_names), task_names)


def negate_tasks(labeled: LabeledScores, task_names: Sequence[str]) -> LabeledScores:
    """Negate present scores of the named tasks (for lower-is-better metrics)."""
    wanted = set(task_names)
    unknown = wanted - set(labeled.task_names)
    if unknown:
        raise ValidationError(f"unknown task names: {sorted(unknown)}")
    indices = [i for i, name in enumerate(labeled.task_names) if name in wanted]
    data = labeled.data
    if isinstance(data, ScoreTable):
        values = data.values.copy()
        for j in indices:
            col = values[:, j]
            col[data.mask[:, j]] *= -1.0
        new_data: ScoreTable | ScoreTensor = ScoreTable(values, data.mask)
    else:
        values_t = list(data.values)
        for j in indices:
            arr = values_t[j].copy()
            arr[data.masks[j]] *= -1.0
            values_t[j] = arr
        new_data = ScoreTensor(tuple(values_t), data.masks)
    return LabeledScores(new_data, labeled.system_names, labeled.task_names)


def _fmt(value: float) -> str:
    return repr(float(value))


def write_long_csv(labeled: LabeledScores, stream: IO[str]) -> None:
    """Emit the long format; absent cells become absent rows."""
    writer = csv.writer(stream, lineterminator="\n")
    data = labeled.data
    if isinstance(data, ScoreTable):
        writer.writerow(LONG_TASK_HEADER)
        for i in range(data.n_systems):
            for j in range(data.n_tasks):
                if data.mask[i, j]:
                    writer.writerow(
                        [labeled.system_names[i], labeled.task_names[j], _fmt(data.values[i, j])]
                    )
        return
    writer.writerow(LONG_INSTANCE_HEADER)
    for i in range(data.n_systems):
        for j in range(data.n_tasks):
            v, m = data.values[j], data.masks[j]
            for k in range(v.shape[1]):
                if m[i, k]:
                    writer.writerow(
                        [labeled.system_names[i], labeled.task_names[j], str(k), _fmt(v[i, k])]
                    )


def write_scores_json(labeled: LabeledScores, stream: IO[str]) -> None:
    """JSON mirror of the long format (one row list per present cell)."""
    data = labeled.data
    if isinstance(data, ScoreTable):
        columns = LONG_TASK_HEADER
        rows = [
            [labeled.system_names[i], labeled.task_names[j], float(data.values[i, j])]
            for i in range(data.n_systems)
            for j in range(data.n_tasks)
            if data.mask[i, j]
        ]
    else:
        columns = LONG_INSTANCE_HEADER
        rows = [
            [labeled.system_names[i], labeled.task_names[j], k, float(data.values[j][i, k])]
            for i in range(data.n_systems)
            for j in range(data.n_tasks)
            for k in range(data.values[j].shape[1])
            if data.masks[j][i, k]
        ]
    json.dump({"level": labeled.level, "columns": columns, "rows": rows}, stream)
    stream.write("\n")


def ranking_json(result: AggregateResult, system_names: Sequence[str]) -> str:
    """The ranking artifact; ``borda_scores`` is null for the mean baseline."""
    if result.method == "mean":
        scores = None
    else:
        scores = [float(s) for s in result.scores]
    payload = {
        "method": result.method,
        "level": result.level,
        "ordering": list(result.ranking.ordering),
        "system_names": list(system_names),
        "borda_scores": scores,
        "unobserved_systems": list(result.unobserved),
    }
    return json.dumps(payload)


def write_ranking_csv(result: AggregateResult, system_names: Sequence[str], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["position", "system_id", "system_name", "score"])
    for position, sys_id in enumerate(result.ranking.ordering):
        score = result.scores[sys_id]
        writer.writerow(
            [position, sys_id, system_names[sys_id], "" if np.isnan(score) else _fmt(score)]
        )


def write_robustness_csv(samples, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["eta", "repeat", "method", "tau"])
    for s in samples:
        writer.writerow([_fmt(s.eta), s.repeat, s.method, _fmt(s.tau)])


def write_robustness_json(samples, stream: IO[str]) -> None:
    rows = [
        {"eta": s.eta, "repeat": s.repeat, "method": s.method, "tau": s.tau}
        for s in samples
    ]
    json.dump({"rows": rows}, stream)
    stream.write("\n")


def write_agreement_csv(samples, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["eta", "repeat", "method_a", "method_b", "tau", "top1_same", "top3_same"])
    for s in samples:
        writer.writerow(
            [
                _fmt(s.eta),
                s.repeat,
                s.method_a,
                s.method_b,
                _fmt(s.tau),
                int(s.top1_same),
                int(s.top3_same),
            ]
        )


def write_agreement_json(samples, stream: IO[str]) -> None:
    rows = [
        {
            "eta": s.eta,
            "repeat": s.repeat,
            "method_a": s.method_a,
            "method_b": s.method_b,
            "tau": s.tau,
            "top1_same": s.top1_same,
            "top3_same": s.top3_same,
        }
        for s in samples
    ]
    json.dump({"rows": rows}, stream)
    stream.write("\n")


_VERDICT_NAMES = {1: "i-wins", -1: "j-wins", 0: "undecided"}


def write_confidence_csv(report: ConfidenceReport, stream: IO[str]) -> None:
    """One row per unordered pair (i < j by id); blank m_hat/c when never compared."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["i", "j", "m_hat", "z", "c", "verdict", "margin"])
    n = report.n_systems
    for i in range(n):
        for j in range(i + 1, n):
            z = int(report.direct_counts[i, j])
            if z > 0:
                m_hat = _fmt(report.m_hat[i, j])
                c = _fmt(report.halfwidth[i, j])
            else:
                m_hat = ""
                c = ""
            writer.writerow(
                [
                    i,
                    j,
                    m_hat,
                    z,
                    c,
                    _VERDICT_NAMES[int(report.verdict[i, j])],
                    _fmt(pair_margin(report, i, j)),
                ]
            )


def write_confidence_json(report: ConfidenceReport, system_names: Sequence[str], stream: IO[str]) -> None:
    pairs = []
    n = report.n_systems
    for i in range(n):
        for j in range(i + 1, n):
            z = int(report.direct_counts[i, j])
            pairs.append(
                {
                    "i": i,
                    "j": j,
                    "m_hat": float(report.m_hat[i, j]) if z else None,
                    "z": z,
                    "c": float(report.halfwidth[i, j]) if z else None,
                    "verdict": _VERDICT_NAMES[int(report.verdict[i, j])],
                    "margin": pair_margin(report, i, j),
                }
            )
    payload = {
        "delta": report.delta,
        "two_sided": report.two_sided,
        "system_names": list(system_names),
        "pairs": pairs,
    }
    json.dump(payload, stream)
    stream.write("\n")


def write_heatmap_csv(
    margins: np.ndarray, ordered_names: Sequence[str], stream: IO[str]
) -> None:
    """Signed-margin matrix, rows and columns best to worst."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["system", *ordered_names])
    for name, row in zip(ordered_names, margins):
        writer.writerow([name, *(_fmt(v) for v in row)])

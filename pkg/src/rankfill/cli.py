"""Command-line interface.

Exit codes: 0 on success, 1 on usage/validation/parse errors, 2 on internal
invariant violations. All outputs are deterministic given flags plus --seed
(default from the RANK_SEED environment variable, else 0).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import io as rio
from .aggregate import METHODS, borda_from_matrix, rank_dataset
from .confidence import confidence_report, significance_margins
from .model import ScoreTable, ValidationError, instance_partials, task_partials
from .pairwise import accumulate
from .experiments import agreement_analysis, robustness_curve
from .synth import (
    GumbelConfig,
    corrupt_missing_instance,
    corrupt_missing_task,
    generate_gumbel,
    scale_task,
)


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 1 (not 2)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("RANK_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"RANK_SEED must be an integer, got {raw!r}") from None


def _add_common(sub: argparse.ArgumentParser, default_format: str) -> None:
    sub.add_argument("--seed", type=int, default=None, help="RNG seed (default: RANK_SEED or 0)")
    sub.add_argument("--output", type=Path, default=None, help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankfill", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    agg = commands.add_parser("aggregate", help="rank systems from a score file")
    agg.add_argument("--method", choices=METHODS, required=True)
    agg.add_argument("--level", choices=("task", "instance"), default=None)
    agg.add_argument("--input", type=Path, required=True)
    agg.add_argument("--wide", action="store_true", help="input is a wide matrix (task level)")
    agg.add_argument(
        "--negate-metrics",
        default=None,
        metavar="LIST",
        help="comma-separated task names whose scores are lower-is-better",
    )
    _add_common(agg, "json")

    conf = commands.add_parser("confidence", help="pairwise confidence report")
    conf.add_argument("--input", type=Path, required=True)
    conf.add_argument("--level", choices=("task", "instance"), default=None)
    conf.add_argument("--wide", action="store_true", help="input is a wide matrix (task level)")
    conf.add_argument("--delta", type=float, required=True)
    conf.add_argument("--strict-two-sided", action="store_true")
    conf.add_argument("--heatmap", type=Path, default=None, help="write the margin matrix CSV here")
    conf.add_argument("--plot", type=Path, default=None, help="render the margin heatmap here")
    _add_common(conf, "csv")

    synth = commands.add_parser("synth", help="generate a synthetic score tensor")
    synth.add_argument("--systems", type=int, required=True)
    synth.add_argument("--tasks", type=int, required=True)
    synth.add_argument("--instances", type=int, required=True)
    synth.add_argument("--phi", type=float, required=True)
    synth.add_argument("--beta", type=float, default=1.0)
    _add_common(synth, "csv")

    corrupt = commands.add_parser("corrupt", help="remove a proportion of the data")
    corrupt.add_argument("--eta", type=float, required=True)
    corrupt.add_argument("--level", choices=("task", "instance"), default=None)
    corrupt.add_argument("--input", type=Path, required=True)
    _add_common(corrupt, "csv")

    scale = commands.add_parser("scale", help="rescale one task's scores")
    scale.add_argument("--task", required=True, help="task name (or index) to rescale")
    scale.add_argument("--lambda", dest="lambda_scale", type=float, required=True)
    scale.add_argument("--input", type=Path, required=True)
    _add_common(scale, "csv")

    robust = commands.add_parser("robustness", help="tau-vs-eta robustness experiment")
    robust.add_argument("--input", type=Path, default=None)
    robust.add_argument("--synth-config", type=Path, default=None, help="JSON GumbelConfig")
    robust.add_argument("--methods", required=True, metavar="LIST")
    robust.add_argument("--etas", required=True, metavar="LIST")
    robust.add_argument("--repeats", type=int, required=True)
    robust.add_argument("--plot", type=Path, default=None)
    _add_common(robust, "csv")

    agree = commands.add_parser("agreement", help="between-method agreement experiment")
    agree.add_argument("--input", type=Path, default=None)
    agree.add_argument("--synth-config", type=Path, default=None, help="JSON GumbelConfig")
    agree.add_argument("--methods", required=True, metavar="LIST")
    agree.add_argument("--etas", required=True, metavar="LIST")
    agree.add_argument("--repeats", type=int, required=True)
    agree.add_argument("--plot", type=Path, default=None)
    _add_common(agree, "csv")

    return parser


@contextmanager
def _open_output(path: Path | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _load(args) -> rio.LabeledScores:
    level = getattr(args, "level", None)
    if getattr(args, "wide", False):
        if level == "instance":
            raise ValidationError("wide matrices are task-level")
        return rio.parse_wide_matrix(args.input)
    return rio.parse_long_csv(args.input, level or rio.sniff_level(args.input))


def _seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _split_list(raw: str) -> list[str]:
    items = [part.strip() for part in raw.split(",") if part.strip()]
    if not items:
        raise ValidationError("empty list argument")
    return items


def _experiment_data(args) -> rio.LabeledScores:
    if (args.input is None) == (args.synth_config is None):
        raise ValidationError("provide exactly one of --input / --synth-config")
    if args.input is not None:
        return _load(args)
    with open(args.synth_config, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.synth_config}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ValidationError(f"{args.synth_config}: expected a JSON object")
    allowed = {"systems", "tasks", "instances", "phi", "beta", "seed"}
    unknown = set(raw) - allowed
    if unknown:
        raise ValidationError(f"unknown synth-config keys: {sorted(unknown)}")
    raw.setdefault("seed", _seed(args))
    try:
        cfg = GumbelConfig(**raw)
    except TypeError as exc:
        raise ValidationError(f"{args.synth_config}: {exc}") from None
    tensor = generate_gumbel(cfg)
    return _labeled_tensor(tensor)


def _labeled_tensor(tensor) -> rio.LabeledScores:
    return rio.LabeledScores(
        tensor,
        tuple(str(i) for i in range(tensor.n_systems)),
        tuple(str(t) for t in range(tensor.n_tasks)),
    )


def _cmd_aggregate(args) -> None:
    labeled = _load(args)
    if args.negate_metrics:
        labeled = rio.negate_tasks(labeled, _split_list(args.negate_metrics))
    result = rank_dataset(labeled.data, args.method)
    with _open_output(args.output) as out:
        if args.format == "json":
            out.write(rio.ranking_json(result, labeled.system_names))
            out.write("\n")
        else:
            rio.write_ranking_csv(result, labeled.system_names, out)


def _cmd_confidence(args) -> None:
    labeled = _load(args)
    data = labeled.data
    units = task_partials(data) if isinstance(data, ScoreTable) else instance_partials(data)
    acc = accumulate(units)
    report = confidence_report(acc, args.delta, two_sided=args.strict_two_sided)
    order = borda_from_matrix(acc)
    with _open_output(args.output) as out:
        if args.format == "json":
            rio.write_confidence_json(report, labeled.system_names, out)
        else:
            rio.write_confidence_csv(report, out)
    if args.heatmap is not None or args.plot is not None:
        margins = significance_margins(report, order)
        names = [labeled.system_names[i] for i in order.ordering]
        if args.heatmap is not None:
            with open(args.heatmap, "w", encoding="utf-8", newline="") as fh:
                rio.write_heatmap_csv(margins, names, fh)
        if args.plot is not None:
            from .plots import save_heatmap_plot

            save_heatmap_plot(margins, names, str(args.plot))


def _cmd_synth(args) -> None:
    cfg = GumbelConfig(
        systems=args.systems,
        tasks=args.tasks,
        instances=args.instances,
        phi=args.phi,
        beta=args.beta,
        seed=_seed(args),
    )
    labeled = _labeled_tensor(generate_gumbel(cfg))
    _write_scores(labeled, args)


def _write_scores(labeled: rio.LabeledScores, args) -> None:
    with _open_output(args.output) as out:
        if args.format == "json":
            rio.write_scores_json(labeled, out)
        else:
            rio.write_long_csv(labeled, out)


def _cmd_corrupt(args) -> None:
    labeled = _load(args)
    if isinstance(labeled.data, ScoreTable):
        data = corrupt_missing_task(labeled.data, args.eta, _seed(args))
    else:
        data = corrupt_missing_instance(labeled.data, args.eta, _seed(args))
    _write_scores(rio.LabeledScores(data, labeled.system_names, labeled.task_names), args)


def _cmd_scale(args) -> None:
    labeled = _load(args)
    if args.task in labeled.task_names:
        task = labeled.task_names.index(args.task)
    else:
        try:
            task = int(args.task)
        except ValueError:
            raise ValidationError(f"unknown task {args.task!r}") from None
    data = scale_task(labeled.data, task, args.lambda_scale)
    _write_scores(rio.LabeledScores(data, labeled.system_names, labeled.task_names), args)


def _cmd_robustness(args) -> None:
    labeled = _experiment_data(args)
    methods = _split_list(args.methods)
    etas = [float(e) for e in _split_list(args.etas)]
    samples = robustness_curve(labeled.data, methods, etas, args.repeats, _seed(args))
    with _open_output(args.output) as out:
        if args.format == "json":
            rio.write_robustness_json(samples, out)
        else:
            rio.write_robustness_csv(samples, out)
    if args.plot is not None:
        from .plots import save_robustness_plot

        save_robustness_plot(samples, str(args.plot))


def _cmd_agreement(args) -> None:
    labeled = _experiment_data(args)
    methods = _split_list(args.methods)
    etas = [float(e) for e in _split_list(args.etas)]
    samples = agreement_analysis(labeled.data, methods, etas, args.repeats, _seed(args))
    with _open_output(args.output) as out:
        if args.format == "json":
            rio.write_agreement_json(samples, out)
        else:
            rio.write_agreement_csv(samples, out)
    if args.plot is not None:
        from .plots import save_agreement_plot

        save_agreement_plot(samples, str(args.plot))


_HANDLERS = {
    "aggregate": _cmd_aggregate,
    "confidence": _cmd_confidence,
    "synth": _cmd_synth,
    "corrupt": _cmd_corrupt,
    "scale": _cmd_scale,
    "robustness": _cmd_robustness,
    "agreement": _cmd_agreement,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _HANDLERS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except ValidationError as exc:
        print(f"rankfill: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"rankfill: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # invariant violation: report and exit 2
        print(f"rankfill: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

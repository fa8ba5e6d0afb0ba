"""Command-line surface: gen, stats, validate, baseline, eval, changepoints.

Every run is fully determined by its flags; ``gen`` twice with identical
flags writes byte-identical directories. The only environment input is
``TGTASKS_OUT``, an optional default root for generated datasets.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from itertools import chain
from pathlib import Path

from .baselines import BASELINE_METHODS, make_predictor, run_protocol
from .metrics import (
    DEFAULT_THRESHOLD,
    MetricReport,
    PairScores,
    change_points,
    f1_from_counts,
    pair_counts,
)
from .random_graphs import ErParams
from .serialization import (
    REPORT_FILE,
    DatasetError,
    compute_stats,
    export_ctdg_events,
    export_dataset,
    import_dataset,
    write_metrics_report,
)
from .splits import SplitIndex, split_fraction, split_periods
from .tasks import (
    DEFAULT_NUM_EFFECT_STEPS,
    DEFAULT_NUM_INTERMEDIATES,
    DEFAULT_NUM_PATHS,
    SbmTemplate,
    TaskFamily,
    TaskSpec,
    generate,
)

OUT_ROOT_ENV = "TGTASKS_OUT"


class CliError(Exception):
    """User-facing failure; message goes to stderr, exit status 1."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgtasks",
        description="Generate, validate and evaluate synthetic temporal-graph tasks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a dataset directory")
    gen_sub = gen.add_subparsers(dest="family", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, required=True, help="64-bit dataset seed")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument(
            "--split",
            default=None,
            help="periods:TRAIN,VAL,TEST or frac:TRAIN,VAL,TEST "
            "(defaults: periods:40,4,4 for periodic, frac:0.8,0.1,0.1 otherwise)",
        )
        p.add_argument("--threads", type=int, default=1, help="generation worker threads")

    def add_periodic(p: argparse.ArgumentParser) -> None:
        p.add_argument("--k", type=int, required=True, help="number of patterns")
        p.add_argument("--n", type=int, required=True, help="repeats per pattern")
        p.add_argument("--periods", type=int, default=48, help="total periods")

    pdet = gen_sub.add_parser("periodic-det", help="fixed graphs on a periodic schedule")
    add_periodic(pdet)
    pdet.add_argument("--nodes", type=int, default=100)
    pdet.add_argument("--p", type=float, default=0.01, help="edge probability")
    add_common(pdet)

    psto = gen_sub.add_parser("periodic-sto", help="periodic schedule over SBM draws")
    add_periodic(psto)
    psto.add_argument("--nodes", type=int, default=100)
    psto.add_argument("--blocks", type=int, default=3)
    psto.add_argument("--p-intra", type=float, default=0.9)
    psto.add_argument("--p-inter", type=float, default=0.01)
    add_common(psto)

    ce = gen_sub.add_parser("ce", help="delayed cause-and-effect")
    ce.add_argument("--lag", type=int, required=True)
    ce.add_argument("--nodes", type=int, default=100, help="cause nodes (memory node extra)")
    ce.add_argument("--p", type=float, default=0.01)
    ce.add_argument("--effect-steps", type=int, default=DEFAULT_NUM_EFFECT_STEPS)
    add_common(ce)

    lr = gen_sub.add_parser("lr", help="long-range spatio-temporal paths")
    lr.add_argument("--lag", type=int, required=True)
    lr.add_argument("--dist", type=int, required=True, help="path length")
    lr.add_argument("--paths", type=int, default=DEFAULT_NUM_PATHS)
    lr.add_argument("--intermediates", type=int, default=DEFAULT_NUM_INTERMEDIATES)
    lr.add_argument("--effect-steps", type=int, default=DEFAULT_NUM_EFFECT_STEPS)
    add_common(lr)

    stats = sub.add_parser("stats", help="print statistics of a dataset")
    stats.add_argument("--dataset", type=Path, required=True)

    validate = sub.add_parser("validate", help="fully validate a dataset directory")
    validate.add_argument("--dataset", type=Path, required=True)

    baseline = sub.add_parser("baseline", help="run a heuristic predictor")
    baseline.add_argument("--method", required=True, choices=BASELINE_METHODS)
    baseline.add_argument("--dataset", type=Path, required=True)
    baseline.add_argument(
        "--restrict-node",
        type=int,
        default=None,
        help="pivot node for restricted evaluation (required for ce/lr datasets)",
    )
    baseline.add_argument(
        "--changepoints",
        action="store_true",
        help="mark schedule change points in the report (periodic tasks)",
    )
    baseline.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    baseline.add_argument("--out-file", type=Path, default=None)

    ev = sub.add_parser("eval", help="score a prediction file against a dataset")
    ev.add_argument("--pred", type=Path, required=True, help="CSV t,u,v[,score]")
    ev.add_argument("--dataset", type=Path, required=True)
    ev.add_argument("--mode", choices=("all-pairs", "node"), default="all-pairs")
    ev.add_argument(
        "--pivot",
        type=int,
        default=None,
        help="pivot for node mode (default: the dataset's memory/target node)",
    )
    ev.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    ev.add_argument("--out-file", type=Path, default=None)

    cps = sub.add_parser("changepoints", help="list schedule change points")
    cps.add_argument("--k", type=int, required=True)
    cps.add_argument("--n", type=int, required=True)
    cps.add_argument("--range", required=True, metavar="A,B", help="half-open range [A,B)")

    return parser


def _parse_split(arg: str | None, family: TaskFamily, spec: TaskSpec) -> SplitIndex:
    T = spec.num_timesteps
    periodic = family in (TaskFamily.PERIODIC_DET, TaskFamily.PERIODIC_STO)
    if arg is None:
        arg = "periods:40,4,4" if periodic else "frac:0.8,0.1,0.1"
    kind, _, rest = arg.partition(":")
    parts = rest.split(",")
    if len(parts) != 3:
        raise CliError(f"--split needs three comma-separated values, got {arg!r}")
    try:
        if kind == "periods":
            if not periodic:
                raise CliError("periods-based splits only apply to periodic tasks")
            tr, va, te = (int(x) for x in parts)
            assert spec.k and spec.n
            return split_periods(T, spec.k, spec.n, tr, va, te)
        if kind == "frac":
            f_tr, f_va, f_te = (float(x) for x in parts)
            if abs(f_tr + f_va + f_te - 1.0) > 1e-9:
                raise CliError(f"split fractions must sum to 1, got {arg!r}")
            return split_fraction(T, f_tr, f_va)
    except ValueError as exc:
        raise CliError(f"invalid --split {arg!r}: {exc}") from exc
    raise CliError(f"unknown --split kind {kind!r} (use periods: or frac:)")


def _spec_from_args(args: argparse.Namespace) -> TaskSpec:
    try:
        if args.family == "periodic-det":
            return TaskSpec(
                TaskFamily.PERIODIC_DET,
                seed=args.seed,
                k=args.k,
                n=args.n,
                num_periods=args.periods,
                base=ErParams(args.nodes, args.p),
            )
        if args.family == "periodic-sto":
            return TaskSpec(
                TaskFamily.PERIODIC_STO,
                seed=args.seed,
                k=args.k,
                n=args.n,
                num_periods=args.periods,
                base=SbmTemplate(args.nodes, args.blocks, args.p_intra, args.p_inter),
            )
        if args.family == "ce":
            return TaskSpec(
                TaskFamily.CAUSE_EFFECT,
                seed=args.seed,
                lag=args.lag,
                num_effect_steps=args.effect_steps,
                base=ErParams(args.nodes, args.p),
            )
        return TaskSpec(
            TaskFamily.LONG_RANGE,
            seed=args.seed,
            lag=args.lag,
            dist=args.dist,
            paths=args.paths,
            num_effect_steps=args.effect_steps,
            num_intermediates=args.intermediates,
        )
    except ValueError as exc:
        raise CliError(f"invalid task parameters: {exc}") from exc


def _auto_dir_name(spec: TaskSpec) -> str:
    f = spec.family
    if f in (TaskFamily.PERIODIC_DET, TaskFamily.PERIODIC_STO):
        stem = f"{f.value}_k{spec.k}_n{spec.n}_p{spec.num_periods}"
    elif f is TaskFamily.CAUSE_EFFECT:
        stem = f"ce_lag{spec.lag}"
    else:
        stem = f"lr_lag{spec.lag}_d{spec.dist}_p{spec.paths}"
    return f"{stem}_seed{spec.seed}"


def _resolve_out(args: argparse.Namespace, spec: TaskSpec) -> Path:
    if args.out is not None:
        return args.out
    root = os.environ.get(OUT_ROOT_ENV)
    if root:
        return Path(root) / _auto_dir_name(spec)
    raise CliError(f"--out is required (or set {OUT_ROOT_ENV})")


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.threads < 1:
        raise CliError(f"--threads must be >= 1, got {args.threads}")
    spec = _spec_from_args(args)
    split = _parse_split(args.split, spec.family, spec)
    out = _resolve_out(args, spec)
    g = generate(spec, threads=args.threads)
    manifest = export_dataset(g, split, out)
    export_ctdg_events(g, out)
    print(json.dumps(manifest.to_json_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    g, split, manifest = import_dataset(args.dataset)
    stats = compute_stats(g)
    print(
        json.dumps(
            {
                "family": manifest.task.family.value if manifest.task else None,
                "num_nodes": stats.num_nodes,
                "num_timesteps": stats.num_timesteps,
                "directed_edge_count": stats.directed_edge_count,
                "split": [split.train_end, split.val_end, split.num_timesteps],
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    import_dataset(args.dataset)
    print(f"OK {args.dataset}")
    return 0


def _report_change_points(manifest, split: SplitIndex) -> frozenset[int]:
    spec = manifest.task
    if spec is None or spec.family not in (TaskFamily.PERIODIC_DET, TaskFamily.PERIODIC_STO):
        raise CliError("--changepoints needs a periodic dataset with task metadata")
    assert spec.k and spec.n
    return change_points(spec.k, spec.n, split.evaluated)


def _cmd_baseline(args: argparse.Namespace) -> int:
    g, split, manifest = import_dataset(args.dataset)
    family = manifest.task.family if manifest.task else None
    pivot = args.restrict_node
    if pivot is None and family in (TaskFamily.CAUSE_EFFECT, TaskFamily.LONG_RANGE):
        raise CliError(
            f"{family.value} datasets are evaluated on the memory/target node: "
            f"pass --restrict-node (role ids: {manifest.roles})"
        )
    cps = _report_change_points(manifest, split) if args.changepoints else frozenset()
    predictor = make_predictor(args.method, g.num_nodes)
    report = run_protocol(
        g, split, predictor, pivot=pivot, threshold=args.threshold, change_point_ts=cps
    )
    out_file = args.out_file or (args.dataset / REPORT_FILE)
    write_metrics_report(report, out_file)
    _print_report_summary(report, out_file)
    return 0


def _read_predictions(path: Path, num_nodes: int, num_timesteps: int) -> dict[int, dict]:
    if not path.is_file():
        raise CliError(f"prediction file {path} not found")
    per_t: dict[int, dict] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header not in (["t", "u", "v"], ["t", "u", "v", "score"]):
            raise CliError(f"bad prediction header {header!r} (need t,u,v[,score])")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CliError(f"{path} line {lineno}: expected {len(header)} columns")
            try:
                t, u, v = int(row[0]), int(row[1]), int(row[2])
                score = float(row[3]) if len(row) == 4 else 1.0
            except ValueError as exc:
                raise CliError(f"{path} line {lineno}: {exc}") from exc
            if not 0 <= t < num_timesteps:
                raise CliError(f"{path} line {lineno}: timestep {t} out of range")
            if not (0 <= u < num_nodes and 0 <= v < num_nodes and u != v):
                raise CliError(f"{path} line {lineno}: invalid pair ({u}, {v})")
            if not 0.0 <= score <= 1.0:
                raise CliError(f"{path} line {lineno}: score {score} outside [0, 1]")
            pair = (u, v) if u < v else (v, u)
            per_t.setdefault(t, {})[pair] = score
    return per_t


def _cmd_eval(args: argparse.Namespace) -> int:
    g, split, manifest = import_dataset(args.dataset)
    pivot: int | None = None
    if args.mode == "node":
        pivot = args.pivot
        if pivot is None:
            pivot = manifest.roles.get("memory", manifest.roles.get("target"))
        if pivot is None:
            raise CliError("node mode needs --pivot (dataset has no role nodes)")
    scores = _read_predictions(args.pred, g.num_nodes, g.num_timesteps)
    rows: list[tuple[int, float]] = []
    tot_tp = tot_fp = tot_fn = 0
    try:
        for t in chain(split.val, split.test):
            pred = PairScores(t, scores.get(t, {}))
            tp, fp, fn = pair_counts(pred, g[t], args.threshold, pivot=pivot)
            rows.append((t, f1_from_counts(tp, fp, fn)))
            tot_tp, tot_fp, tot_fn = tot_tp + tp, tot_fp + fp, tot_fn + fn
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    report = MetricReport(tuple(rows), frozenset(), tot_tp, tot_fp, tot_fn)
    out_file = args.out_file or (args.dataset / REPORT_FILE)
    write_metrics_report(report, out_file)
    _print_report_summary(report, out_file)
    return 0


def _cmd_changepoints(args: argparse.Namespace) -> int:
    try:
        start_s, _, end_s = args.range.partition(",")
        start, end = int(start_s), int(end_s)
    except ValueError as exc:
        raise CliError(f"--range must be A,B with integers, got {args.range!r}") from exc
    if args.k < 1 or args.n < 1 or start < 0 or end < start:
        raise CliError("need k >= 1, n >= 1 and 0 <= A <= B")
    for t in sorted(change_points(args.k, args.n, range(start, end))):
        print(t)
    return 0


def _print_report_summary(report: MetricReport, out_file: Path) -> None:
    mean_cp = report.mean_changepoints
    print(f"evaluated={len(report.per_timestep)}")
    print(f"mean_all={report.mean_all:.12f}")
    print(f"mean_changepoints={'NA' if mean_cp is None else f'{mean_cp:.12f}'}")
    print(f"report={out_file}")


_HANDLERS = {
    "gen": _cmd_gen,
    "stats": _cmd_stats,
    "validate": _cmd_validate,
    "baseline": _cmd_baseline,
    "eval": _cmd_eval,
    "changepoints": _cmd_changepoints,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (CliError, DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

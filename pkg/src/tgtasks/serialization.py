"""Dataset persistence: edge lists, event streams, manifests, reports.

On-disk layout of a dataset directory::

    edges.csv       header "t,u,v"; one row per undirected edge per timestep,
                    pairs stored once with u < v, rows sorted by (t, u, v)
    events.csv      header "u,v,t"; both orientations of every edge, grouped
                    by t ascending (the event-stream view of the snapshots)
    manifest.json   schema version, task parameters + seed, node/timestep
                    counts, split boundaries, directed edge count, role-node
                    ids and the generator fingerprint

All files are UTF-8 with LF line endings and ASCII decimal integers, so
exporting the same graph twice is byte-identical. Imports re-derive the
statistics from the edge file and refuse manifests that disagree.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .graph_core import DynamicGraph, Snapshot
from .metrics import MetricReport
from .random_graphs import ErParams
from .splits import SplitIndex
from .tasks import SbmTemplate, TaskFamily, TaskSpec

SCHEMA_VERSION = 1

EDGES_FILE = "edges.csv"
EVENTS_FILE = "events.csv"
MANIFEST_FILE = "manifest.json"
REPORT_FILE = "metrics_report.csv"

_TASK_INT_FIELDS = (
    "k",
    "n",
    "num_periods",
    "lag",
    "dist",
    "paths",
    "num_effect_steps",
    "num_intermediates",
)


class DatasetError(Exception):
    """Base class for load/store failures."""


class SchemaError(DatasetError):
    """Missing files, unknown schema versions, malformed structure."""


class StatsMismatchError(DatasetError):
    """Manifest statistics disagree with file contents (corruption signal)."""


@dataclass(frozen=True)
class DatasetStats:
    num_nodes: int
    directed_edge_count: int
    num_timesteps: int
    per_timestep_edges: tuple[int, ...]


def compute_stats(g: DynamicGraph) -> DatasetStats:
    """Exact counts under the doubled (both-orientations) edge convention."""
    per_t = tuple(s.num_edges for s in g.snapshots)
    return DatasetStats(g.num_nodes, 2 * sum(per_t), g.num_timesteps, per_t)


@dataclass(frozen=True)
class Manifest:
    schema_version: int
    task: TaskSpec | None
    num_nodes: int
    num_timesteps: int
    split: SplitIndex
    directed_edge_count: int
    roles: dict[str, int]
    generator: dict[str, str]

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "task": _task_to_json(self.task),
            "num_nodes": self.num_nodes,
            "num_timesteps": self.num_timesteps,
            "split": {
                "train_end": self.split.train_end,
                "val_end": self.split.val_end,
                "num_timesteps": self.split.num_timesteps,
            },
            "directed_edge_count": self.directed_edge_count,
            "roles": self.roles,
            "generator": self.generator,
        }


def _task_to_json(spec: TaskSpec | None) -> dict | None:
    if spec is None:
        return None
    out: dict = {"family": spec.family.value, "seed": spec.seed}
    for name in _TASK_INT_FIELDS:
        value = getattr(spec, name)
        if value is not None:
            out[name] = value
    if isinstance(spec.base, ErParams):
        out["base"] = {
            "kind": "er",
            "num_nodes": spec.base.num_nodes,
            "edge_prob": spec.base.edge_prob,
        }
    elif isinstance(spec.base, SbmTemplate):
        out["base"] = {
            "kind": "sbm-template",
            "num_nodes": spec.base.num_nodes,
            "num_blocks": spec.base.num_blocks,
            "p_intra": spec.base.p_intra,
            "p_inter": spec.base.p_inter,
        }
    else:
        out["base"] = None
    return out


def _task_from_json(obj: dict | None) -> TaskSpec | None:
    if obj is None:
        return None
    try:
        base_obj = obj.get("base")
        base: ErParams | SbmTemplate | None = None
        if base_obj is not None:
            kind = base_obj.get("kind")
            if kind == "er":
                base = ErParams(base_obj["num_nodes"], base_obj["edge_prob"])
            elif kind == "sbm-template":
                base = SbmTemplate(
                    base_obj["num_nodes"],
                    base_obj["num_blocks"],
                    base_obj["p_intra"],
                    base_obj["p_inter"],
                )
            else:
                raise SchemaError(f"unknown base kind {kind!r}")
        kwargs = {name: obj.get(name) for name in _TASK_INT_FIELDS}
        return TaskSpec(
            family=TaskFamily(obj["family"]), seed=obj["seed"], base=base, **kwargs
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"invalid task record in manifest: {exc}") from exc


def _generator_fingerprint() -> dict[str, str]:
    # Stable within one installed build: lets a regenerated dataset be traced
    # to the code and numpy stream implementation that produced it.
    return {"name": "tgtasks", "version": __version__, "numpy": np.__version__}


def build_manifest(g: DynamicGraph, split: SplitIndex) -> Manifest:
    if split.num_timesteps != g.num_timesteps:
        raise ValueError(
            f"split covers {split.num_timesteps} timesteps, graph has {g.num_timesteps}"
        )
    roles = g.spec.role_nodes if g.spec is not None else {}
    return Manifest(
        schema_version=SCHEMA_VERSION,
        task=g.spec,
        num_nodes=g.num_nodes,
        num_timesteps=g.num_timesteps,
        split=split,
        directed_edge_count=g.directed_edge_count,
        roles=roles,
        generator=_generator_fingerprint(),
    )


def export_dataset(g: DynamicGraph, split: SplitIndex, out_dir: str | Path) -> Manifest:
    """Write edges.csv and manifest.json; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = build_manifest(g, split)

    with open(out / EDGES_FILE, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "u", "v"])
        for t, snap in enumerate(g.snapshots):
            for u, v in sorted(snap.edges):
                writer.writerow([t, u, v])

    payload = json.dumps(manifest.to_json_dict(), indent=2, sort_keys=True) + "\n"
    with open(out / MANIFEST_FILE, "w", encoding="utf-8", newline="") as fh:
        fh.write(payload)
    return manifest


def export_ctdg_events(g: DynamicGraph, out_dir: str | Path) -> int:
    """Write events.csv (both orientations per edge); returns the row count."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(out / EVENTS_FILE, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["u", "v", "t"])
        for t, snap in enumerate(g.snapshots):
            batch = sorted([(u, v) for u, v in snap.edges] + [(v, u) for u, v in snap.edges])
            for u, v in batch:
                writer.writerow([u, v, t])
            count += len(batch)
    return count


def _read_manifest(path: Path) -> Manifest:
    if not path.is_file():
        raise SchemaError(f"missing {path.name}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path.name} is not valid JSON: {exc}") from exc
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unknown schema version {version!r} (expected {SCHEMA_VERSION})")
    try:
        split = SplitIndex(
            raw["split"]["train_end"],
            raw["split"]["val_end"],
            raw["split"]["num_timesteps"],
        )
        manifest = Manifest(
            schema_version=version,
            task=_task_from_json(raw["task"]),
            num_nodes=raw["num_nodes"],
            num_timesteps=raw["num_timesteps"],
            split=split,
            directed_edge_count=raw["directed_edge_count"],
            roles=dict(raw["roles"]),
            generator=dict(raw["generator"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed manifest: {exc}") from exc
    if manifest.split.num_timesteps != manifest.num_timesteps:
        raise SchemaError("split range does not cover the declared timesteps")
    return manifest


def _read_edges(path: Path, num_nodes: int, num_timesteps: int) -> list[list[tuple[int, int]]]:
    if not path.is_file():
        raise SchemaError(f"missing {path.name}")
    per_t: list[list[tuple[int, int]]] = [[] for _ in range(num_timesteps)]
    prev: tuple[int, int, int] | None = None
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["t", "u", "v"]:
            raise SchemaError(f"bad edges.csv header {header!r}")
        for lineno, row in enumerate(reader, start=2):
            try:
                t, u, v = (int(x) for x in row)
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"edges.csv line {lineno}: not an integer triple") from exc
            if not 0 <= t < num_timesteps:
                raise StatsMismatchError(f"edges.csv line {lineno}: timestep {t} out of range")
            if not 0 <= u < v < num_nodes:
                raise StatsMismatchError(
                    f"edges.csv line {lineno}: pair ({u}, {v}) not canonical/in range"
                )
            if prev is not None and (t, u, v) <= prev:
                raise StatsMismatchError(f"edges.csv line {lineno}: rows not strictly sorted")
            prev = (t, u, v)
            per_t[t].append((u, v))
    return per_t


def import_dataset(in_dir: str | Path) -> tuple[DynamicGraph, SplitIndex, Manifest]:
    """Load and fully validate an exported dataset directory."""
    src = Path(in_dir)
    manifest = _read_manifest(src / MANIFEST_FILE)
    per_t = _read_edges(src / EDGES_FILE, manifest.num_nodes, manifest.num_timesteps)
    undirected = sum(len(rows) for rows in per_t)
    if manifest.directed_edge_count != 2 * undirected:
        raise StatsMismatchError(
            f"manifest declares {manifest.directed_edge_count} directed edges, "
            f"file holds {2 * undirected}"
        )
    spec = manifest.task
    if spec is not None:
        if spec.num_timesteps != manifest.num_timesteps:
            raise StatsMismatchError(
                f"task parameters imply {spec.num_timesteps} timesteps, "
                f"manifest declares {manifest.num_timesteps}"
            )
        if spec.base is not None and spec.num_nodes != manifest.num_nodes:
            raise StatsMismatchError(
                f"task parameters imply {spec.num_nodes} nodes, "
                f"manifest declares {manifest.num_nodes}"
            )
        if spec.role_nodes != manifest.roles:
            raise StatsMismatchError("role-node ids disagree with the task family")
    snapshots = tuple(
        Snapshot(manifest.num_nodes, frozenset(rows)) for rows in per_t
    )
    g = DynamicGraph(snapshots, manifest.num_nodes, spec)
    return g, manifest.split, manifest


def write_metrics_report(report: MetricReport, path: str | Path) -> None:
    """Line-oriented report: per-timestep rows plus a summary footer."""
    lines = ["t,f1,is_changepoint"]
    for t, f1 in report.per_timestep:
        cp = 1 if t in report.change_point_ts else 0
        lines.append(f"{t},{f1:.12f},{cp}")
    lines.append(f"# mean_all,{report.mean_all:.12f}")
    mean_cp = report.mean_changepoints
    lines.append(
        "# mean_changepoints,NA" if mean_cp is None else f"# mean_changepoints,{mean_cp:.12f}"
    )
    lines.append(f"# evaluated,{len(report.per_timestep)}")
    lines.append(f"# tp,{report.tp}")
    lines.append(f"# fp,{report.fp}")
    lines.append(f"# fn,{report.fn}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_metrics_report(path: str | Path) -> tuple[list[tuple[int, float, bool]], dict[str, str]]:
    """Parse a report file back into (rows, footer) for cross-checking."""
    rows: list[tuple[int, float, bool]] = []
    footer: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "t,f1,is_changepoint":
            raise SchemaError(f"bad report header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(",")
                footer[key] = value
                continue
            t_s, f1_s, cp_s = line.split(",")
            rows.append((int(t_s), float(f1_s), cp_s == "1"))
    return rows, footer

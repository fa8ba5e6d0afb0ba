"""Per-timestep F1 over exhaustive pair universes, plus aggregation.

A prediction at timestep t assigns scores in [0, 1] to unordered node pairs;
any pair not scored counts as 0. A pair is predicted positive when its score
is strictly above the threshold. F1 is computed against the truth snapshot
over one of two candidate universes:

- all pairs: every unordered pair of distinct nodes (no negative sampling)
- node-restricted: only the pairs incident to a designated pivot node

Timesteps where predictions and truth are both empty over the universe score
a vacuous 1.0 (an empty prediction of an empty graph is exact).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Mapping, Sequence

from .graph_core import Pair, Snapshot, canonical_pair
from .tasks import periodic_index

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class PairScores:
    """Sparse pair-score map for one timestep; an absent pair scores 0."""

    timestep: int
    scores: Mapping[Pair, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.timestep < 0:
            raise ValueError(f"timestep must be >= 0, got {self.timestep}")
        clean: dict[Pair, float] = {}
        for (u, v), s in self.scores.items():
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"score for ({u}, {v}) must be in [0, 1], got {s}")
            clean[canonical_pair(u, v)] = float(s)
        object.__setattr__(self, "scores", clean)

    @classmethod
    def from_edges(cls, timestep: int, pairs, score: float = 1.0) -> PairScores:
        return cls(timestep, {canonical_pair(u, v): score for u, v in pairs})

    def positives(self, threshold: float) -> frozenset[Pair]:
        return frozenset(p for p, s in self.scores.items() if s > threshold)


def f1_from_counts(tp: int, fp: int, fn: int) -> float:
    """2tp / (2tp + fp + fn); vacuously 1.0 when all counts are zero."""
    if min(tp, fp, fn) < 0:
        raise ValueError(f"counts must be >= 0, got ({tp}, {fp}, {fn})")
    denom = 2 * tp + fp + fn
    if denom == 0:
        return 1.0
    return 2 * tp / denom


def _check_threshold(threshold: float) -> None:
    # Strictly-greater semantics only make sense for thresholds inside the
    # score range: below 0 every unscored pair would turn positive.
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")


def pair_counts(
    pred: PairScores,
    truth: Snapshot,
    threshold: float = DEFAULT_THRESHOLD,
    pivot: int | None = None,
) -> tuple[int, int, int]:
    """(tp, fp, fn) over the chosen universe.

    With ``pivot`` set, only pairs incident to the pivot participate; all
    other predictions and truth edges are ignored.
    """
    _check_threshold(threshold)
    for u, v in pred.scores:
        if v >= truth.num_nodes:
            raise ValueError(
                f"scored pair ({u}, {v}) out of range for num_nodes={truth.num_nodes}"
            )
    positives = pred.positives(threshold)
    true_edges = truth.edges
    if pivot is not None:
        if not 0 <= pivot < truth.num_nodes:
            raise ValueError(f"pivot {pivot} out of range for num_nodes={truth.num_nodes}")
        positives = frozenset(p for p in positives if pivot in p)
        true_edges = frozenset(p for p in true_edges if pivot in p)
    tp = len(positives & true_edges)
    fp = len(positives - true_edges)
    fn = len(true_edges - positives)
    return tp, fp, fn


def evaluate_all_pairs(
    pred: PairScores, truth: Snapshot, threshold: float = DEFAULT_THRESHOLD
) -> tuple[int, float]:
    """(timestep, F1) over every unordered pair of distinct nodes."""
    tp, fp, fn = pair_counts(pred, truth, threshold)
    return pred.timestep, f1_from_counts(tp, fp, fn)


def evaluate_node_restricted(
    pred: PairScores,
    truth: Snapshot,
    pivot: int,
    threshold: float = DEFAULT_THRESHOLD,
) -> tuple[int, float]:
    """(timestep, F1) over only the pairs incident to ``pivot``."""
    tp, fp, fn = pair_counts(pred, truth, threshold, pivot=pivot)
    return pred.timestep, f1_from_counts(tp, fp, fn)


def change_points(k: int, n: int, ts_range: range) -> frozenset[int]:
    """Timesteps in ``ts_range`` where the scheduled pattern differs from t-1.

    Equals {t > 0 : t ≡ 0 (mod n)} for k >= 2 and the empty set for k = 1.
    """
    return frozenset(
        t
        for t in ts_range
        if t >= 1 and periodic_index(t, k, n) != periodic_index(t - 1, k, n)
    )


@dataclass(frozen=True)
class MetricReport:
    """Per-timestep F1 plus aggregate views.

    ``change_point_ts`` carries the schedule's change points inside the
    evaluated range (empty for non-periodic tasks); ``std_all`` is populated
    only by seed-level aggregation.
    """

    per_timestep: tuple[tuple[int, float], ...]
    change_point_ts: frozenset[int] = frozenset()
    tp: int = 0
    fp: int = 0
    fn: int = 0
    std_all: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_timestep", tuple(self.per_timestep))
        object.__setattr__(self, "change_point_ts", frozenset(self.change_point_ts))
        if not self.per_timestep:
            raise ValueError("a report needs at least one evaluated timestep")
        for t, f1 in self.per_timestep:
            if not 0.0 <= f1 <= 1.0:
                raise ValueError(f"F1 at t={t} outside [0, 1]: {f1}")

    @property
    def timesteps(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.per_timestep)

    @property
    def mean_all(self) -> float:
        scores = [f1 for _, f1 in self.per_timestep]
        return sum(scores) / len(scores)

    @property
    def mean_changepoints(self) -> float | None:
        scores = [f1 for t, f1 in self.per_timestep if t in self.change_point_ts]
        if not scores:
            return None
        return sum(scores) / len(scores)

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.tp, self.fp, self.fn


def aggregate(reports: Sequence[MetricReport], over_seeds: bool = False) -> MetricReport:
    """Combine reports.

    ``over_seeds=False`` concatenates reports covering disjoint timestep
    ranges (e.g. validation + test) into one. ``over_seeds=True`` averages
    per-timestep scores across runs of the same task under different seeds
    and retains the population standard deviation of the run means.
    """
    if not reports:
        raise ValueError("nothing to aggregate")
    if len(reports) == 1 and not over_seeds:
        return reports[0]
    if not over_seeds:
        rows: list[tuple[int, float]] = []
        seen: set[int] = set()
        for r in reports:
            for t, f1 in r.per_timestep:
                if t in seen:
                    raise ValueError(f"timestep {t} appears in multiple reports")
                seen.add(t)
                rows.append((t, f1))
        rows.sort()
        return MetricReport(
            tuple(rows),
            frozenset().union(*(r.change_point_ts for r in reports)),
            sum(r.tp for r in reports),
            sum(r.fp for r in reports),
            sum(r.fn for r in reports),
        )
    ts = reports[0].timesteps
    for r in reports[1:]:
        if r.timesteps != ts:
            raise ValueError("seed-level aggregation needs identical timesteps")
    rows = [
        (t, sum(r.per_timestep[i][1] for r in reports) / len(reports))
        for i, t in enumerate(ts)
    ]
    means = [r.mean_all for r in reports]
    grand = sum(means) / len(means)
    std = sqrt(sum((m - grand) ** 2 for m in means) / len(means))
    return MetricReport(
        tuple(rows),
        reports[0].change_point_ts,
        sum(r.tp for r in reports),
        sum(r.fp for r in reports),
        sum(r.fn for r in reports),
        std_all=std,
    )

"""Heuristic streaming predictors and the evaluate-then-observe protocol.

Three predictors with analytically known behavior on the synthetic tasks:

- persistence: predicts exactly the previously observed snapshot's edges
- edge bank (unbounded memory): predicts every pair ever observed
- clique: predicts every pair positive, a floor reference

All predictors stream snapshots in timestep order. The protocol warms a
predictor up over the training range (observe only), then walks validation
and test scoring the prediction for t strictly before observing snapshot t,
so no prediction can leak information from its own timestep.
"""

from __future__ import annotations

from itertools import chain

from .graph_core import DynamicGraph, Pair, Snapshot
from .metrics import (
    DEFAULT_THRESHOLD,
    MetricReport,
    PairScores,
    f1_from_counts,
    pair_counts,
)
from .splits import SplitIndex

BASELINE_METHODS = ("persistence", "edgebank", "clique")


class _Streaming:
    """Shared timestep-ordering guard."""

    def __init__(self) -> None:
        self._last_seen: int | None = None

    def _check_order(self, t: int) -> None:
        if t < 0:
            raise ValueError(f"timestep must be >= 0, got {t}")
        if self._last_seen is not None and t <= self._last_seen:
            raise ValueError(
                f"snapshots must arrive in increasing timestep order; "
                f"got t={t} after t={self._last_seen}"
            )
        self._last_seen = t


class PersistencePredictor(_Streaming):
    """Score 1 for every edge of the most recently observed snapshot."""

    def __init__(self) -> None:
        super().__init__()
        self._prev: frozenset[Pair] | None = None

    def predict(self, t: int) -> PairScores:
        if self._prev is None:
            raise ValueError("persistence cannot predict before any observation")
        return PairScores.from_edges(t, self._prev)

    def observe(self, t: int, truth: Snapshot) -> None:
        self._check_order(t)
        self._prev = truth.edges


class EdgeBankPredictor(_Streaming):
    """Score 1 for every pair observed at any past timestep."""

    def __init__(self) -> None:
        super().__init__()
        self._seen: set[Pair] = set()

    @property
    def memory_size(self) -> int:
        return len(self._seen)

    def predict(self, t: int) -> PairScores:
        return PairScores.from_edges(t, self._seen)

    def observe(self, t: int, truth: Snapshot) -> None:
        self._check_order(t)
        self._seen |= truth.edges


class CliquePredictor(_Streaming):
    """Score 1 for every pair. Lower-bound reference, never competitive."""

    def __init__(self, num_nodes: int) -> None:
        super().__init__()
        self._pairs = frozenset(
            (u, v) for u in range(num_nodes) for v in range(u + 1, num_nodes)
        )

    def predict(self, t: int) -> PairScores:
        return PairScores.from_edges(t, self._pairs)

    def observe(self, t: int, truth: Snapshot) -> None:
        self._check_order(t)


def make_predictor(method: str, num_nodes: int):
    if method == "persistence":
        return PersistencePredictor()
    if method == "edgebank":
        return EdgeBankPredictor()
    if method == "clique":
        return CliquePredictor(num_nodes)
    raise ValueError(f"unknown baseline method {method!r}; choose from {BASELINE_METHODS}")


def run_protocol(
    g: DynamicGraph,
    split: SplitIndex,
    predictor,
    *,
    pivot: int | None = None,
    threshold: float = DEFAULT_THRESHOLD,
    change_point_ts: frozenset[int] = frozenset(),
) -> MetricReport:
    """Warm up over train, then evaluate-then-observe over val and test.

    ``predictor`` needs ``predict(t) -> PairScores`` and
    ``observe(t, snapshot)``. ``pivot`` switches scoring to the
    node-restricted universe.
    """
    if split.num_timesteps != g.num_timesteps:
        raise ValueError(
            f"split covers {split.num_timesteps} timesteps but graph has "
            f"{g.num_timesteps}"
        )
    for t in split.train:
        predictor.observe(t, g[t])

    rows: list[tuple[int, float]] = []
    tot_tp = tot_fp = tot_fn = 0
    for t in chain(split.val, split.test):
        pred = predictor.predict(t)
        tp, fp, fn = pair_counts(pred, g[t], threshold, pivot=pivot)
        rows.append((t, f1_from_counts(tp, fp, fn)))
        tot_tp += tp
        tot_fp += fp
        tot_fn += fn
        predictor.observe(t, g[t])
    return MetricReport(
        tuple(rows),
        frozenset(t for t in change_point_ts if split.train_end <= t < split.num_timesteps),
        tot_tp,
        tot_fp,
        tot_fn,
    )

from __future__ import annotations

import pytest

from tgtasks import (
    DynamicGraph,
    Snapshot,
    SplitIndex,
    TaskFamily,
    TaskSpec,
    schedule_periodic,
    split_periods,
)


def disjoint_equal_graphs(k: int, edges_each: int, num_nodes: int) -> list[Snapshot]:
    """k pairwise edge-disjoint graphs of equal size on a shared node set."""
    pairs = [
        (u, v) for u in range(num_nodes) for v in range(u + 1, num_nodes)
    ]
    need = k * edges_each
    if need > len(pairs):
        raise ValueError("node set too small for the requested disjoint graphs")
    return [
        Snapshot(num_nodes, frozenset(pairs[i * edges_each : (i + 1) * edges_each]))
        for i in range(k)
    ]


def disjoint_periodic(
    k: int,
    n: int,
    num_periods: int = 48,
    edges_each: int = 3,
    num_nodes: int = 12,
) -> tuple[DynamicGraph, SplitIndex]:
    """Periodic task built from handcrafted edge-disjoint equal-size graphs.

    Carries a schedule-only TaskSpec (base=None): the snapshots are not
    regenerable from the seed but the schedule metadata still travels with
    the dataset.
    """
    graphs = disjoint_equal_graphs(k, edges_each, num_nodes)
    spec = TaskSpec(TaskFamily.PERIODIC_DET, seed=0, k=k, n=n, num_periods=num_periods)
    g = schedule_periodic(graphs, n, num_periods, spec)
    # 40/4/4 shape at the default size, scaled down for smaller runs
    val_p = max(1, num_periods // 12)
    split = split_periods(g.num_timesteps, k, n, num_periods - 2 * val_p, val_p, val_p)
    return g, split


@pytest.fixture
def tiny_graph() -> DynamicGraph:
    """Three distinct snapshots on 5 nodes, handy for streaming tests."""
    snaps = (
        Snapshot(5, frozenset({(0, 1), (2, 3)})),
        Snapshot(5, frozenset({(1, 2)})),
        Snapshot(5, frozenset({(0, 4), (3, 4), (1, 3)})),
    )
    return DynamicGraph(snaps, 5)

"""Immutable snapshot and snapshot-sequence containers.

Conventions shared by every other module:

- nodes are integers ``0 .. num_nodes-1``; the node set is fixed over time
- edges are unordered pairs of distinct nodes, each stored exactly once in
  canonical ``(min, max)`` order
- "directed" edge totals double every undirected pair, matching the
  event-stream view in which each pair occurs in both orientations

Snapshots and dynamic graphs are frozen after construction and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from .tasks import TaskSpec

Pair = tuple[int, int]


def canonical_pair(u: int, v: int) -> Pair:
    """Return the (min, max) form of an undirected pair.

    Raises
    ------
    ValueError
        If ``u == v`` (self-loops are not representable).
    """
    if u == v:
        raise ValueError(f"self-loop ({u}, {v}) is not a valid edge")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Snapshot:
    """One timestep's simple undirected graph over a fixed node set.

    ``edges`` may be passed in any orientation and with duplicates; the
    constructor canonicalizes, so ``Snapshot(4, {(1, 0), (0, 1)})`` stores the
    single pair ``(0, 1)``. Equality is order-insensitive over pairs.
    """

    num_nodes: int
    edges: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.num_nodes < 1:
            raise ValueError(f"num_nodes must be >= 1, got {self.num_nodes}")
        canon = frozenset(canonical_pair(u, v) for u, v in self.edges)
        for u, v in canon:
            if not 0 <= u < self.num_nodes or not 0 <= v < self.num_nodes:
                raise ValueError(
                    f"edge ({u}, {v}) out of range for num_nodes={self.num_nodes}"
                )
        object.__setattr__(self, "edges", canon)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_pair(u, v) in self.edges

    def degree(self, v: int) -> int:
        """Number of stored pairs incident to ``v``."""
        if not 0 <= v < self.num_nodes:
            raise ValueError(f"node {v} out of range for num_nodes={self.num_nodes}")
        return sum(1 for pair in self.edges if v in pair)

    def neighbors(self, v: int) -> frozenset[int]:
        """Nodes adjacent to ``v``."""
        if not 0 <= v < self.num_nodes:
            raise ValueError(f"node {v} out of range for num_nodes={self.num_nodes}")
        return frozenset(a if b == v else b for a, b in self.edges if v in (a, b))

    def active_nodes(self) -> frozenset[int]:
        """Exactly the nodes with degree >= 1."""
        return frozenset(u for pair in self.edges for u in pair)

    def without_node(self, v: int) -> Snapshot:
        """Copy with every edge incident to ``v`` removed (node set unchanged)."""
        return Snapshot(self.num_nodes, frozenset(p for p in self.edges if v not in p))


@dataclass(frozen=True)
class DynamicGraph:
    """Ordered snapshot sequence sharing one node set.

    ``spec`` records how the sequence was generated (or ``None`` for
    hand-built sequences); it travels with the graph into the dataset
    manifest so exports stay traceable.
    """

    snapshots: tuple[Snapshot, ...]
    num_nodes: int
    spec: TaskSpec | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        if len(self.snapshots) < 1:
            raise ValueError("a dynamic graph needs at least one snapshot")
        for t, snap in enumerate(self.snapshots):
            if snap.num_nodes != self.num_nodes:
                raise ValueError(
                    f"snapshot {t} has num_nodes={snap.num_nodes}, "
                    f"expected {self.num_nodes}"
                )

    @property
    def num_timesteps(self) -> int:
        return len(self.snapshots)

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Snapshot]:
        return iter(self.snapshots)

    def __getitem__(self, t: int) -> Snapshot:
        return self.snapshots[t]

    @property
    def undirected_edge_total(self) -> int:
        return sum(s.num_edges for s in self.snapshots)

    @property
    def directed_edge_count(self) -> int:
        """Total edges under the doubled (both-orientations) convention."""
        return 2 * self.undirected_edge_total


def snapshot_from_pairs(num_nodes: int, pairs: Iterable[tuple[int, int]]) -> Snapshot:
    """Convenience constructor accepting any iterable of (u, v) pairs."""
    return Snapshot(num_nodes, frozenset(canonical_pair(u, v) for u, v in pairs))

"""Generators for the four synthetic temporal-graph task families.

Families
--------
periodic-det
    ``k`` fixed base graphs, each repeated ``n`` consecutive steps, cycled
    for ``num_periods`` full periods (T = k*n*num_periods).
periodic-sto
    Same schedule over ``k`` SBM distributions that share probabilities but
    have independently drawn community structures; every timestep is a fresh
    draw from its scheduled distribution.
cause-effect
    A fresh random cause graph over nodes 1..N at every step; from timestep
    ``lag`` on, memory node 0 connects to every node that was active in the
    cause graph ``lag`` steps earlier.
long-range
    ``paths`` node-disjoint paths of length ``dist`` out of a fixed source
    node at every step; from timestep ``lag`` on, the target node connects to
    the endpoint of each path from ``lag`` steps earlier.

Timesteps are 0-indexed everywhere. The pattern schedule
``periodic_index(t, k, n) = (t // n) % k + 1`` then starts at pattern 1 and
switches at t = n, 2n, ...; exports record the same convention.

All generators are pure functions of their :class:`TaskSpec`: equal specs
(seed included) produce equal graphs. Per-timestep draws use independent
substreams, so layer sampling is order-free; the delayed effect edges are
attached in a second pass over the already-drawn layers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence, TypeVar

from .graph_core import DynamicGraph, Pair, Snapshot
from .random_graphs import (
    ErParams,
    RngStream,
    SbmParams,
    random_equal_partition,
    sample_er,
    sample_sbm,
)

DEFAULT_NUM_EFFECT_STEPS = 4000
DEFAULT_NUM_PATHS = 3
DEFAULT_NUM_INTERMEDIATES = 100

# Substream labels: one namespace per kind of draw so adding streams never
# perturbs existing ones.
_STREAM_BASE_GRAPHS = 0
_STREAM_SNAPSHOTS = 1
_STREAM_PARTITIONS = 2

MEMORY_NODE = 0  # cause-effect: carries the delayed effect edges
TARGET_NODE = 0  # long-range: receives the delayed endpoint edges
SOURCE_NODE = 1  # long-range: origin of every path


class TaskFamily(str, Enum):
    PERIODIC_DET = "periodic-det"
    PERIODIC_STO = "periodic-sto"
    CAUSE_EFFECT = "cause-effect"
    LONG_RANGE = "long-range"


@dataclass(frozen=True)
class SbmTemplate:
    """SBM probabilities plus partition shape, before structures are drawn."""

    num_nodes: int = 100
    num_blocks: int = 3
    p_intra: float = 0.9
    p_inter: float = 0.01

    def __post_init__(self) -> None:
        if self.num_blocks < 1 or self.num_nodes < self.num_blocks:
            raise ValueError(
                f"need 1 <= num_blocks <= num_nodes, got "
                f"({self.num_blocks}, {self.num_nodes})"
            )
        for name, p in (("p_intra", self.p_intra), ("p_inter", self.p_inter)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class TaskSpec:
    """Parametric description of one task instance; the unit of provenance.

    Only the fields relevant to ``family`` may be set (see ``validate``).
    ``base`` may be ``None`` for hand-built snapshot sequences that only
    borrow the schedule metadata (such sequences cannot be regenerated).
    """

    family: TaskFamily
    seed: int
    k: int | None = None
    n: int | None = None
    num_periods: int | None = None
    lag: int | None = None
    dist: int | None = None
    paths: int | None = None
    num_effect_steps: int | None = None
    num_intermediates: int | None = None
    base: ErParams | SbmTemplate | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", TaskFamily(self.family))
        self.validate()

    def validate(self) -> None:
        f = self.family
        if f in (TaskFamily.PERIODIC_DET, TaskFamily.PERIODIC_STO):
            self._require(k=self.k, n=self.n, num_periods=self.num_periods)
            self._forbid(
                lag=self.lag,
                dist=self.dist,
                paths=self.paths,
                num_effect_steps=self.num_effect_steps,
                num_intermediates=self.num_intermediates,
            )
            expected = ErParams if f is TaskFamily.PERIODIC_DET else SbmTemplate
            if self.base is not None and not isinstance(self.base, expected):
                raise ValueError(f"{f.value} base must be {expected.__name__}")
        elif f is TaskFamily.CAUSE_EFFECT:
            self._require(lag=self.lag, num_effect_steps=self.num_effect_steps)
            self._forbid(
                k=self.k,
                n=self.n,
                num_periods=self.num_periods,
                dist=self.dist,
                paths=self.paths,
                num_intermediates=self.num_intermediates,
            )
            if not isinstance(self.base, ErParams):
                raise ValueError("cause-effect base must be ErParams")
        else:  # LONG_RANGE
            self._require(
                lag=self.lag,
                dist=self.dist,
                paths=self.paths,
                num_effect_steps=self.num_effect_steps,
                num_intermediates=self.num_intermediates,
            )
            self._forbid(k=self.k, n=self.n, num_periods=self.num_periods, base=self.base)
            assert self.paths is not None and self.dist is not None
            if self.paths * self.dist > self.num_intermediates:
                raise ValueError(
                    f"paths*dist = {self.paths * self.dist} intermediates do not fit "
                    f"in {self.num_intermediates} available nodes"
                )

    def _require(self, **fields: int | None) -> None:
        for name, value in fields.items():
            if value is None or value < 1:
                raise ValueError(
                    f"{self.family.value} requires {name} >= 1, got {value}"
                )

    def _forbid(self, **fields: object) -> None:
        for name, value in fields.items():
            if value is not None:
                raise ValueError(f"{self.family.value} does not take {name}")

    @property
    def num_timesteps(self) -> int:
        if self.family in (TaskFamily.PERIODIC_DET, TaskFamily.PERIODIC_STO):
            assert self.k and self.n and self.num_periods
            return self.k * self.n * self.num_periods
        assert self.num_effect_steps and self.lag
        return self.num_effect_steps + self.lag

    @property
    def num_nodes(self) -> int:
        if self.family in (TaskFamily.PERIODIC_DET, TaskFamily.PERIODIC_STO):
            if self.base is None:
                raise ValueError("node count unknown for schedule-only specs")
            return self.base.num_nodes
        if self.family is TaskFamily.CAUSE_EFFECT:
            assert isinstance(self.base, ErParams)
            return self.base.num_nodes + 1
        assert self.num_intermediates
        return self.num_intermediates + 2

    @property
    def role_nodes(self) -> dict[str, int]:
        """Fixed special-node ids for the family (empty for periodic tasks)."""
        if self.family is TaskFamily.CAUSE_EFFECT:
            return {"memory": MEMORY_NODE}
        if self.family is TaskFamily.LONG_RANGE:
            return {"target": TARGET_NODE, "source": SOURCE_NODE}
        return {}

    def root_stream(self) -> RngStream:
        return RngStream(self.seed)


def periodic_index(t: int, k: int, n: int) -> int:
    """Pattern id in 1..k active at 0-indexed timestep ``t``."""
    if k < 1 or n < 1:
        raise ValueError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    if t < 0:
        raise ValueError(f"timestep must be >= 0, got {t}")
    return (t // n) % k + 1


T = TypeVar("T")


def _map_timesteps(fn: Callable[[int], T], num_timesteps: int, threads: int) -> list[T]:
    if threads <= 1:
        return [fn(t) for t in range(num_timesteps)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(num_timesteps)))


def schedule_periodic(
    graphs: Sequence[Snapshot],
    n: int,
    num_periods: int,
    spec: TaskSpec | None = None,
) -> DynamicGraph:
    """Lay out ``k = len(graphs)`` base snapshots on the periodic schedule."""
    k = len(graphs)
    if k < 1:
        raise ValueError("need at least one base graph")
    snapshots = tuple(
        graphs[periodic_index(t, k, n) - 1] for t in range(k * n * num_periods)
    )
    return DynamicGraph(snapshots, graphs[0].num_nodes, spec)


def gen_periodic_det(spec: TaskSpec) -> DynamicGraph:
    """Draw k base graphs once, then repeat them on the periodic schedule."""
    if spec.family is not TaskFamily.PERIODIC_DET:
        raise ValueError(f"expected periodic-det spec, got {spec.family.value}")
    if not isinstance(spec.base, ErParams):
        raise ValueError("periodic-det generation requires an ErParams base")
    assert spec.k and spec.n and spec.num_periods
    root = spec.root_stream()
    graphs = [
        sample_er(spec.base, root.child(_STREAM_BASE_GRAPHS, i)) for i in range(spec.k)
    ]
    return schedule_periodic(graphs, spec.n, spec.num_periods, spec)


def sto_distributions(spec: TaskSpec) -> tuple[SbmParams, ...]:
    """The k SBM distributions backing a periodic-sto spec.

    Community structures are independent equal-size random partitions; the
    intra/inter probabilities come from the shared template.
    """
    if spec.family is not TaskFamily.PERIODIC_STO:
        raise ValueError(f"expected periodic-sto spec, got {spec.family.value}")
    if not isinstance(spec.base, SbmTemplate):
        raise ValueError("periodic-sto generation requires an SbmTemplate base")
    assert spec.k
    tmpl = spec.base
    root = spec.root_stream()
    return tuple(
        SbmParams(
            random_equal_partition(
                tmpl.num_nodes, tmpl.num_blocks, root.child(_STREAM_PARTITIONS, i)
            ),
            tmpl.p_intra,
            tmpl.p_inter,
        )
        for i in range(spec.k)
    )


def gen_periodic_sto(spec: TaskSpec, threads: int = 1) -> DynamicGraph:
    """Fresh draw per timestep from the scheduled SBM distribution."""
    dists = sto_distributions(spec)
    assert spec.k and spec.n and spec.num_periods
    k, n = spec.k, spec.n
    root = spec.root_stream()

    def draw(t: int) -> Snapshot:
        return sample_sbm(dists[periodic_index(t, k, n) - 1], root.child(_STREAM_SNAPSHOTS, t))

    snapshots = _map_timesteps(draw, spec.num_timesteps, threads)
    return DynamicGraph(tuple(snapshots), spec.num_nodes, spec)


def gen_cause_effect(spec: TaskSpec, threads: int = 1) -> DynamicGraph:
    """Random cause layers plus delayed memory-node effect edges.

    Pass 1 draws the cause graph for every timestep (independent streams);
    pass 2 unions in the effect edges, which depend only on the already-drawn
    cause layer ``lag`` steps back. Cause nodes are 1..N; node 0 only ever
    touches effect edges.
    """
    if spec.family is not TaskFamily.CAUSE_EFFECT:
        raise ValueError(f"expected cause-effect spec, got {spec.family.value}")
    assert isinstance(spec.base, ErParams) and spec.lag
    root = spec.root_stream()
    num_nodes = spec.num_nodes

    def draw_cause(t: int) -> frozenset[Pair]:
        snap = sample_er(spec.base, root.child(_STREAM_SNAPSHOTS, t))  # type: ignore[arg-type]
        return frozenset((u + 1, v + 1) for u, v in snap.edges)

    cause_layers = _map_timesteps(draw_cause, spec.num_timesteps, threads)

    snapshots = []
    for t, cause in enumerate(cause_layers):
        edges = cause
        if t >= spec.lag:
            active = {u for pair in cause_layers[t - spec.lag] for u in pair}
            edges = cause | {(MEMORY_NODE, m) for m in active}
        snapshots.append(Snapshot(num_nodes, edges))
    return DynamicGraph(tuple(snapshots), num_nodes, spec)


def gen_long_range(spec: TaskSpec, threads: int = 1) -> DynamicGraph:
    """Disjoint source-rooted paths plus delayed target-endpoint edges.

    Per timestep, ``paths * dist`` intermediate nodes are drawn without
    replacement from 2..N+1 and chained into node-disjoint paths out of the
    source node; the target node later connects to each path's endpoint from
    ``lag`` steps back.
    """
    if spec.family is not TaskFamily.LONG_RANGE:
        raise ValueError(f"expected long-range spec, got {spec.family.value}")
    assert spec.lag and spec.dist and spec.paths and spec.num_intermediates
    root = spec.root_stream()
    num_nodes = spec.num_nodes
    p_count, d = spec.paths, spec.dist

    def draw_paths(t: int) -> tuple[frozenset[Pair], tuple[int, ...]]:
        gen = root.child(_STREAM_SNAPSHOTS, t).generator()
        ids = gen.choice(spec.num_intermediates, size=p_count * d, replace=False) + 2
        edges: set[Pair] = set()
        endpoints = []
        for p in range(p_count):
            chain = [SOURCE_NODE, *(int(x) for x in ids[p * d : (p + 1) * d])]
            edges.update(
                (a, b) if a < b else (b, a) for a, b in zip(chain, chain[1:])
            )
            endpoints.append(chain[-1])
        return frozenset(edges), tuple(endpoints)

    layers = _map_timesteps(draw_paths, spec.num_timesteps, threads)

    snapshots = []
    for t, (path_edges, _) in enumerate(layers):
        edges = path_edges
        if t >= spec.lag:
            _, past_endpoints = layers[t - spec.lag]
            edges = path_edges | {(TARGET_NODE, e) for e in past_endpoints}
        snapshots.append(Snapshot(num_nodes, edges))
    return DynamicGraph(tuple(snapshots), num_nodes, spec)


def generate(spec: TaskSpec, threads: int = 1) -> DynamicGraph:
    """Dispatch to the family's generator."""
    if spec.family is TaskFamily.PERIODIC_DET:
        return gen_periodic_det(spec)
    if spec.family is TaskFamily.PERIODIC_STO:
        return gen_periodic_sto(spec, threads)
    if spec.family is TaskFamily.CAUSE_EFFECT:
        return gen_cause_effect(spec, threads)
    return gen_long_range(spec, threads)

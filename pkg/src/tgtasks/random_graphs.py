"""Seeded samplers for the two static-graph families the task generators use.

Reproducibility contract
------------------------
All randomness flows through :class:`RngStream`: a 64-bit root seed plus a
tuple of integers naming a substream. Streams are realized as numpy's
counter-based Philox generator keyed through ``SeedSequence`` spawn keys, so

- equal ``(seed, path)`` always replays the identical draw sequence, and
- distinct paths (e.g. one per timestep) are statistically independent and
  may be drawn in any order or in parallel.

Pair draws are vectorized over the ``C(N, 2)`` canonical pairs in row-major
upper-triangular order; a pair enters the edge set when its uniform falls
strictly below the edge probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph_core import Snapshot

_MAX_SEED = 2**64


@dataclass(frozen=True)
class RngStream:
    """Root seed plus a substream path identifying one draw sequence."""

    seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned value, got {self.seed}")

    def child(self, *steps: int) -> RngStream:
        """Substream reached by appending ``steps`` to this stream's path."""
        return RngStream(self.seed, self.path + steps)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class ErParams:
    """Erdős–Rényi G(N, p): every pair present independently with prob p."""

    num_nodes: int
    edge_prob: float

    def __post_init__(self) -> None:
        if self.num_nodes < 1:
            raise ValueError(f"num_nodes must be >= 1, got {self.num_nodes}")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError(f"edge_prob must be in [0, 1], got {self.edge_prob}")

    @property
    def expected_edges(self) -> float:
        n = self.num_nodes
        return self.edge_prob * n * (n - 1) / 2


@dataclass(frozen=True)
class SbmParams:
    """Stochastic block model over an explicit node partition.

    ``partition`` is a tuple of blocks (each a sorted tuple of node ids);
    blocks must be disjoint, nonempty and cover ``0 .. N-1``. A pair draws
    with ``p_intra`` when both endpoints share a block, else ``p_inter``.
    """

    partition: tuple[tuple[int, ...], ...]
    p_intra: float
    p_inter: float

    def __post_init__(self) -> None:
        if not self.partition:
            raise ValueError("partition must contain at least one block")
        blocks = tuple(tuple(sorted(b)) for b in self.partition)
        object.__setattr__(self, "partition", blocks)
        seen: set[int] = set()
        total = 0
        for block in blocks:
            if not block:
                raise ValueError("partition blocks must be nonempty")
            seen.update(block)
            total += len(block)
        if total != len(seen) or seen != set(range(total)):
            raise ValueError("partition blocks must be disjoint and cover 0..N-1")
        for name, p in (("p_intra", self.p_intra), ("p_inter", self.p_inter)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")

    @property
    def num_nodes(self) -> int:
        return sum(len(b) for b in self.partition)

    def block_ids(self) -> np.ndarray:
        """Block index per node, shape (N,)."""
        out = np.empty(self.num_nodes, dtype=np.int64)
        for i, block in enumerate(self.partition):
            out[list(block)] = i
        return out

    @property
    def expected_edges(self) -> float:
        sizes = [len(b) for b in self.partition]
        intra = sum(s * (s - 1) // 2 for s in sizes)
        total = self.num_nodes * (self.num_nodes - 1) // 2
        return self.p_intra * intra + self.p_inter * (total - intra)


@lru_cache(maxsize=8)
def _pair_index(num_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    # Canonical C(N,2) pair enumeration, cached: samplers hit the same N
    # thousands of times when generating long snapshot sequences.
    iu, iv = np.triu_indices(num_nodes, k=1)
    return iu, iv


def sample_er(params: ErParams, rng: RngStream) -> Snapshot:
    """Draw one G(N, p) snapshot from the given stream."""
    iu, iv = _pair_index(params.num_nodes)
    mask = rng.generator().random(iu.shape[0]) < params.edge_prob
    edges = frozenset(zip(iu[mask].tolist(), iv[mask].tolist()))
    return Snapshot(params.num_nodes, edges)


def sample_sbm(params: SbmParams, rng: RngStream) -> Snapshot:
    """Draw one SBM snapshot: intra-block pairs at p_intra, others p_inter."""
    iu, iv = _pair_index(params.num_nodes)
    block = params.block_ids()
    prob = np.where(block[iu] == block[iv], params.p_intra, params.p_inter)
    mask = rng.generator().random(iu.shape[0]) < prob
    edges = frozenset(zip(iu[mask].tolist(), iv[mask].tolist()))
    return Snapshot(params.num_nodes, edges)


def random_equal_partition(
    num_nodes: int, num_blocks: int, rng: RngStream
) -> tuple[tuple[int, ...], ...]:
    """Partition ``0..num_nodes-1`` into blocks whose sizes differ by at most 1.

    A uniformly random permutation is sliced into consecutive blocks; the
    ``num_nodes mod num_blocks`` leading blocks take the extra node, so
    (100, 3) always yields sizes {34, 33, 33}.
    """
    if num_blocks < 1:
        raise ValueError(f"num_blocks must be >= 1, got {num_blocks}")
    if num_nodes < num_blocks:
        raise ValueError(
            f"num_nodes={num_nodes} cannot fill {num_blocks} nonempty blocks"
        )
    perm = rng.generator().permutation(num_nodes)
    base, extra = divmod(num_nodes, num_blocks)
    blocks: list[tuple[int, ...]] = []
    start = 0
    for i in range(num_blocks):
        size = base + (1 if i < extra else 0)
        blocks.append(tuple(sorted(int(x) for x in perm[start : start + size])))
        start += size
    return tuple(blocks)

from __future__ import annotations

from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tgtasks import (
    ErParams,
    RngStream,
    SbmParams,
    random_equal_partition,
    sample_er,
    sample_sbm,
)


def test_rng_stream_replays_identically():
    a = RngStream(42, (1, 5)).generator().random(16)
    b = RngStream(42, (1, 5)).generator().random(16)
    assert (a == b).all()


def test_rng_stream_children_diverge():
    root = RngStream(42)
    a = root.child(0).generator().random(16)
    b = root.child(1).generator().random(16)
    assert not (a == b).all()


def test_rng_stream_rejects_bad_seed():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(2**64)


def test_er_params_validation():
    with pytest.raises(ValueError):
        ErParams(0, 0.5)
    with pytest.raises(ValueError):
        ErParams(5, 1.5)


def test_er_prob_zero_is_empty():
    s = sample_er(ErParams(20, 0.0), RngStream(1))
    assert s.num_edges == 0


def test_er_prob_one_is_complete():
    s = sample_er(ErParams(5, 1.0), RngStream(1))
    assert s.num_edges == 10


def test_er_determinism_and_stream_sensitivity():
    params = ErParams(50, 0.1)
    a = sample_er(params, RngStream(7, (3,)))
    b = sample_er(params, RngStream(7, (3,)))
    c = sample_er(params, RngStream(7, (4,)))
    assert a == b
    assert a != c


def test_er_mean_matches_closed_form():
    # E[edges] = p * C(100, 2) = 49.5; 500 draws put the sample mean
    # within ~0.3 with overwhelming probability.
    params = ErParams(100, 0.01)
    root = RngStream(11)
    total = sum(sample_er(params, root.child(i)).num_edges for i in range(500))
    assert abs(total / 500 - 49.5) < 3.0


def test_sbm_params_validation():
    with pytest.raises(ValueError):
        SbmParams((), 0.5, 0.5)
    with pytest.raises(ValueError):
        SbmParams(((0, 1), (1, 2)), 0.5, 0.5)  # overlap
    with pytest.raises(ValueError):
        SbmParams(((0, 1), (3,)), 0.5, 0.5)  # gap
    with pytest.raises(ValueError):
        SbmParams(((0, 1),), 1.5, 0.5)


def test_sbm_extreme_probabilities_pin_the_graph():
    params = SbmParams(((0, 1), (2, 3)), 1.0, 0.0)
    s = sample_sbm(params, RngStream(5))
    assert s.edges == frozenset({(0, 1), (2, 3)})


def test_sbm_reduces_to_er_when_probs_equal():
    # p_intra == p_inter makes the block structure irrelevant.
    params = SbmParams((tuple(range(10)), tuple(range(10, 30))), 0.2, 0.2)
    root = RngStream(13)
    total = sum(sample_sbm(params, root.child(i)).num_edges for i in range(400))
    expected = 0.2 * comb(30, 2)
    assert abs(total / 400 - expected) < 0.05 * expected


def test_sbm_mean_matches_closed_form():
    partition = (tuple(range(33)), tuple(range(33, 66)), tuple(range(66, 100)))
    params = SbmParams(partition, 0.9, 0.01)
    assert params.expected_edges == pytest.approx(0.9 * 1617 + 0.01 * 3333)
    root = RngStream(17)
    total = sum(sample_sbm(params, root.child(i)).num_edges for i in range(200))
    assert abs(total / 200 - params.expected_edges) < 0.02 * params.expected_edges


def test_partition_100_3_sizes():
    blocks = random_equal_partition(100, 3, RngStream(23))
    assert sorted(len(b) for b in blocks) == [33, 33, 34]


@pytest.mark.parametrize(
    "n,b,sizes", [(6, 3, [2, 2, 2]), (7, 3, [2, 2, 3]), (5, 1, [5]), (4, 4, [1, 1, 1, 1])]
)
def test_partition_sizes(n, b, sizes):
    blocks = random_equal_partition(n, b, RngStream(1))
    assert sorted(len(x) for x in blocks) == sizes


def test_partition_rejects_bad_block_counts():
    with pytest.raises(ValueError):
        random_equal_partition(10, 0, RngStream(1))
    with pytest.raises(ValueError):
        random_equal_partition(2, 3, RngStream(1))


def test_partition_is_deterministic_and_shuffled():
    a = random_equal_partition(100, 3, RngStream(9, (2,)))
    b = random_equal_partition(100, 3, RngStream(9, (2,)))
    c = random_equal_partition(100, 3, RngStream(9, (3,)))
    assert a == b
    assert a != c  # contiguous-only partitions would collide far more often


@given(st.integers(1, 60), st.integers(1, 12), st.integers(0, 2**32))
def test_partition_properties(num_nodes, num_blocks, seed):
    if num_nodes < num_blocks:
        num_nodes, num_blocks = num_blocks, num_nodes
    blocks = random_equal_partition(num_nodes, num_blocks, RngStream(seed))
    flat = [x for b in blocks for x in b]
    assert sorted(flat) == list(range(num_nodes))
    sizes = [len(b) for b in blocks]
    assert max(sizes) - min(sizes) <= 1


@given(st.integers(2, 30), st.floats(0.0, 1.0), st.integers(0, 2**32))
def test_sampled_snapshots_satisfy_invariants(n, p, seed):
    s = sample_er(ErParams(n, p), RngStream(seed))
    for u, v in s.edges:
        assert 0 <= u < v < n

import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from arboret.randtree import (
    CapExceeded,
    ChildrenDistribution,
    Exhausted,
    NotConnected,
    RngSpec,
    UniformStream,
    catalan,
    count_ordered,
    count_unordered,
    enumerate_ordered,
    enumerate_unordered,
    sample_cgw,
    sample_er_graph,
    sample_er_spanning,
    sample_er_spanning_batch,
    sample_sgt,
    sample_uniform_labeled,
    sample_uniform_ordered,
    sample_uniform_spanning_tree,
    sgt_tree_probability,
)
from arboret.trees import LabeledTree, OrderedTree, SimpleGraph, parse_paren, to_paren

HALF = ChildrenDistribution.from_mapping({0: 0.5, 1: 0.5})
BINARY = ChildrenDistribution.from_mapping({0: 0.5, 2: 0.5})
MIXED = ChildrenDistribution.from_mapping({0: 0.5, 1: 0.3, 2: 0.2})

# first values of the unordered rooted tree counts, from brute force over
# canonical forms (tests/oracles.py) and extended with the Euler recurrence
UNORDERED = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766]


def frequencies(draws):
    c = Counter(draws)
    total = sum(c.values())
    return {k: v / total for k, v in c.items()}


# distributions ----------------------------------------------------------------------


def test_distribution_validation():
    with pytest.raises(ValueError):
        ChildrenDistribution((0.5, 0.4))
    with pytest.raises(ValueError):
        ChildrenDistribution((0.0, 1.0))
    with pytest.raises(ValueError):
        ChildrenDistribution((1.2, -0.2))
    d = ChildrenDistribution((0.5, 0.5, 0.0))
    assert d.max_children == 1


def test_distribution_summary():
    assert MIXED.mean == pytest.approx(0.7)
    assert MIXED.subcritical and MIXED.phase == "subcritical"
    assert ChildrenDistribution.from_mapping({0: 0.5, 2: 0.5}).phase == "critical"
    assert ChildrenDistribution.from_mapping({0: 0.2, 2: 0.8}).phase == "supercritical"
    assert HALF.entropy == pytest.approx(1.0)


def test_distribution_json():
    d = ChildrenDistribution.from_json({"support": [0, 1, 2], "mass": [0.5, 0.3, 0.2]})
    assert d == MIXED
    assert ChildrenDistribution.from_json(d.to_json()) == d


def test_truncated_renormalizes():
    t = MIXED.truncated(1)
    assert t.mass == pytest.approx((0.5 / 0.8, 0.3 / 0.8))


# counting and enumeration ----------------------------------------------------


def test_count_unordered_examples():
    assert count_unordered(7) == 48
    assert count_unordered(4) == 4
    assert [count_unordered(n) for n in range(1, 13)] == UNORDERED


def test_count_unordered_matches_bruteforce():
    assert [count_unordered(n) for n in range(1, 11)] == [oracles.unordered_count_bruteforce(n) for n in range(1, 11)]


def test_enumerate_unordered_examples():
    assert len(list(enumerate_unordered(2))) == 1
    assert len(list(enumerate_unordered(6))) == 20
    assert list(enumerate_unordered(1)) == [OrderedTree.single()]


def test_enumerate_unordered_canonical_and_complete():
    for n in range(1, 13):
        reps = list(enumerate_unordered(n))
        assert len(reps) == UNORDERED[n - 1]
        if n <= 10:
            keys = {oracles.canonical_unordered(t.to_nested()) for t in reps}
            assert len(keys) == len(reps)


def test_enumerate_ordered_counts():
    assert len(list(enumerate_ordered(3))) == 2
    assert len(list(enumerate_ordered(4))) == 5
    assert list(enumerate_ordered(1)) == [OrderedTree.single()]
    for n in range(1, 11):
        trees = list(enumerate_ordered(n))
        assert len(trees) == catalan(n - 1) == count_ordered(n)
        assert len(set(trees)) == len(trees)


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_ordered(17))


# uniform samplers -----------------------------------------------------------------


def test_uniform_ordered_single():
    assert sample_uniform_ordered(1, 0) == OrderedTree.single()


def test_uniform_ordered_n3_and_n4_frequencies():
    gen = RngSpec(11).generator()
    f = frequencies(to_paren(sample_uniform_ordered(3, gen)) for _ in range(20_000))
    assert set(f) == {"((()))", "(()())"}
    assert all(abs(v - 0.5) < 0.02 for v in f.values())
    f = frequencies(to_paren(sample_uniform_ordered(4, gen)) for _ in range(100_000))
    assert len(f) == 5
    assert all(abs(v - 0.2) < 0.02 for v in f.values())


def test_uniform_labeled_frequencies():
    gen = RngSpec(12).generator()
    f = frequencies(sample_uniform_labeled(3, gen) for _ in range(100_000))
    assert len(f) == 3 and all(abs(v - 1 / 3) < 0.02 for v in f.values())
    assert sample_uniform_labeled(2, gen) == LabeledTree(2, ((1, 2),))
    f5 = frequencies(sample_uniform_labeled(5, gen) for _ in range(50_000))
    assert len(f5) == 125
    assert max(abs(v - 1 / 125) for v in f5.values()) < 0.004


# SGT ------------------------------------------------------------------------------


def test_sgt_degenerate_and_product_rule():
    assert sample_sgt(ChildrenDistribution((1.0,)), 0) == OrderedTree.single()
    assert sgt_tree_probability(BINARY, OrderedTree.single()) == 0.5
    assert sgt_tree_probability(BINARY, parse_paren("(()())")) == 0.125
    assert sgt_tree_probability(BINARY, OrderedTree.path(2)) == 0.0


def test_sgt_empirical_product_rule():
    gen = RngSpec(13).generator()
    def draw():
        try:
            return to_paren(sample_sgt(BINARY, gen, node_cap=2_000))
        except CapExceeded:
            return "CAP"

    # frequencies stay relative to all draws, capped ones included
    f = frequencies(draw() for _ in range(40_000))
    assert abs(f["()"] - 0.5) < 0.01
    assert abs(f["(()())"] - 0.125) < 0.01


def test_sgt_node_cap_reported():
    sup = ChildrenDistribution.from_mapping({0: 0.1, 2: 0.9})
    with pytest.raises(CapExceeded):
        for seed in range(20):
            sample_sgt(sup, seed, node_cap=50)


def test_sgt_probabilities_sum_below_one():
    total = 0.0
    partial = []
    for n in range(1, 13):
        total += sum(sgt_tree_probability(MIXED, t) for t in enumerate_ordered(n))
        partial.append(total)
    assert partial[-1] <= 1.0 + 1e-12
    assert all(b >= a for a, b in zip(partial, partial[1:]))
    assert partial[-1] > 0.9


def test_sgt_tree_probability_root_mass():
    assert sgt_tree_probability(MIXED, OrderedTree.single()) == MIXED.p0


# CGW --------------------------------------------------------------------------------


def test_cgw_unique_support():
    assert sample_cgw(HALF, 4, 0) == OrderedTree.path(4)


def test_cgw_parity_exhausted():
    with pytest.raises(Exhausted):
        sample_cgw(BINARY, 4, 0)


def test_cgw_two_shapes():
    gen = RngSpec(14).generator()
    f = frequencies(to_paren(sample_cgw(BINARY, 5, gen)) for _ in range(20_000))
    assert len(f) == 2 and all(abs(v - 0.5) < 0.02 for v in f.values())


def test_cgw_matches_conditioned_law():
    gen = RngSpec(15).generator()
    n = 5
    trees = list(enumerate_ordered(n))
    w = np.array([sgt_tree_probability(MIXED, t) for t in trees])
    w /= w.sum()
    f = frequencies(sample_cgw(MIXED, n, gen) for _ in range(30_000))
    for t, q in zip(trees, w):
        assert abs(f.get(t, 0.0) - q) < 4 * math.sqrt(q * (1 - q) / 30_000) + 1e-3


# ER -----------------------------------------------------------------------------------


def test_er_graph_extremes():
    assert sample_er_graph(5, 0.0, 0).edges == frozenset()
    assert sample_er_graph(5, 1.0, 0) == SimpleGraph.complete(5)


def test_er_graph_edge_mean():
    us = UniformStream(RngSpec(16).generator())
    m = np.mean([len(sample_er_graph(10, 0.3, us).edges) for _ in range(100_000)])
    assert abs(m - 13.5) < 0.1


def test_uniform_spanning_tree_triangle():
    g = SimpleGraph.complete(3)
    us = UniformStream(RngSpec(17).generator())
    f = frequencies(sample_uniform_spanning_tree(g, us) for _ in range(100_000))
    assert len(f) == 3 and all(abs(v - 1 / 3) < 0.02 for v in f.values())


def test_uniform_spanning_tree_of_tree_and_disconnected():
    t = LabeledTree(4, ((1, 2), (2, 3), (2, 4)))
    assert sample_uniform_spanning_tree(t.as_graph(), 0) == t
    with pytest.raises(NotConnected):
        sample_uniform_spanning_tree(SimpleGraph(2, frozenset()), 0)


def test_er_spanning_p1_uniform():
    gen = RngSpec(18).generator()
    f = frequencies(sample_er_spanning(4, 1.0, gen) for _ in range(32_000))
    assert len(f) == 16 and all(abs(v - 1 / 16) < 0.01 for v in f.values())
    assert sample_er_spanning(2, 1.0, gen) == LabeledTree(2, ((1, 2),))


def test_er_spanning_edge_subset():
    gen = RngSpec(19).generator()
    for _ in range(200):
        t, g = sample_er_spanning(8, 0.5, gen, return_graph=True)
        assert set(t.edges) <= set(g.edges)


def test_er_spanning_batch_matches_scalar():
    for n, p in [(5, 0.5), (20, 0.3)]:
        rows = sample_er_spanning_batch(n, p, 40, RngSpec(20).generator())
        us = UniformStream(RngSpec(20).generator())
        for r in rows:
            t = sample_er_spanning(n, p, us)
            assert t == LabeledTree(n, tuple((i, int(r[i - 2])) for i in range(2, n + 1)))


def test_er_spanning_exhausted():
    with pytest.raises(Exhausted):
        sample_er_spanning(30, 0.01, 0, max_retries=5)


# laws and reproducibility -----------------------------------------------------------


@pytest.mark.slow
def test_sgt_size_and_level_laws():
    gen = RngSpec(21).generator()
    trials = 100_000
    sizes = np.empty(trials)
    levels = np.zeros((trials, 6))
    for k in range(trials):
        t = sample_sgt(MIXED, gen)
        sizes[k] = t.n
        ls = t.level_sizes()[:6]
        levels[k, : len(ls)] = ls
    assert abs(sizes.mean() - 1 / (1 - MIXED.mean)) <= 3 * sizes.std(ddof=1) / math.sqrt(trials)
    for i in range(6):
        col = levels[:, i]
        assert abs(col.mean() - MIXED.mean**i) <= 3 * col.std(ddof=1) / math.sqrt(trials) + 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(0, 5))
def test_samplers_reproducible(seed, stream):
    spec = RngSpec(seed, stream)
    a = [sample_uniform_ordered(12, spec.generator()), sample_sgt(MIXED, spec.generator())]
    b = [sample_uniform_ordered(12, spec.generator()), sample_sgt(MIXED, spec.generator())]
    assert a == b
    assert sample_er_spanning(9, 0.4, spec.generator()) == sample_er_spanning(9, 0.4, spec.generator())


def test_derived_streams_differ():
    spec = RngSpec(3)
    a = spec.derive(0).generator().random(4)
    b = spec.derive(1).generator().random(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, RngSpec(3).derive(0).generator().random(4))


def test_uniform_stream_unread():
    us = UniformStream(RngSpec(4).generator())
    x = us.take(5)
    us.unread(x[2:])
    assert np.array_equal(us.take(3), x[2:])

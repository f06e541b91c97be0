import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from arboret.randtree import enumerate_ordered, sample_uniform_ordered
from arboret.trees import (
    LabeledTree,
    NotFullBinaryError,
    OrderedTree,
    ParseError,
    SimpleGraph,
    bfs_order,
    double_node,
    double_node_inverse,
    leaf_count,
    parse_paren,
    to_paren,
    tree_from_json,
    tree_to_json,
)


@st.composite
def ordered_trees(draw, max_n=60):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return sample_uniform_ordered(n, seed)


# parse / print -----------------------------------------------------------------


def test_parse_single_node():
    t = parse_paren("()")
    assert (t.n, t.leaves) == (1, 1)


def test_parse_cherry():
    t = parse_paren("(()())")
    assert (t.n, t.leaves) == (3, 2)
    assert t.degrees == (2, 0, 0)


@pytest.mark.parametrize("text,offset", [("(()", 3), ("())", 2), ("", 0), ("(x)", 1), ("()()", 2)])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_paren(text)
    assert info.value.offset == offset


def test_to_paren_examples():
    assert to_paren(OrderedTree.single()) == "()"
    assert to_paren(OrderedTree.path(3)) == "((()))"
    assert to_paren(OrderedTree.from_nested(((), ((),)))) == "(()(()))"


def test_paren_roundtrip_exhaustive():
    for n in range(1, 13):
        for t in enumerate_ordered(n):
            assert parse_paren(to_paren(t)) == t


def test_paren_matches_oracle_enumeration():
    for n in range(1, 10):
        mine = sorted(to_paren(t) for t in enumerate_ordered(n))
        ref = sorted(oracles.paren(t) for t in oracles.nested_trees(n))
        assert mine == ref


def test_leaf_count_examples():
    assert leaf_count(OrderedTree.single()) == 1
    assert leaf_count(OrderedTree.star(4)) == 4
    assert leaf_count(parse_paren("((()))")) == 1


@given(ordered_trees())
def test_leaf_count_matches_nested(t):
    assert leaf_count(t) == oracles.leaves(t.to_nested())
    assert oracles.size(t.to_nested()) == t.n


# json -----------------------------------------------------------------------------


def test_json_roundtrip():
    t = parse_paren("(()(()))")
    obj = tree_to_json(t)
    assert obj == {"n": 4, "children": [[1, 2], [], [3], []]}
    assert tree_from_json(json.loads(json.dumps(obj))) == t


def test_json_rejects_non_bfs_indexing():
    with pytest.raises(ValueError):
        tree_from_json({"n": 3, "children": [[2, 1], [], []]})


# double-node -----------------------------------------------------------------


def test_double_node_small_examples():
    assert double_node(OrderedTree.single()) == OrderedTree.single()
    b = double_node(OrderedTree.path(2))
    assert b.n == 3 and b.is_full_binary()
    images = {double_node(t) for t in enumerate_ordered(3)}
    assert len(images) == 2 and all(b.n == 5 for b in images)


def test_double_node_inverse_examples():
    three = parse_paren("(()())")
    assert double_node_inverse(three) == OrderedTree.path(2)
    assert double_node_inverse(OrderedTree.single()) == OrderedTree.single()
    caterpillar = parse_paren("((()())())")
    pre = double_node_inverse(caterpillar)
    assert pre.n == 3
    assert [t for t in enumerate_ordered(3) if double_node(t) == caterpillar] == [pre]


def test_double_node_inverse_rejects_non_full():
    with pytest.raises(NotFullBinaryError):
        double_node_inverse(OrderedTree.path(2))


def test_double_node_bijection_exhaustive():
    for n in range(1, 9):
        images = set()
        for t in enumerate_ordered(n):
            b = double_node(t)
            assert b.n == 2 * n - 1 and b.is_full_binary()
            assert double_node_inverse(b) == t
            images.add(b)
        # ordered trees on n nodes and full binary trees on 2n-1 nodes are equinumerous
        assert len(images) == oracles.catalan(n - 1)


# structure ------------------------------------------------------------------------


def test_bfs_order_example():
    t = parse_paren("(()(()))")
    assert list(bfs_order(t)) == [0, 1, 2, 3]
    assert t.parents()[3] == 2
    assert bfs_order(OrderedTree.single()) == range(1)


@given(ordered_trees())
def test_level_sizes_partition_n(t):
    sizes = t.level_sizes()
    assert sum(sizes) == t.n
    assert len(sizes) == t.depth + 1
    assert all(s > 0 for s in sizes)


def test_invalid_profiles_rejected():
    for bad in ([0, 1], [2, 0], [1, 0, 0], []):
        with pytest.raises(ValueError):
            OrderedTree(bad)


# labeled --------------------------------------------------------------------------


def test_labeled_tree_validation():
    LabeledTree(3, ((1, 2), (2, 3)))
    with pytest.raises(ValueError):
        LabeledTree(3, ((1, 2), (1, 2)))
    with pytest.raises(ValueError):
        LabeledTree(4, ((1, 2), (2, 3), (1, 3)))


def test_labeled_text_roundtrip():
    t = LabeledTree(4, ((4, 2), (1, 2), (3, 1)))
    assert t.to_text() == "1 2\n1 3\n2 4\n"
    assert LabeledTree.from_text(t.to_text()) == t


def test_simple_graph():
    g = SimpleGraph.complete(4)
    assert len(g.edges) == 6 and g.is_connected()
    assert not SimpleGraph(2, frozenset()).is_connected()
    with pytest.raises(ValueError):
        SimpleGraph(3, frozenset({(1, 4)}))

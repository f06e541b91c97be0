"""Reference representations: Newick text, adjacency lists, Pruefer sequences."""

from __future__ import annotations

import heapq
from typing import Sequence

from ..trees import LabeledTree, OrderedTree, ParseError


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


# Newick (structure only: no names, no branch lengths, no semicolon) ---------


def newick_emit(t: OrderedTree) -> str:
    out: list[str] = []
    stack = [[0, 0]]
    while stack:
        top = stack[-1]
        v, j = top
        k = t.degree(v)
        if k == 0:
            stack.pop()
            continue
        if j == 0:
            out.append("(")
        elif j < k:
            out.append(",")
        if j < k:
            top[1] = j + 1
            stack.append([t.children(v)[j], 0])
        else:
            out.append(")")
            stack.pop()
    return "".join(out)


def newick_parse(text: str) -> OrderedTree:
    text = text.strip()
    if text.endswith(";"):
        text = text[:-1].rstrip()
    kids: list[list[int]] = [[]]
    stack: list[int] = []
    pending: int | None = 0  # node at the current position, type still open
    for i, ch in enumerate(text):
        if ch == "(":
            if pending is None:
                raise ParseError("'(' must start a subtree", i)
            stack.append(pending)
            pending = len(kids)
            kids.append([])
            kids[stack[-1]].append(pending)
        elif ch == ",":
            if not stack:
                raise ParseError("',' outside any subtree", i)
            pending = len(kids)
            kids.append([])
            kids[stack[-1]].append(pending)
        elif ch == ")":
            if not stack:
                raise ParseError("unbalanced ')'", i)
            stack.pop()
            pending = None
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    if stack:
        raise ParseError("unbalanced: missing ')'", len(text))
    return OrderedTree.from_child_lists(kids)


def newick_cost(t: OrderedTree) -> int:
    """Two bits per structural character (three symbols), no terminator."""
    return 2 * len(newick_emit(t))


# adjacency list -------------------------------------------------------------


def adjlist_cost(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2 * n * ceil_log2(n)


def label_overhead(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * ceil_log2(n)


# Pruefer ---------------------------------------------------------------------


def prufer_encode(t: LabeledTree) -> tuple[int, ...]:
    n = t.n
    if n < 2:
        raise ValueError("Pruefer sequences need n >= 2")
    adj = [set(a) for a in t.adjacency()]
    leaves = [v for v in range(1, n + 1) if len(adj[v]) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (nb,) = adj[leaf]
        seq.append(nb)
        adj[nb].discard(leaf)
        if len(adj[nb]) == 1:
            heapq.heappush(leaves, nb)
    return tuple(seq)


def prufer_decode(seq: Sequence[int], n: int) -> LabeledTree:
    if n < 2:
        raise ValueError("Pruefer sequences need n >= 2")
    seq = [int(x) for x in seq]
    if len(seq) != n - 2:
        raise ValueError(f"sequence length {len(seq)}, expected {n - 2}")
    bad = [x for x in seq if not 1 <= x <= n]
    if bad:
        raise ValueError(f"labels outside 1..{n}: {bad[:5]}")
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return LabeledTree(n, tuple(edges))

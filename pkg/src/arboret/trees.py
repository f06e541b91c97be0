"""Tree and graph data model.

Ordered trees are stored by their breadth-first child-count profile: node ``i``
is the ``i``-th node met in BFS order (root is 0) and its children are the
consecutive BFS indices ``first[i] .. first[i] + deg[i] - 1``.  Because siblings
are contiguous in BFS order the profile alone determines the tree, so two trees
are equal exactly when their profiles are.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class NotFullBinaryError(ValueError):
    pass


class OrderedTree:
    """Rooted, ordered, unlabeled tree (immutable)."""

    __slots__ = ("_deg", "_first", "_hash")

    def __init__(self, degrees: Iterable[int]):
        deg = tuple(int(d) for d in degrees)
        if not deg:
            raise ValueError("a tree has at least one node")
        first = tuple(1 + s for s in accumulate((0,) + deg[:-1]))
        n = len(deg)
        # every node k < n must have been discovered before it is read
        for k in range(n):
            if deg[k] < 0:
                raise ValueError(f"negative child count at BFS index {k}")
            if k and first[k] <= k:
                raise ValueError(f"child-count profile disconnects at BFS index {k}")
        if first[-1] + deg[-1] != n:
            raise ValueError(f"child counts sum to {first[-1] + deg[-1] - 1}, expected {n - 1}")
        self._deg = deg
        self._first = first
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def single(cls) -> "OrderedTree":
        return cls((0,))

    @classmethod
    def path(cls, n: int) -> "OrderedTree":
        return cls((1,) * (n - 1) + (0,))

    @classmethod
    def star(cls, leaves: int) -> "OrderedTree":
        return cls((leaves,) + (0,) * leaves)

    @classmethod
    def from_child_lists(cls, children: Mapping[int, Sequence[int]] | Sequence[Sequence[int]], root=0) -> "OrderedTree":
        """Build from an arbitrary node -> ordered-children mapping."""
        if isinstance(children, Mapping):
            get = children.get
        else:
            def get(v, default=()):
                return children[v] if v < len(children) else default
        deg = []
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            kids = get(v, ())
            deg.append(len(kids))
            for c in kids:
                if c in seen:
                    raise ValueError(f"node {c} reached twice; not a tree")
                seen.add(c)
                queue.append(c)
        return cls(deg)

    @classmethod
    def from_nested(cls, nested) -> "OrderedTree":
        """Build from nested sequences, e.g. ``((), ((),))``."""
        deg = []
        queue = deque([nested])
        while queue:
            v = queue.popleft()
            deg.append(len(v))
            queue.extend(v)
        return cls(deg)

    # structure ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._deg)

    @property
    def degrees(self) -> tuple[int, ...]:
        return self._deg

    @property
    def leaves(self) -> int:
        return sum(1 for d in self._deg if d == 0)

    def degree(self, v: int) -> int:
        return self._deg[v]

    def children(self, v: int) -> range:
        f = self._first[v]
        return range(f, f + self._deg[v])

    def parents(self) -> list[int]:
        par = [-1] * self.n
        for v, d in enumerate(self._deg):
            f = self._first[v]
            for c in range(f, f + d):
                par[c] = v
        return par

    def depths(self) -> list[int]:
        dep = [0] * self.n
        for v, d in enumerate(self._deg):
            f = self._first[v]
            for c in range(f, f + d):
                dep[c] = dep[v] + 1
        return dep

    @property
    def depth(self) -> int:
        return max(self.depths())

    def level_sizes(self) -> list[int]:
        dep = self.depths()
        sizes = [0] * (dep[-1] + 1)
        for x in dep:
            sizes[x] += 1
        return sizes

    def preorder(self) -> Iterator[int]:
        stack = [0]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(reversed(self.children(v)))

    def is_full_binary(self) -> bool:
        return all(d in (0, 2) for d in self._deg)

    def to_nested(self):
        built: list = [None] * self.n
        for v in range(self.n - 1, -1, -1):
            built[v] = tuple(built[c] for c in self.children(v))
        return built[0]

    # dunder -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, OrderedTree) and self._deg == other._deg

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._deg)
        return self._hash

    def __lt__(self, other: "OrderedTree") -> bool:
        return (self.n, self._deg) < (other.n, other._deg)

    def __repr__(self) -> str:
        if self.n <= 40:
            return f"OrderedTree({to_paren(self)!r})"
        return f"OrderedTree(n={self.n}, leaves={self.leaves})"


def leaf_count(t: OrderedTree) -> int:
    return t.leaves


def bfs_order(t: OrderedTree) -> range:
    """Node indices in breadth-first order (identity, by construction)."""
    return range(t.n)


def parse_paren(text: str) -> OrderedTree:
    """Parse ``"(" children ")"`` text, e.g. ``"(()(()))"``."""
    text = text.strip()
    if not text:
        raise ParseError("empty tree text", 0)
    kids: list[list[int]] = []
    stack: list[int] = []
    closed_root = False
    for i, ch in enumerate(text):
        if ch == "(":
            if closed_root:
                raise ParseError("text continues after the root closed", i)
            v = len(kids)
            kids.append([])
            if stack:
                kids[stack[-1]].append(v)
            stack.append(v)
        elif ch == ")":
            if not stack:
                raise ParseError("unbalanced ')'", i)
            stack.pop()
            closed_root = not stack
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    if stack:
        raise ParseError("unbalanced: missing ')'", len(text))
    return OrderedTree.from_child_lists(kids)


def to_paren(t: OrderedTree) -> str:
    out = ["("]
    stack = [(0, 0)]
    while stack:
        v, k = stack[-1]
        if k < t.degree(v):
            stack[-1] = (v, k + 1)
            out.append("(")
            stack.append((t.children(v)[k], 0))
        else:
            out.append(")")
            stack.pop()
    return "".join(out)


def tree_to_json(t: OrderedTree) -> dict:
    return {"n": t.n, "children": [list(t.children(v)) for v in range(t.n)]}


def tree_from_json(obj: Mapping) -> OrderedTree:
    children = obj["children"]
    if len(children) != obj["n"]:
        raise ValueError("children list length does not match n")
    t = OrderedTree(len(c) for c in children)
    if any(list(t.children(v)) != list(children[v]) for v in range(t.n)):
        raise ValueError("children are not indexed in BFS order")
    return t


def double_node(t: OrderedTree) -> OrderedTree:
    """Map an ordered tree on n nodes to a full binary tree on 2n-1 nodes.

    Every non-root node becomes a (child-node, sibling-node) pair hung as
    (left, right) under the child-node of its parent when it is a first
    child, otherwise under the sibling-node of its left sibling.
    """
    out: list[list[int]] = [[]]
    cnode = [0] * t.n
    snode = [0] * t.n
    for u in range(t.n):
        kids = t.children(u)
        for j, v in enumerate(kids):
            anchor = cnode[u] if j == 0 else snode[v - 1]
            cnode[v], snode[v] = len(out), len(out) + 1
            out.append([])
            out.append([])
            out[anchor] = [cnode[v], snode[v]]
    return OrderedTree.from_child_lists(out)


def double_node_inverse(b: OrderedTree) -> OrderedTree:
    if not b.is_full_binary():
        bad = next(v for v in range(b.n) if b.degree(v) not in (0, 2))
        raise NotFullBinaryError(f"node {bad} has {b.degree(bad)} children")
    kids: list[list[int]] = [[]]
    queue = deque([(0, 0)])  # (binary c-node, original node)
    while queue:
        x, v = queue.popleft()
        cur = x
        while b.degree(cur) == 2:
            left, right = b.children(cur)
            w = len(kids)
            kids.append([])
            kids[v].append(w)
            queue.append((left, w))
            cur = right
    return OrderedTree.from_child_lists(kids)


# labeled structures ------------------------------------------------------


def _norm_edge(e) -> tuple[int, int]:
    u, v = (int(x) for x in e)
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on labels ``1..n``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(_norm_edge(e) for e in self.edges)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u < 1 or v > self.n:
                raise ValueError(f"edge {(u, v)} outside labels 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

    def adjacency(self) -> list[list[int]]:
        """Sorted neighbour lists indexed by label (index 0 unused)."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def laplacian(self) -> np.ndarray:
        L = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            L[u - 1, v - 1] = L[v - 1, u - 1] = -1
            L[u - 1, u - 1] += 1
            L[v - 1, v - 1] += 1
        return L

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = self.adjacency()
        seen = {1}
        stack = [1]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


@dataclass(frozen=True)
class LabeledTree:
    """Tree on labels ``1..n``; edges kept as sorted ``(u, v)`` pairs, ``u < v``."""

    n: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(sorted({_norm_edge(e) for e in self.edges}))
        if self.n < 1:
            raise ValueError("a tree has at least one node")
        if len(edges) != self.n - 1:
            raise ValueError(f"{len(edges)} distinct edges, expected {self.n - 1}")
        g = SimpleGraph(self.n, frozenset(edges))
        if not g.is_connected():
            raise ValueError("edges do not form a connected tree")
        object.__setattr__(self, "edges", edges)

    def adjacency(self) -> list[list[int]]:
        return SimpleGraph(self.n, frozenset(self.edges)).adjacency()

    def as_graph(self) -> SimpleGraph:
        return SimpleGraph(self.n, frozenset(self.edges))

    def to_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges)

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "LabeledTree":
        edges = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return cls(len(edges) + 1 if n is None else n, tuple(edges))

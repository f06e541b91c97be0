"""Random tree sources, exact counters and exhaustive enumerators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np

from .trees import LabeledTree, OrderedTree, SimpleGraph

DEFAULT_ENUM_CAP = 16


class CapExceeded(RuntimeError):
    """A generated tree outgrew its node cap; the partial tree is discarded."""


class Exhausted(RuntimeError):
    """A rejection sampler ran out of attempts (or support makes success impossible)."""


class NotConnected(ValueError):
    pass


# randomness --------------------------------------------------------------


@dataclass(frozen=True)
class RngSpec:
    """Seed plus stream path for PCG64 streams derived through ``SeedSequence``.

    ``derive(i)`` gives an independent child stream, so per-trial streams do not
    depend on how trials are split across workers.
    """

    seed: int
    stream: int = 0
    path: tuple = field(default=())

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, *self.path))
        return np.random.Generator(np.random.PCG64(ss))

    def derive(self, *keys: int) -> "RngSpec":
        return replace(self, path=self.path + tuple(keys))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSpec):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngSpec(0 if rng is None else int(rng)).generator()
    raise TypeError(f"cannot make a generator from {type(rng).__name__}")


class UniformStream:
    """Sequential uniform doubles drawn from a generator in fixed blocks.

    Reading the stream in any chunking yields the same values, which lets scalar
    and batched samplers consume identical randomness.
    """

    BLOCK = 4096

    def __init__(self, rng):
        self._gen = as_generator(rng)
        self._buf = np.empty(0)
        self._pos = 0

    def take(self, k: int) -> np.ndarray:
        avail = self._buf.size - self._pos
        if k <= avail:
            out = self._buf[self._pos:self._pos + k]
            self._pos += k
            return out
        head = self._buf[self._pos:]
        need = k - avail
        fresh = self._gen.random(max(need, self.BLOCK))
        self._buf, self._pos = fresh, need
        return np.concatenate([head, fresh[:need]])

    def next(self) -> float:
        if self._pos >= self._buf.size:
            self._buf, self._pos = self._gen.random(self.BLOCK), 0
        u = self._buf[self._pos]
        self._pos += 1
        return float(u)

    def unread(self, values: np.ndarray) -> None:
        """Push back values taken but not consumed (they are read again next)."""
        self._buf = np.concatenate([values, self._buf[self._pos:]])
        self._pos = 0


# children distribution ---------------------------------------------------


@dataclass(frozen=True)
class ChildrenDistribution:
    """Probability mass on child counts ``0..K`` (``mass[i]`` = P(i children))."""

    mass: tuple

    def __post_init__(self):
        m = tuple(float(x) for x in self.mass)
        if not m:
            raise ValueError("empty children distribution")
        if any(x < 0 or not math.isfinite(x) for x in m):
            raise ValueError("masses must be finite and non-negative")
        if abs(math.fsum(m) - 1.0) > 1e-12:
            raise ValueError(f"masses sum to {math.fsum(m)!r}, not 1")
        if m[0] <= 0:
            raise ValueError("P(0 children) must be positive")
        while len(m) > 1 and m[-1] == 0:
            m = m[:-1]
        object.__setattr__(self, "mass", m)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "ChildrenDistribution":
        k = max(mapping)
        return cls(tuple(float(mapping.get(i, 0.0)) for i in range(k + 1)))

    @classmethod
    def from_json(cls, obj) -> "ChildrenDistribution":
        if isinstance(obj, str):
            obj = json.loads(obj)
        support, mass = obj["support"], obj["mass"]
        if len(support) != len(mass):
            raise ValueError("support and mass lengths differ")
        if len(set(support)) != len(support) or min(support) < 0:
            raise ValueError("support must be distinct non-negative integers")
        return cls.from_mapping(dict(zip((int(s) for s in support), mass)))

    def to_json(self) -> dict:
        sup = [i for i, x in enumerate(self.mass) if x > 0]
        return {"support": sup, "mass": [self.mass[i] for i in sup]}

    @property
    def max_children(self) -> int:
        return len(self.mass) - 1

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.mass) if x > 0)

    def pmf(self, i: int) -> float:
        return self.mass[i] if 0 <= i < len(self.mass) else 0.0

    @property
    def p0(self) -> float:
        return self.mass[0]

    @property
    def mean(self) -> float:
        return math.fsum(i * x for i, x in enumerate(self.mass))

    @property
    def variance(self) -> float:
        mu = self.mean
        return math.fsum(x * (i - mu) ** 2 for i, x in enumerate(self.mass))

    @property
    def entropy(self) -> float:
        return -math.fsum(x * math.log2(x) for x in self.mass if x > 0)

    @property
    def phase(self) -> str:
        mu = self.mean
        if abs(mu - 1.0) <= 1e-12:
            return "critical"
        return "subcritical" if mu < 1 else "supercritical"

    @property
    def subcritical(self) -> bool:
        return self.phase == "subcritical"

    def truncated(self, limit: int) -> "ChildrenDistribution":
        """Distribution conditioned on at most ``limit`` children."""
        head = self.mass[:limit + 1] if limit >= 0 else ()
        z = math.fsum(head)
        if z <= 0:
            raise ValueError(f"no mass on child counts <= {limit}")
        return ChildrenDistribution(tuple(x / z for x in head))

    def sample(self, rng, size: int) -> np.ndarray:
        cdf = np.cumsum(self.mass)
        cdf[-1] = np.inf
        return np.searchsorted(cdf, as_generator(rng).random(size), side="right")


# counting and enumeration ------------------------------------------------


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def count_ordered(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return catalan(n - 1)


_UNORDERED = [0, 1]


def count_unordered(n: int) -> int:
    """Unlabeled unordered rooted trees on n nodes (OEIS A000081), exact."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _UNORDERED
    while len(a) <= n:
        m = len(a) - 1  # computes a(m + 1)
        total = 0
        for k in range(1, m + 1):
            s = sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
            total += s * a[m - k + 1]
        a.append(total // m)
    return a[n]


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")


def enumerate_ordered(n: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[OrderedTree]:
    """All ordered rooted trees on n nodes, as BFS child-count profiles."""
    _check_cap(n, cap)
    deg = [0] * n

    def rec(k: int, discovered: int):
        if k == n - 1:
            deg[k] = n - discovered
            yield OrderedTree(deg)
            return
        # after node k the next node (k + 1) must already be discovered
        for d in range(max(0, k + 2 - discovered), n - discovered + 1):
            deg[k] = d
            yield from rec(k + 1, discovered + d)

    if n == 1:
        yield OrderedTree.single()
        return
    yield from rec(0, 1)


def level_sequence_to_tree(levels: Sequence[int]) -> OrderedTree:
    """Preorder depth sequence (root depth 0) to ordered tree."""
    kids: list[list[int]] = [[] for _ in levels]
    stack: list[int] = []
    for v, lev in enumerate(levels):
        del stack[lev:]
        if stack:
            kids[stack[-1]].append(v)
        stack.append(v)
    return OrderedTree.from_child_lists(kids)


def enumerate_unordered(n: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[OrderedTree]:
    """One canonical ordered representative per unordered rooted tree.

    Level sequences are generated with the Beyer-Hedetniemi successor rule; each
    is the lexicographically largest preorder level sequence of its class.
    """
    _check_cap(n, cap)
    levels = list(range(n))
    while True:
        yield level_sequence_to_tree(levels)
        p = n - 1
        while p > 0 and levels[p] <= 1:
            p -= 1
        if p == 0:
            return
        q = p - 1
        while levels[q] != levels[p] - 1:
            q -= 1
        shift = p - q
        for i in range(p, n):
            levels[i] = levels[i - shift]


# samplers ----------------------------------------------------------------


def _dyck_to_tree(steps: np.ndarray) -> OrderedTree:
    kids: list[list[int]] = [[]]
    stack = [0]
    for s in steps.tolist():
        if s > 0:
            v = len(kids)
            kids.append([])
            kids[stack[-1]].append(v)
            stack.append(v)
        else:
            stack.pop()
    return OrderedTree.from_child_lists(kids)


def sample_uniform_ordered(n: int, rng) -> OrderedTree:
    """Uniform ordered tree on n nodes via the cycle lemma."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return OrderedTree.single()
    gen = as_generator(rng)
    steps = np.array([1] * (n - 1) + [-1] * n, dtype=np.int64)
    steps = gen.permutation(steps)
    m = int(np.argmin(np.cumsum(steps)))  # first minimum
    rotated = np.roll(steps, -(m + 1))
    return _dyck_to_tree(rotated[:-1])


def sample_uniform_labeled(n: int, rng) -> LabeledTree:
    from .codec.baselines import prufer_decode

    if n < 1:
        raise ValueError("n must be >= 1")
    if n <= 2:
        return LabeledTree(n, ((1, 2),) if n == 2 else ())
    seq = as_generator(rng).integers(1, n + 1, size=n - 2)
    return prufer_decode(seq.tolist(), n)


def sample_sgt(dist: ChildrenDistribution, rng, node_cap: int = 1_000_000) -> OrderedTree:
    """Grow a simply generated tree level by level; raise CapExceeded past node_cap."""
    gen = as_generator(rng)
    deg: list[int] = []
    pending = 1
    while pending:
        draws = dist.sample(gen, pending)
        deg.extend(draws.tolist())
        pending = int(draws.sum())
        if len(deg) + pending > node_cap:
            raise CapExceeded(f"tree exceeded node cap {node_cap}")
    return OrderedTree(deg)


def sgt_log2_probability(dist: ChildrenDistribution, t: OrderedTree) -> float:
    total = 0.0
    for d in t.degrees:
        m = dist.pmf(d)
        if m <= 0:
            return -math.inf
        total += math.log2(m)
    return total


def sgt_tree_probability(dist: ChildrenDistribution, t: OrderedTree) -> float:
    p = 1.0
    for d in t.degrees:
        p *= dist.pmf(d)
    return p


def cgw_support_nonempty(dist: ChildrenDistribution, n: int) -> bool:
    """True when some n-node tree has positive probability under dist."""
    target = n - 1
    mask = (1 << (target + 1)) - 1
    reach = 1
    for _ in range(n):
        nxt = 0
        for s in dist.support:
            nxt |= reach << s
        reach = nxt & mask
    return bool(reach >> target & 1)


def sample_cgw(dist: ChildrenDistribution, n: int, rng, max_rejects: int = 1_000_000) -> OrderedTree:
    """SGT conditioned on exactly n nodes.

    Rejection on the child-count sum, then the cycle-lemma rotation: an i.i.d.
    sequence with sum n-1 has exactly one rotation that is a valid profile, and
    the tree probability is invariant under reordering, so accepted outputs
    follow the conditioned law.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not cgw_support_nonempty(dist, n):
        raise Exhausted(f"no tree with {n} nodes has positive probability")
    gen = as_generator(rng)
    rejects = 0
    batch = 8
    top = max(8, min(4096, 1_000_000 // n))
    while rejects < max_rejects:
        draws = dist.sample(gen, batch * n).reshape(batch, n)
        ok = np.flatnonzero(draws.sum(axis=1) == n - 1)
        if ok.size == 0:
            rejects += batch
            batch = min(2 * batch, top)
            continue
        rejects += int(ok[0])
        if rejects >= max_rejects:
            break
        seq = draws[ok[0]]
        m = int(np.argmin(np.cumsum(seq - 1)))
        return OrderedTree(np.roll(seq, -(m + 1)).tolist())
    raise Exhausted(f"no {n}-node tree after {max_rejects} rejections")


def _pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu = np.triu_indices(n, k=1)
    return iu[0] + 1, iu[1] + 1


def sample_er_graph(n: int, p: float, rng) -> SimpleGraph:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    us = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    a, b = _pairs(n)
    keep = us.take(a.size) < p
    return SimpleGraph(n, frozenset(zip(a[keep].tolist(), b[keep].tolist())))


def sample_uniform_spanning_tree(g: SimpleGraph, rng) -> LabeledTree:
    """Wilson's loop-erased random walk rooted at label 1."""
    us = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    n = g.n
    if not g.is_connected():
        raise NotConnected("graph has no spanning tree")
    if n == 1:
        return LabeledTree(1, ())
    adj = g.adjacency()
    in_tree = [False] * (n + 1)
    nxt = [0] * (n + 1)
    in_tree[1] = True
    for i in range(2, n + 1):
        u = i
        while not in_tree[u]:
            nb = adj[u]
            nxt[u] = nb[int(us.next() * len(nb))]
            u = nxt[u]
        u = i
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    return LabeledTree(n, tuple((i, nxt[i]) for i in range(2, n + 1)))


def sample_er_spanning(n: int, p: float, rng, max_retries: int = 10_000, return_graph: bool = False):
    """Draw ER(n, p) graphs until one is connected, then a uniform spanning tree.

    At p = 1 the graph is complete and the draw is a uniform labeled tree, which
    is sampled directly through a random Pruefer sequence.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if n <= 2 or p == 1.0:
        t = sample_uniform_labeled(n, rng if not isinstance(rng, UniformStream) else rng._gen)
        return (t, SimpleGraph.complete(n)) if return_graph else t
    us = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    for _ in range(max_retries):
        g = sample_er_graph(n, p, us)
        if g.is_connected():
            t = sample_uniform_spanning_tree(g, us)
            return (t, g) if return_graph else t
    raise Exhausted(f"no connected ER({n}, {p}) graph in {max_retries} draws")


def sample_er_spanning_batch(n: int, p: float, count: int, rng, max_retries: int = 10_000) -> np.ndarray:
    """``count`` ER spanning trees as a ``(count, n-1)`` array of parent labels.

    Row ``k`` holds the Wilson successor of labels ``2..n``; the draws match
    repeated ``sample_er_spanning`` calls on one ``UniformStream``.
    """
    from . import _kernels

    if not 0.0 < p < 1.0 or n < 3:
        raise ValueError("batched sampler needs n >= 3 and 0 < p < 1")
    us = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    out = np.empty((count, n - 1), dtype=np.int64)
    done = 0
    chunk = max(1 << 16, 64 * n * n)
    while done < count:
        buf = us.take(chunk)
        k, used = _kernels.er_spanning_fill(n, p, buf, out[done:], max_retries)
        if k < 0:
            raise Exhausted(f"no connected ER({n}, {p}) graph in {max_retries} draws")
        us.unread(buf[used:])
        done += k
        if k == 0:
            chunk *= 2
    return out

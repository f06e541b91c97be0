"""Entropies, bounds and estimators for the random tree sources (all in bits)."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable

import numpy as np

from .randtree import (
    ChildrenDistribution,
    Exhausted,
    as_generator,
    catalan,
    count_unordered,
    enumerate_ordered,
    sgt_log2_probability,
)
from .trees import SimpleGraph

# a(n) ~ c d^n n^(-3/2) for unordered rooted trees
UNORDERED_D = 2.9557652856519949747
UNORDERED_C = 0.4399240125710253040
# rounded coefficients of n log2 d - 1.5 log2 n + log2 c
UNORDERED_SLOPE = 1.5635
UNORDERED_OFFSET = -1.1846


class PhaseError(ValueError):
    """Quantity only defined for subcritical children distributions."""


@dataclass(frozen=True)
class EntropyReport:
    model: str
    params: dict
    exact: float | None = None
    bound: float | None = None
    kind: str = "exact"  # exact | upper | asymptotic
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.exact is None and self.bound is None:
            raise ValueError("report needs an exact value or a bound")
        if self.kind not in ("exact", "upper", "asymptotic"):
            raise ValueError(f"unknown bound kind {self.kind!r}")

    def to_json(self) -> dict:
        out = {"model": self.model, "params": self.params}
        if self.exact is not None:
            out["exact"] = self.exact
        if self.bound is not None and self.kind != "exact":
            out[self.kind] = self.bound
        out.update(self.extra)
        return out


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


# uniform sources ------------------------------------------------------------


def unordered_asymptotic(n: int) -> float:
    return UNORDERED_SLOPE * n - 1.5 * math.log2(n) + UNORDERED_OFFSET


def uniform_unordered_entropy(n: int) -> EntropyReport:
    return EntropyReport(
        "uniform-unordered",
        {"n": n},
        exact=math.log2(count_unordered(n)),
        bound=unordered_asymptotic(n),
        kind="asymptotic",
    )


def uniform_ordered_entropy(n: int) -> EntropyReport:
    """Exact value uses C_{n-1} (the enumeration count); C_n is also reported."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = n - 1
    asym = 0.0 if k == 0 else 2 * k - 1.5 * math.log2(k) - 0.5 * math.log2(math.pi)
    return EntropyReport(
        "uniform-ordered",
        {"n": n},
        exact=math.log2(catalan(k)),
        bound=asym,
        kind="asymptotic",
        extra={"catalan_n_indexed": math.log2(catalan(n))},
    )


def labeled_entropy(n: int, rooted: bool = False) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    if rooted:
        return (n - 1) * math.log2(n)
    return 0.0 if n <= 2 else (n - 2) * math.log2(n)


# SGT / conditioned GW -----------------------------------------------------------


def _require_subcritical(dist: ChildrenDistribution) -> None:
    if not dist.subcritical:
        raise PhaseError(f"mean child count {dist.mean:g} is not below 1 ({dist.phase})")


def sgt_entropy(dist: ChildrenDistribution) -> float:
    _require_subcritical(dist)
    return dist.entropy / (1.0 - dist.mean)


def sgt_expected_nodes(dist: ChildrenDistribution) -> float:
    _require_subcritical(dist)
    return 1.0 / (1.0 - dist.mean)


def cgw_bound_zero(dist: ChildrenDistribution, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * dist.entropy


def cgw_bound_first(dist: ChildrenDistribution, n: int) -> float:
    """H_{C,n-1} + (n-1) E[H_{C,n-1-X}] with X ~ dist truncated to {0..n-1}.

    H_{C,i} is the entropy of dist conditioned on at most i children.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    trunc = dist.truncated(n - 1)
    h = [dist.truncated(i).entropy for i in range(n)]
    inner = math.fsum(q * h[n - 1 - x] for x, q in enumerate(trunc.mass) if q > 0)
    return h[n - 1] + (n - 1) * inner


def cgw_exact_entropy(dist: ChildrenDistribution, n: int, cap: int = 12) -> float:
    """Entropy of the SGT law restricted to n-node trees, by enumeration."""
    logs = [sgt_log2_probability(dist, t) for t in enumerate_ordered(n, cap=cap)]
    logs = np.array([x for x in logs if x > -math.inf])
    if logs.size == 0:
        raise Exhausted(f"no {n}-node tree has positive probability")
    m = logs.max()
    w = np.exp2(logs - m)
    z = w.sum()
    q = w / z
    return max(0.0, float(-(q * (logs - m - math.log2(z))).sum()))


# ER spanning-tree model -------------------------------------------------------


def er_graph_entropy(n: int, p: float) -> float:
    return math.comb(n, 2) * binary_entropy(p)


def expected_spanning_count(n: int, p: float) -> float:
    if n < 2:
        raise ValueError("n must be >= 2")
    return p ** (n - 1) * float(n) ** (n - 2)


def er_tree_upper(n: int, p: float) -> float:
    if n < 2 or not 0.0 < p <= 1.0:
        raise ValueError("need n >= 2 and 0 < p <= 1")
    return (n - 1) * (binary_entropy(p) + math.log2(n * p)) - math.log2(n)


def giant_threshold_upper(n: int) -> float:
    """Bound quoted for p = 1/(n-1): (n-1)log2 n - (n-2)log2(n-2).

    Direct substitution into ``er_tree_upper`` gives this value minus log2 n.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    return (n - 1) * math.log2(n) - (n - 2) * math.log2(n - 2)


def max_tree_entropy(n: int) -> float:
    return labeled_entropy(n)


def kirchhoff_count(g: SimpleGraph) -> int:
    """Spanning-tree count: determinant of a Laplacian minor, fraction-free."""
    n = g.n
    if n <= 1:
        return 1
    m = [[int(x) for x in row[1:]] for row in g.laplacian()[1:]]
    k = n - 1
    prev = 1
    sign = 1
    for i in range(k - 1):
        if m[i][i] == 0:
            swap = next((r for r in range(i + 1, k) if m[r][i] != 0), None)
            if swap is None:
                return 0
            m[i], m[swap] = m[swap], m[i]
            sign = -sign
        piv = m[i][i]
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                m[r][c] = (m[r][c] * piv - m[r][i] * m[i][c]) // prev
            m[r][i] = 0
        prev = piv
    return sign * m[k - 1][k - 1]


def _er_laplacians(n: int, p: float, trials: int, gen: np.random.Generator) -> np.ndarray:
    iu = np.triu_indices(n, k=1)
    coins = gen.random((trials, iu[0].size)) < p
    A = np.zeros((trials, n, n))
    A[:, iu[0], iu[1]] = coins
    A = A + A.transpose(0, 2, 1)
    L = -A
    idx = np.arange(n)
    L[:, idx, idx] = A.sum(axis=2)
    return L


def spanning_counts_batch(laplacians: np.ndarray) -> np.ndarray:
    """Floating-point spanning counts for a stack of Laplacians (rounded)."""
    return np.rint(np.linalg.det(laplacians[:, 1:, 1:]))


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    used: int
    discarded: int


def mc_spanning_count(n: int, p: float, trials: int, rng) -> MonteCarloEstimate:
    """Sample mean of s(g) over ER(n, p) draws (disconnected graphs count 0)."""
    s = spanning_counts_batch(_er_laplacians(n, p, trials, as_generator(rng)))
    s = np.maximum(s, 0.0)
    return MonteCarloEstimate(float(s.mean()), float(s.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0,
                              trials, 0)


def mc_conditional_tree_entropy(n: int, p: float, trials: int, rng, chunk: int = 20_000) -> MonteCarloEstimate:
    """E[log2 s(g)] over connected ER(n, p) draws; disconnected draws are counted and dropped."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    gen = as_generator(rng)
    vals = []
    left = trials
    while left:
        k = min(chunk, left)
        sign, logdet = np.linalg.slogdet(_er_laplacians(n, p, k, gen)[:, 1:, 1:])
        # connected graphs have a positive minor; rounding guards against noise at zero
        keep = (sign > 0) & (logdet > math.log(0.5))
        vals.append(logdet[keep] / math.log(2))
        left -= k
    v = np.concatenate(vals)
    if v.size == 0:
        raise Exhausted("every sampled graph was disconnected")
    se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return MonteCarloEstimate(float(v.mean()), se, int(v.size), trials - int(v.size))


def plugin_entropy(samples: Iterable[Hashable] | np.ndarray) -> float:
    """-sum f log2 f over empirical frequencies; array rows count as keys."""
    if isinstance(samples, np.ndarray) and samples.ndim == 2:
        _, counts = np.unique(samples, axis=0, return_counts=True)
    else:
        counts = np.array(list(Counter(samples).values()))
    if counts.size == 0:
        raise ValueError("no samples")
    f = counts / counts.sum()
    return float(-(f * np.log2(f)).sum())


def sgt_information_mc(dist: ChildrenDistribution, trials: int, rng, node_cap: int = 1_000_000) -> MonteCarloEstimate:
    """Monte Carlo mean of -log2 p(t) over SGT draws."""
    from .randtree import sample_sgt

    gen = as_generator(rng)
    vals = np.array([-sgt_log2_probability(dist, sample_sgt(dist, gen, node_cap)) for _ in range(trials)])
    se = float(vals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return MonteCarloEstimate(float(vals.mean()), se, trials, 0)

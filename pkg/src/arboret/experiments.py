"""Deterministic CSV tables behind the figures (no plotting)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import entropy
from .codec.baselines import adjlist_cost, label_overhead
from .codec.traversal import pc_length, td_length, treeexplorer_length
from .lzpipe import ERSource, RedundancyReport, SGTSource, measure_redundancy
from .randtree import ChildrenDistribution, RngSpec, catalan, count_unordered, enumerate_unordered

FIGURES = ("uniform", "adjlist", "newick", "er-sweep", "giant", "redundancy")

DEFAULT_N = {
    "uniform": tuple(range(1, 15)),
    "adjlist": tuple(range(2, 51)),
    "newick": tuple(range(2, 51)),
    "er-sweep": (100,),
    "giant": (10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000),
    "redundancy": (50, 500),
}
DEFAULT_P = {
    "er-sweep": tuple(round(0.01 * k, 2) for k in range(1, 100)),
    "redundancy": (1.0,),
}


@dataclass(frozen=True)
class ExperimentConfig:
    figure: str
    n_values: tuple = ()
    p_values: tuple = ()
    trials: int = 100
    seed: int = 0
    out: str | None = None
    threads: int | None = None
    dist: ChildrenDistribution | None = None

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise ValueError(f"unknown figure {self.figure!r}; choose from {', '.join(FIGURES)}")
        if not self.n_values:
            object.__setattr__(self, "n_values", DEFAULT_N[self.figure])
        if not self.p_values and self.figure in DEFAULT_P:
            object.__setattr__(self, "p_values", DEFAULT_P[self.figure])
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(n < 1 for n in self.n_values):
            raise ValueError("n values must be >= 1")
        if any(not 0 < p <= 1 for p in self.p_values):
            raise ValueError("p values must lie in (0, 1]")


@lru_cache(maxsize=None)
def ordered_length_averages(n: int) -> dict:
    """Exact averages over uniform ordered trees on n nodes (Narayana counts)."""
    if n == 1:
        return {"leaves": Fraction(1), "pc": Fraction(0), "td": Fraction(0), "te": Fraction(1)}
    m = n - 1
    total = catalan(m)
    acc = {"leaves": 0, "pc": 0, "td": 0, "te": 0}
    for l in range(1, m + 1):
        cnt = math.comb(m, l) * math.comb(m, l - 1) // m
        acc["leaves"] += cnt * l
        acc["pc"] += cnt * pc_length(n, l)
        acc["td"] += cnt * td_length(n, l)
        acc["te"] += cnt * treeexplorer_length(n, l)
    return {k: Fraction(v, total) for k, v in acc.items()}


@lru_cache(maxsize=None)
def unordered_te_average(n: int) -> float:
    """Average TreeExplorer length over canonical unordered representatives."""
    total = 0
    count = 0
    for t in enumerate_unordered(n):
        total += treeexplorer_length(t.n, t.leaves)
        count += 1
    return total / count


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _uniform(cfg: ExperimentConfig):
    cols = ["n", "entropy_ordered", "entropy_ordered_catalan_n", "pc_avg", "td_avg", "treeexplorer_avg",
            "bound_2n_minus_2", "treeexplorer_below_bound", "trees_unordered", "entropy_unordered",
            "entropy_unordered_asymptotic", "treeexplorer_avg_unordered", "treeexplorer_rate_unordered"]
    rows = []
    prev = None
    for n in cfg.n_values:
        av = ordered_length_averages(n)
        h = entropy.uniform_ordered_entropy(n)
        hu = entropy.uniform_unordered_entropy(n)
        te_u = unordered_te_average(n) if n <= 16 else None
        rate = te_u - prev if (te_u is not None and prev is not None) else None
        prev = te_u
        rows.append([n, h.exact, h.extra["catalan_n_indexed"], av["pc"], av["td"], av["te"], 2 * n - 2,
                     int(av["te"] < 2 * n - 2), count_unordered(n), hu.exact, hu.bound, te_u, rate])
    return cols, rows


def _adjlist(cfg: ExperimentConfig):
    cols = ["n", "adjlist_bits", "label_bits", "treeexplorer_avg", "treeexplorer_labeled_avg"]
    rows = []
    for n in cfg.n_values:
        te = ordered_length_averages(n)["te"]
        rows.append([n, adjlist_cost(n), label_overhead(n), te, te + label_overhead(n)])
    return cols, rows


def _newick(cfg: ExperimentConfig):
    cols = ["n", "newick_avg", "treeexplorer_avg", "pc_avg", "td_avg"]
    rows = []
    for n in cfg.n_values:
        av = ordered_length_averages(n)
        newick = 0 if n == 1 else 4 * n - 2 * av["leaves"] - 2
        rows.append([n, Fraction(newick), av["te"], av["pc"], av["td"]])
    return cols, rows


def _er_sweep(cfg: ExperimentConfig):
    cols = ["n", "p", "tree_upper", "tree_max", "graph_entropy", "upper_below_max"]
    rows = []
    for n in cfg.n_values:
        for p in cfg.p_values:
            up = entropy.er_tree_upper(n, p)
            mx = entropy.labeled_entropy(n)
            rows.append([n, float(p), up, mx, entropy.er_graph_entropy(n, p), int(up < mx)])
    return cols, rows


def _giant(cfg: ExperimentConfig):
    cols = ["n", "p", "bound", "bound_per_node", "substituted", "substituted_per_node", "tree_max_per_node"]
    rows = []
    for n in cfg.n_values:
        if n < 3:
            raise ValueError("giant figure needs n >= 3")
        p = 1.0 / (n - 1)
        b = entropy.giant_threshold_upper(n)
        s = entropy.er_tree_upper(n, p)
        rows.append([n, p, b, b / n, s, s / n, entropy.labeled_entropy(n) / n])
    return cols, rows


def _redundancy(cfg: ExperimentConfig):
    cols = list(RedundancyReport.COLUMNS)
    rows = []
    spec = RngSpec(cfg.seed)
    k = 0
    for n in cfg.n_values:
        for p in cfg.p_values:
            r = measure_redundancy(ERSource(n, p), cfg.trials, spec.derive(k), threads=cfg.threads)
            rows.append([r.row()[c] for c in cols])
            k += 1
    if cfg.dist is not None:
        r = measure_redundancy(SGTSource(cfg.dist), cfg.trials, spec.derive(k), threads=cfg.threads)
        rows.append([r.row()[c] for c in cols])
    return cols, rows


_BUILDERS = {
    "uniform": _uniform,
    "adjlist": _adjlist,
    "newick": _newick,
    "er-sweep": _er_sweep,
    "giant": _giant,
    "redundancy": _redundancy,
}


def run_experiment(cfg: ExperimentConfig) -> tuple[list[str], list[list]]:
    return _BUILDERS[cfg.figure](cfg)


def experiment_csv(cfg: ExperimentConfig) -> str:
    cols, rows = run_experiment(cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()

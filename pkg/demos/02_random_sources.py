# coding: utf-8

# # Random tree sources and their entropy
#
# A simply generated tree draws every node's child count from one distribution.
# When the mean child count is below one the tree is finite on average, and
# the entropy of the whole tree is H_C / (1 - mean).

# %%

import numpy as np

from arboret.entropy import (
    cgw_bound_first,
    cgw_bound_zero,
    cgw_exact_entropy,
    sgt_entropy,
    sgt_expected_nodes,
    sgt_information_mc,
)
from arboret.randtree import ChildrenDistribution, RngSpec, sample_cgw, sample_sgt
from arboret.trees import to_paren

dist = ChildrenDistribution.from_mapping({0: 0.5, 1: 0.3, 2: 0.2})
rng = RngSpec(2024).generator()
print("phase", dist.phase, "mean", dist.mean, "H_C", round(dist.entropy, 4))
print("expected nodes", sgt_expected_nodes(dist), "entropy", round(sgt_entropy(dist), 4))

# %%

sizes = np.array([sample_sgt(dist, rng).n for _ in range(20_000)])
print("empirical mean size", sizes.mean())
est = sgt_information_mc(dist, 20_000, rng)
print(f"Monte Carlo -log2 p(t): {est.mean:.4f} +- {est.stderr:.4f}")

# %% [markdown]
# ## Conditioning on the size
#
# Fixing n gives the conditioned Galton-Watson law. Its entropy is computed by
# enumerating every n-node tree. Two cheap bounds sit above it.

# %%

for n in range(2, 9):
    print(n, round(cgw_exact_entropy(dist, n), 4), round(cgw_bound_first(dist, n), 4), round(cgw_bound_zero(dist, n), 4))

print([to_paren(sample_cgw(dist, 5, rng)) for _ in range(4)])

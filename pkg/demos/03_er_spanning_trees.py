# coding: utf-8

# # Spanning trees of random graphs
#
# Draw an Erdos-Renyi graph, keep it if it is connected, then pick one of its
# spanning trees uniformly. The number of trees in the graph comes from the
# matrix-tree theorem.

# %%

import math

from arboret.entropy import (
    er_tree_upper,
    expected_spanning_count,
    kirchhoff_count,
    labeled_entropy,
    mc_conditional_tree_entropy,
    plugin_entropy,
)
from arboret.randtree import RngSpec, sample_er_spanning, sample_er_spanning_batch

rng = RngSpec(7).generator()
t, g = sample_er_spanning(8, 0.5, rng, return_graph=True)
print("graph edges", len(g.edges), "spanning trees", kirchhoff_count(g))
print(t.to_text())

# %% [markdown]
# The upper bound for the tree entropy meets the labeled-tree maximum at p = 0.5.

# %%

n = 100
for p in (0.05, 0.2, 0.5, 0.8):
    print(f"p={p}: bound {er_tree_upper(n, p):8.2f}  max {labeled_entropy(n):8.2f}")

# %% [markdown]
# ## Checking the bound on a small case
#
# At n = 7 there are 7^5 labeled trees, few enough to estimate the entropy from
# samples. The estimate lands above the bound, so the bound does not hold here.
# Averaging log2 s(g) over connected graphs only also overshoots log2 E[s(g)]
# when most graphs are disconnected.

# %%

rows = sample_er_spanning_batch(7, 0.4, 300_000, rng)
print("plug-in", round(plugin_entropy(rows), 3), "bound", round(er_tree_upper(7, 0.4), 3))
est = mc_conditional_tree_entropy(6, 0.3, 20_000, rng)
print("E[log2 s | connected]", round(est.mean, 3), "log2 E[s]", round(math.log2(expected_spanning_count(6, 0.3)), 3))

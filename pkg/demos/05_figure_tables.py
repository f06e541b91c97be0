# coding: utf-8

# # Tables behind the figures
#
# Each figure is a CSV table. The same tables come from
# `arboret experiment --figure NAME`.

# %%

import csv
import io

from arboret.experiments import ExperimentConfig, experiment_csv

uniform = list(csv.DictReader(io.StringIO(experiment_csv(ExperimentConfig("uniform")))))
for row in uniform:
    print(row["n"], round(float(row["entropy_ordered"]), 3), round(float(row["treeexplorer_avg"]), 3),
          row["bound_2n_minus_2"])

# %% [markdown]
# TreeExplorer beats 2n - 2 from three nodes on. At one and two nodes the
# one-bit branch flag alone reaches the bound.

# %%

print(experiment_csv(ExperimentConfig("giant", n_values=(10, 100, 1000, 10_000))))
print(experiment_csv(ExperimentConfig("newick", n_values=(2, 5, 10, 20))))

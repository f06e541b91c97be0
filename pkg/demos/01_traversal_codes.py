# coding: utf-8

# # Traversal codes for ordered trees
#
# Two walks over an ordered tree give two codes. Pit-climbing records the moves
# of a walker that starts at the leftmost leaf and climbs back to the root.
# Tunnel-digging writes each sibling group of an internal node, level by level.
# TreeExplorer keeps whichever one is shorter for the tree's leaf count.

# %%

from arboret import parse_paren, to_paren
from arboret.codec import (
    pc_encode,
    pc_parse_count,
    td_bits,
    td_decode,
    td_encode,
    treeexplorer_encode,
    treeexplorer_length,
)
from arboret.randtree import catalan, enumerate_ordered

cherry = parse_paren("(()())")
path = parse_paren("((()))")
for t in (cherry, path):
    print(to_paren(t), "PC", pc_encode(t), "TD", td_bits(td_encode(t)), "TreeExplorer", treeexplorer_encode(t))

# %% [markdown]
# The bit lengths depend only on n and the leaf count l: n + 2l - 3 for PC and
# 3n - 2l - 3 for TD. PC wins when leaves are scarce.

# %%

for n, l in [(10, 2), (10, 5), (10, 8)]:
    print(f"n={n} l={l}: PC {n + 2 * l - 3}, TD {3 * n - 2 * l - 3}, TreeExplorer {treeexplorer_length(n, l)}")

# %% [markdown]
# ## Binary forms are not uniquely decodable
#
# The three-symbol codes decode fine. Their binary forms merge two symbols into
# "0" prefixes, and different trees start to share a bit string. The first PC
# clash shows up at five nodes.

# %%

for n in range(3, 11):
    clash = sum(pc_parse_count(pc_encode(t)) > 1 for t in enumerate_ordered(n))
    print(f"n={n:2d}: {clash:5d} of {catalan(n - 1):5d} trees have an ambiguous binary PC code")

x, z = parse_paren("(((()))(()))"), parse_paren("(((())(())))")
print("binary TD:", td_bits(td_encode(x)), td_bits(td_encode(z)))
print("ternary TD decodes both:", td_decode(td_encode(x)) == x, td_decode(td_encode(z)) == z)

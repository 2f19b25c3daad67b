# %% [markdown]
# # Edges of tree faces
#
# On a tree skeleton two classes are adjacent exactly when they form an
# essential flip. Delta collects the nodes with a v-structure in only one of
# the two graphs.

# %%
import itertools

from cimpoly import Dag
from cimpoly.enumeration import enumerate_mecs_skeleton, path_graph, unlabeled_trees
from cimpoly.geometry import EdgeOracle, diameter
from cimpoly.trees import delta, is_essential_flip, subtree_condition, tree_bounds

out = Dag(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
two = Dag(5, [(1, 2), (3, 2), (3, 4), (5, 4)])
print(delta(out, two), is_essential_flip(out, two).to_json())

# %% [markdown]
# The per-node table, evaluated on a pair that differs on a subtree.

# %%
a = Dag(5, [(2, 1), (3, 1), (1, 4), (5, 1)])
b = Dag(5, [(1, 2), (1, 3), (4, 1), (5, 1)])
print(subtree_condition(a, b).to_json())

# %% [markdown]
# ## Diameters versus bounds
# Lower bound: half the longest path; upper bound: internal nodes.

# %%
for g in unlabeled_trees(6):
    vs = enumerate_mecs_skeleton(g)
    dm = diameter(EdgeOracle(vs).graph())[0]
    print(g.sorted_edges(), len(vs), "vertices, bounds", tree_bounds(g), "diameter", dm)

# %%
for n in range(2, 8):
    vs = enumerate_mecs_skeleton(path_graph(n))
    print("path", n, diameter(EdgeOracle(vs).graph())[0], (n - 1) // 2)

# %% [markdown]
# Flip verdicts against the LP on one tree.

# %%
vs = enumerate_mecs_skeleton(path_graph(5))
oracle = EdgeOracle(vs)
reps = [m.representative for m in vs.mecs]
agree = sum(
    oracle(vs.imsets[x], vs.imsets[y]) == is_essential_flip(reps[x], reps[y]).verdict
    for x, y in itertools.combinations(range(len(vs)), 2)
)
print(agree, "of", len(vs) * (len(vs) - 1) // 2, "pairs agree")

# %% [markdown]
# # Walking between DAGs
#
# Three constructions bound distances in the polytope: single-edge
# reversals on a fixed skeleton, whole parent-set moves through the empty
# graph, and essential flips on trees.

# %%
from cimpoly import Dag
from cimpoly.enumeration import enumerate_mecs, enumerate_mecs_skeleton
from cimpoly.geometry import EdgeOracle
from cimpoly.graphs import UGraph
from cimpoly.moves import cim_path, skeleton_path, tree_path

a = Dag(4, [(1, 2), (2, 3), (3, 4), (1, 3)])
b = Dag(4, [(2, 1), (3, 2), (4, 3), (3, 1)])
p = skeleton_path(a, b)
print(len(p.steps), "reversals for", a.num_edges, "edges")
print(p.validate(EdgeOracle(enumerate_mecs_skeleton(UGraph(4, [(1, 2), (2, 3), (3, 4), (1, 3)])))))

# %% [markdown]
# Through the empty graph: at most n - 1 parent sets out and n - 1 in.

# %%
complete = Dag(4, [(i, j) for i in range(1, 5) for j in range(i + 1, 5)])
p = cim_path(complete, Dag(4, [(4, 1), (2, 1), (3, 2)]))
for m in p.steps:
    print(m.to_json())
print("polytope steps:", p.polytope_length, p.validate(EdgeOracle(enumerate_mecs(4))))

# %% [markdown]
# ## A spider
# Center a = 1, legs 1 -> b -> c with b = 2..5 and c = 6..9. Turning every
# leg into a collider at b takes one flip per leg.

# %%
legs = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 6), (3, 7), (4, 8), (5, 9)]
start = Dag(9, legs)
target = Dag(9, legs[:4] + [(6, 2), (7, 3), (8, 4), (9, 5)])
p = tree_path(start, target)
for d in p.dags:
    print(sorted(d.edges)[4:])
oracle = EdgeOracle(enumerate_mecs_skeleton(UGraph(9, legs)))
print(p.polytope_length, "flips, all edges:", all(p.validate(oracle)))

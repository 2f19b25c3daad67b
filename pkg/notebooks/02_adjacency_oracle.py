# %% [markdown]
# # Deciding polytope edges exactly
#
# Two vertices span an edge iff some linear functional is maximized at
# exactly those two. The oracle solves that LP in exact rational arithmetic
# and hands back the functional, or a combination proving there is none.

# %%
from cimpoly import Dag, characteristic_imset
from cimpoly.enumeration import enumerate_mecs
from cimpoly.geometry import (
    decide_edge,
    diameter,
    edge_graph,
    parallelogram_witness,
    realizing_set_certificate,
    verify_certificate,
    verify_non_edge,
)

vs = enumerate_mecs(3)
chain = characteristic_imset(Dag(3, [(1, 2), (2, 3)]))
collider = characteristic_imset(Dag(3, [(1, 2), (3, 2)]))

dec = decide_edge(chain, collider, vs)
print("edge:", dec.edge, "margin:", dec.delta)
print([str(x) for x in dec.certificate.w], verify_certificate(dec.certificate, chain, collider, vs))

# %% [markdown]
# Empty graph versus complete DAG: not adjacent. The LP returns a combination
# of other vertices, and here there is even a parallelogram.

# %%
empty = characteristic_imset(Dag.empty(3))
full = characteristic_imset(Dag(3, [(1, 2), (1, 3), (2, 3)]))
dec = decide_edge(empty, full, vs)
print(dec.edge, verify_non_edge(dec.combination, empty, full, vs))
print(parallelogram_witness(empty, full, vs))

# %% [markdown]
# ## An explicit certificate
# Adding the parent set {1, 3} to node 2 of the empty graph.

# %%
cert = realizing_set_certificate(Dag.empty(3), 2, {1, 3})
print(verify_certificate(cert, empty, collider, vs))

# %% [markdown]
# ## The vertex-edge graph

# %%
eg = edge_graph(vs)
print(len(vs), "vertices,", eg.num_edges, "edges, diameter", diameter(eg)[0])

# %% [markdown]
# # Characteristic imsets and Markov equivalence
#
# A DAG is stored as per-node parent bitmasks; its characteristic imset is the
# set of node subsets S (|S| >= 2) where some node has all of S minus itself
# as parents.

# %%
from cimpoly import Dag, characteristic_imset, markov_equivalent
from cimpoly.enumeration import enumerate_dags, enumerate_mecs, essential_graph, mec_members
from cimpoly.imset import decode, dense_csv

chain = Dag(3, [(1, 2), (2, 3)])
fork = Dag(3, [(2, 1), (2, 3)])
collider = Dag(3, [(1, 2), (3, 2)])

for name, d in [("chain", chain), ("fork", fork), ("collider", collider)]:
    print(f"{name:9s}", characteristic_imset(d))

# %% [markdown]
# Chain and fork encode the same independence model, the collider does not.
# Equal imsets detect exactly that.

# %%
print(markov_equivalent(chain, fork), markov_equivalent(chain, collider))
print([sorted(m.edges) for m in mec_members(chain)])
print(essential_graph(collider))

# %% [markdown]
# The imset determines skeleton and v-structures.

# %%
print(decode(characteristic_imset(collider)))

# %% [markdown]
# ## Counting
# Vertices of the polytope are the equivalence classes.

# %%
for n in range(1, 5):
    vs = enumerate_mecs(n)
    print(n, sum(1 for _ in enumerate_dags(n)), "DAGs,", len(vs), "classes")

# %%
print(dense_csv(enumerate_mecs(3).imsets, 3))

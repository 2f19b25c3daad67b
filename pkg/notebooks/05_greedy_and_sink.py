# %% [markdown]
# # Greedy walks and the sink move
#
# A greedy walk takes the first strictly improving move until none is left.
# With only graph moves it can stall; with every polytope neighbour it
# always reaches the optimum of a linear objective.

# %%
import random
from fractions import Fraction

from cimpoly import Dag
from cimpoly.enumeration import enumerate_mecs
from cimpoly.geometry import edge_graph, evaluate
from cimpoly.imset import coordinates
from cimpoly.moves import greedy_walk, test_sink_conjecture

vs = enumerate_mecs(3)
eg = edge_graph(vs)
rng = random.Random(1)
w = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in coordinates(3)]
best = max(evaluate(w, im) for im in vs.imsets)

for label, kwargs in [("moves", {}), ("oracle", {"oracle_graph": eg})]:
    p = greedy_walk(Dag.empty(3), w, **kwargs)
    print(label, [str(evaluate(w, im)) for im in p.imsets], "optimum", best)

# %% [markdown]
# ## Sink moves
# Redirecting every edge at one node inward keeps the graph acyclic. Is the
# result always a neighbour on the skeleton face?

# %%
for n in (3, 4):
    rep = test_sink_conjecture(n)
    print(n, rep.instances, "instances,", rep.confirmed, "edges,",
          rep.skipped_equivalent, "same class,", len(rep.counterexamples), "counterexamples")

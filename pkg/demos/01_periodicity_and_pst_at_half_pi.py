# %% [markdown]
# # Periodicity and perfect state transfer at pi/2
#
# A gcd-graph on Z4 + Z2 + Z3 is built from a set of divisor tuples. Every
# element x whose componentwise gcd with the moduli lands in the set becomes a
# neighbour of 0. Below, the exact transition row at pi/2 is computed in a
# cyclotomic field, so "zero" really means zero.

# %%
import numpy as np

from gcdwalk import CayleyGraph, Group, RationalPiTime, classify_at, membership, transition_row
from gcdwalk.walk import float_oracle

g = Group.parse("Z4xZ2xZ3")
half = RationalPiTime(1, 2)
periodic_set = [(1, 1, 1), (1, 2, 1)]

graph = CayleyGraph.gcd_graph(g, periodic_set)
print(g, "order", g.order, "degree", len(graph.connection))

# %% [markdown]
# The 2-part of these tuples maps to a cube whose XOR-sum is zero and whose
# size is 4, so the membership check puts the set in the periodic class.

# %%
print(membership(g, periodic_set).to_json())
row = transition_row(graph, half)
print("nonzero entries:", row.nonzero_indices(), "value:", row[0])

# %% [markdown]
# Adding two tuples with full odd part gives a cube with nonzero XOR-sum.
# The exact row now has its single nonzero entry away from the origin.

# %%
pst_set = periodic_set + [(2, 2, 3), (4, 1, 3)]
verdict = classify_at(CayleyGraph.gcd_graph(g, pst_set), half)
print(verdict.kind, "shift", verdict.shift, "phase", verdict.phase)

# %% [markdown]
# The double-precision oracle agrees with the exact answer.

# %%
H = float_oracle(CayleyGraph.gcd_graph(g, pst_set), np.pi / 2)
print("|H[0, shift]| =", abs(H[0, g.index(verdict.shift)]))

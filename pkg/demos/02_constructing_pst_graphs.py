# %% [markdown]
# # Building a PST gcd-graph on any group of order divisible by 4
#
# `construct_pst` picks a periodic part and a transfer part according to the
# shape of the 2-part of the group, then the exact walk engine confirms it.

# %%
from gcdwalk import CayleyGraph, Group, RationalPiTime, certify_pst, classify_at, construct_pst

for literal in ["Z4", "Z2xZ2", "Z4xZ2xZ3", "Z8xZ3", "Z2xZ2xZ2xZ5", "Z16xZ2"]:
    g = Group.parse(literal)
    out = construct_pst(g)
    cert = certify_pst(g, out.periodic_part, out.pst_part)
    verdict = classify_at(CayleyGraph.gcd_graph(g, out.divisors), RationalPiTime(1, 2))
    print(f"{literal:<14} {out.lemma:<10} shift={verdict.shift} confirmed={cert.walk_confirmed}")

# %% [markdown]
# Odd order rules PST out entirely. Order 2 mod 4 is simply outside what the
# construction covers, and the refusal says so rather than guessing.

# %%
for literal in ["Z9", "Z3xZ5", "Z6", "Z2xZ9"]:
    print(literal, construct_pst(Group.parse(literal)))

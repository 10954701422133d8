# %% [markdown]
# # Eigenvalue parity and periodicity at pi
#
# Start from the PST graph on Z4 + Z2 + Z3 and add the tuple (2, 2, 1). That
# block splits as a one-element cube times K3 on Z3, and K3 has eigenvalues
# 2 and -1. Mixed parity means the enlarged graph is not periodic at pi, so
# it cannot have PST at any pi/2^k.

# %%
from gcdwalk import Group, factorize, parity_criterion, rule_out_pst, spectrum

g = Group.parse("Z4xZ2xZ3")
D = [(1, 1, 1), (1, 2, 1), (2, 2, 3), (4, 1, 3)]

fac = factorize(g, [(2, 2, 1)])
print("cube:", sorted(fac.cube.connection), "odd factor spectrum:", spectrum(fac.odd_graph).multiset())

verdict = parity_criterion(g, D, [(2, 2, 1)])
print(verdict.parity.value, "predicted", verdict.predicted_periodic_at_pi, "walk", verdict.walk_periodic_at_pi)

out = rule_out_pst(g, D, [(2, 2, 1)])
print(out.reason)
for t, kind in out.checked:
    print("  ", t, kind)

# %% [markdown]
# With (2, 1, 3) instead, the odd factor is a loop at every vertex (spectrum
# {1}), parity is uniform and the walk is periodic at pi.

# %%
verdict = parity_criterion(g, D, [(2, 1, 3)])
print(verdict.parity.value, "predicted", verdict.predicted_periodic_at_pi, "walk", verdict.walk_periodic_at_pi)
print(rule_out_pst(g, D, [(2, 1, 3)]).reason)

# %% [markdown]
# # Graph types
#
# A DAG over typed vertices describes which parties may signal to which.
# Vertex kinds pick the local object: `generic` is a bit channel, `fo` a
# bit, `fod` its dual and `unit` the trivial system.

# %%
from causlogic import causmodel as cm
from causlogic import graphtype as gt

G = gt.Dag("abc", [("a", "b"), ("b", "c")], ["generic", "fo", "generic"])
print(G.to_json())

# %% [markdown]
# ## Standard form
#
# The transitive closure, minus edges that leave a first-order vertex or
# enter a first-order dual one.

# %%
print(sorted(gt.standard_form(G).edges))
print(sorted(gt.standard_form(G.with_kinds(["fod", "generic", "generic"])).edges))

# %% [markdown]
# ## Three constructions, one object
#
# Intersecting the signalling cuts, intersecting all linear orders and
# contracting bit-wired local pieces give the same subspace.

# %%
gamma = cm.kind_gamma(G)
types = {m: cm.graph_type(G, gamma, m) for m in (cm.SIGNALLING, cm.ORDERED, cm.LOCAL2)}
print({m: T.states.affine_dim for m, T in types.items()})
print(len({T for T in types.values()}) == 1)

# %% [markdown]
# ## Inclusion and compatibility by graph search
#
# Inclusion of types is inclusion of standard forms.  Two graphs can be
# plugged together when the union of their standard forms is acyclic.

# %%
chain = gt.Dag("ab", [("a", "b")])
back = gt.Dag("ab", [("b", "a")])
print(gt.includes(gt.Dag("ab"), chain), gt.includes(chain, gt.Dag("ab")))
print(gt.compatible(chain, back))
print(gt.compatible(chain.with_kinds(["fo", "generic"]), back.with_kinds(["fod", "generic"])))

# %% [markdown]
# ## Counting
#
# The N-shaped graph a→c, b→c, b→d.

# %%
N = gt.Dag("abcd", [("a", "c"), ("b", "c"), ("b", "d")])
print(len(list(gt.topological_sorts(N))), "linear extensions")
print(len(list(gt.down_closed_subsets(N))), "strict down-closed subsets")

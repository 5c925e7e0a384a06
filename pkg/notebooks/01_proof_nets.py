# %% [markdown]
# # Proof-nets and switchings
#
# Formulae are written with `*` (tensor), `<` (seq), `%` (par), postfix `~`
# for negation and `!` for first-order atoms.  A formula is a net when every
# switching graph of its structure is acyclic.

# %%
from causlogic.formula import parse, pretty
from causlogic.proofnet import check_formula, structure_of, switching_graph
from causlogic.rewrite import fo, pom, structures_equivalent

# %% [markdown]
# ## A wire and a loop
#
# `A ⅋ A*` is the identity wire.  Its tensor twin closes the wire on itself.

# %%
for text in ["A % A~", "A * A~", "A < A~", "A~ < A"]:
    F = parse(text)
    v = check_formula(F)
    print(f"{pretty(F):12} net={v.is_net}  switchings={structure_of(F).switching_count()}")

# %% [markdown]
# When a structure is not a net the checker returns the lexicographically
# least bad switching and a cycle in its graph.

# %%
F = parse("(A < B) % (B~ < A~)")
P = structure_of(F)
v = check_formula(F)
print(v.to_json())
g = switching_graph(P, v.switching)
print(len(g.edges), "edges")
print([pretty(P.labels[i]) for i in v.cycle])

# %% [markdown]
# ## First-order atoms
#
# A first-order atom carries information in one direction only, so the seq
# `(A¹)* < A¹` is a net while `A¹ < (A¹)*` is not.

# %%
for text in ["!A~ < !A", "!A < !A~"]:
    print(pretty(parse(text)), check_formula(parse(text)).is_net)

# %% [markdown]
# ## Encodings
#
# `pom` swaps first-order axioms for seq gadgets over regular atoms and `fo`
# does the converse.  Both keep the verdict.

# %%
from causlogic.proofnet import is_proof_net

text = "((A < !B) % (A~ < !B~)) % I"
P = structure_of(parse(text))
for name, Q in [("original", P), ("pom", pom(P)), ("fo", fo(P))]:
    counts = {k: n for k, n in Q.counts().items() if n}
    print(f"{name:9} net={is_proof_net(Q).is_net}  {counts}")

# %% [markdown]
# Rewriting twice changes nothing.

# %%
print(pom(pom(P)) == pom(P), fo(fo(P)) == fo(P))

# %% [markdown]
# Sequents are compared up to a renaming of atoms.

# %%
Q = structure_of(parse("((X < !Y) % (X~ < !Y~)) % I"))
print(structures_equivalent(P, Q))

# %% [markdown]
# # Affine semantics
#
# A causal object is a carrier dimension plus an affine subspace of states
# over the rationals.  The dual holds every covector that pairs to one with
# each state.  Everything below is exact.

# %%
from causlogic import causmodel as cm
from causlogic.formula import parse
from causlogic.linalg import subset, witness_in_difference

two = cm.two()
chan = cm.chan22()
print(two, cm.dual(two), chan, sep="\n")

# %% [markdown]
# ## Three ways to put two channels together
#
# With no signalling, one-way signalling or arbitrary signalling the state
# spaces grow strictly.

# %%
t, s, p = cm.tensor(chan, chan), cm.seq(chan, chan), cm.parr(chan, chan)
print([x.states.affine_dim for x in (t, s, p)])
print(subset(t.states, s.states), subset(s.states, p.states))
w = witness_in_difference(s.states, t.states)
print("signalling from the first channel to the second:", [str(x) for x in w])

# %% [markdown]
# The tensor is what both orders have in common and the par is what they
# span together.

# %%
flip = cm.seq_flipped(chan, chan)
print(cm.intersection_obj(s, flip) == t, cm.union_obj(s, flip) == p)

# %% [markdown]
# ## First-order systems collapse the orders
#
# Information cannot leave a first-order system, so ⅋ with it is a one-way
# channel out of the other side.

# %%
for name, B in [("2", two), ("2*", cm.dual(two)), ("2-o2", chan)]:
    print(
        name,
        cm.parr(two, B) == cm.seq_flipped(two, B),
        cm.tensor(two, B) == cm.seq(two, B),
    )

# %% [markdown]
# ## Loops
#
# Feeding a bit channel back into itself pairs it with the cap, which is
# the trace.  A NOT gate gives 0 and the identity gives 2.  A normalized
# composite would give 1.

# %%
print(cm.trace_pairing([[0, 1], [1, 0]]), cm.trace_pairing([[1, 0], [0, 1]]))

# %% [markdown]
# ## Consistency of a wiring
#
# A formula is consistent when the caps joining its atom pairs form a
# normalized state of its interpretation.  This agrees with the net check.

# %%
from causlogic.proofnet import check_formula

for text in ["!A~ < !A", "!A < !A~", "(A < B) % (A~ < B~)", "(A < B) % (A~ * B~)"]:
    F = parse(text)
    print(f"{text:22} consistent={cm.consistent(F)}  net={check_formula(F).is_net}")

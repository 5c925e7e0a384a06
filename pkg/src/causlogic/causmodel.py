"""Affine semantic model over exact rationals.

A causal object is a carrier dimension with an affine subspace of states and
two normalization scalars.  States are vectors in Q^dim.  A composite
carrier is indexed row-major by its factors, so ``tensor(A, B)`` puts
``A``'s index in the slow position.  The dual of a state space is the set of
covectors pairing to one with every state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import formula as fm
from . import graphtype as gt
from .formula import Atom, Bin, Formula, Unit
from .linalg import ONE, ZERO, AffineSubspace, _q, solve_affine, to_rat, zeros

DEFAULT_MAX_DIM = 2**20


class NotFlat(ValueError):
    pass


class NotCompatible(ValueError):
    pass


class NotFoRespecting(ValueError):
    pass


class DimensionGuard(RuntimeError):
    pass


class CausalObject:
    """Carrier dimension, state subspace and normalization scalars."""

    __slots__ = ("dim", "states", "mu", "theta", "_dual")

    def __init__(self, dim: int, states: AffineSubspace, mu, theta):
        if states.dim != dim:
            raise ValueError("state space does not live on the carrier")
        self.dim = dim
        self.states = states
        self.mu = Fraction(mu)
        self.theta = Fraction(theta)
        self._dual = None

    def __eq__(self, other):
        if not isinstance(other, CausalObject):
            return NotImplemented
        return (self.dim, self.states, self.mu, self.theta) == (other.dim, other.states, other.mu, other.theta)

    def __hash__(self):
        return hash((self.dim, self.states, self.mu, self.theta))

    def __repr__(self):
        return f"CausalObject(dim={self.dim}, affine_dim={self.states.affine_dim}, mu={self.mu}, theta={self.theta})"

    @property
    def costates(self) -> AffineSubspace:
        return dual(self).states

    def is_first_order(self) -> bool:
        """A unique effect: the dual space is a single point."""
        return self.costates.affine_dim == 0

    def is_first_order_dual(self) -> bool:
        """A unique state."""
        return self.states.affine_dim == 0

    def to_json(self) -> dict:
        return {"dim": self.dim, "mu": str(self.mu), "theta": str(self.theta), "states": self.states.to_json()}


def _ones(n: int) -> np.ndarray:
    out = np.empty(n, dtype=object)
    out.fill(ONE)
    return out


def _scalar_on_ones(S: AffineSubspace) -> Fraction | None:
    """The unique t with t·(1,...,1) in S, or None."""
    if S.is_empty:
        return None
    n, b = S.equations()
    if n.shape[0] == 0:
        return None
    coef = n.dot(_ones(S.dim))
    t = None
    for c, rhs in zip(coef, b):
        if c == 0:
            if rhs != 0:
                return None
            continue
        val = rhs / c
        if t is None:
            t = val
        elif t != val:
            return None
    return None if t is None else to_rat(t)


def check_flat(A: CausalObject) -> None:
    """Raise NotFlat unless the object satisfies every normalization law."""
    if A.states.is_empty:
        raise NotFlat("empty state space")
    if A.mu == 0 or A.theta == 0:
        raise NotFlat("normalization scalars must be nonzero")
    if not A.states.contains(_ones(A.dim) * _q(A.mu)):
        raise NotFlat("scaled uniform state is not a state")
    co = A.states.annihilator_one()
    if co.is_empty or not co.contains(_ones(A.dim) * _q(A.theta)):
        raise NotFlat("scaled discard is not an effect")
    if A.mu * A.theta * A.dim != 1:
        raise NotFlat("mu * theta * dim must equal one")


def make_object(states: AffineSubspace) -> CausalObject:
    """Wrap a state subspace, deriving mu and theta; raise NotFlat if impossible."""
    mu = _scalar_on_ones(states)
    if mu is None or mu == 0:
        raise NotFlat("no scaled uniform state")
    co = states.annihilator_one()
    theta = _scalar_on_ones(co)
    if theta is None or theta == 0:
        raise NotFlat("no scaled discard effect")
    obj = CausalObject(states.dim, states, mu, theta)
    check_flat(obj)
    return obj


# -- basic objects -------------------------------------------------------

def unit_obj() -> CausalObject:
    return CausalObject(1, AffineSubspace.point([1]), 1, 1)


def first_order(d: int) -> CausalObject:
    if d < 1:
        raise ValueError("dimension must be positive")
    pts = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        pts.append(e)
    return CausalObject(d, AffineSubspace.from_points(pts), Fraction(1, d), 1)


def two() -> CausalObject:
    return first_order(2)


def chan22() -> CausalObject:
    """Causal maps from the bit to the bit."""
    return parr(dual(two()), two())


def dual(A: CausalObject) -> CausalObject:
    if A._dual is None:
        co = A.states.annihilator_one()
        if co.is_empty:
            raise NotFlat("state space has no effects")
        B = CausalObject(A.dim, co, A.theta, A.mu)
        B._dual = A
        A._dual = B
    return A._dual


# -- multiplicatives -------------------------------------------------------

def _kron_rows(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if X.shape[0] == 0 or Y.shape[0] == 0:
        return np.empty((0, X.shape[1] * Y.shape[1]), dtype=object)
    return np.einsum("ai,bj->abij", X, Y).reshape(X.shape[0] * Y.shape[0], X.shape[1] * Y.shape[1])


def tensor_states(S: AffineSubspace, T: AffineSubspace) -> AffineSubspace:
    """Affine hull of all products of a point of S with a point of T."""
    p, q = S._o, T._o
    D, E = S._d, T._d
    rows = [
        _kron_rows(D, q.reshape(1, -1)),
        _kron_rows(p.reshape(1, -1), E),
        _kron_rows(D, E),
    ]
    dirs = np.concatenate(rows, axis=0)
    return AffineSubspace._from_raw(S.dim * T.dim, np.kron(p, q), dirs)


def tensor(A: CausalObject, B: CausalObject) -> CausalObject:
    return CausalObject(A.dim * B.dim, tensor_states(A.states, B.states), A.mu * B.mu, A.theta * B.theta)


def parr(A: CausalObject, B: CausalObject) -> CausalObject:
    return dual(tensor(dual(A), dual(B)))


def lolli(A: CausalObject, B: CausalObject) -> CausalObject:
    return parr(dual(A), B)


def seq(A: CausalObject, B: CausalObject) -> CausalObject:
    """One-way signalling: B's effect choice cannot change A's marginal.

    A state h, read as the dA x dB matrix H, belongs to A < B iff H·δ = 0 for
    every direction δ of B's effects and H·(θ_B·1) is a state of A.
    """
    dA, dB = A.dim, B.dim
    n = dA * dB
    co_b = dual(B).states
    rows = []
    rhs = []
    # H·δ = 0
    for delta in co_b._d:
        for i in range(dA):
            r = zeros(n)
            r[i * dB:(i + 1) * dB] = delta
            rows.append(r)
            rhs.append(ZERO)
    # N_A · H · (θ_B 1) = b_A
    N, b = A.states.equations()
    tb = _q(B.theta)
    for nrow, brow in zip(N, b):
        r = np.repeat(nrow * tb, dB)
        rows.append(r)
        rhs.append(brow)
    mat = np.array(rows, dtype=object).reshape(len(rows), n)
    S = solve_affine(mat, rhs)
    return CausalObject(n, S, A.mu * B.mu, A.theta * B.theta)


def leg_permutation(dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Index map for reordering legs: new leg k is old leg ``order[k]``."""
    n = math.prod(dims)
    return np.arange(n).reshape(tuple(dims)).transpose(tuple(order)).ravel()


def permute_legs(A: CausalObject, dims: Sequence[int], order: Sequence[int]) -> CausalObject:
    if math.prod(dims) != A.dim:
        raise ValueError("leg dimensions do not multiply to the carrier")
    perm = leg_permutation(dims, order)
    return CausalObject(A.dim, A.states.permute(perm), A.mu, A.theta)


def seq_flipped(A: CausalObject, B: CausalObject) -> CausalObject:
    """B < A re-indexed onto the carrier of A ⊗ B."""
    return permute_legs(seq(B, A), [B.dim, A.dim], [1, 0])


# -- additives and set operations -------------------------------------------

def oplus(A: CausalObject, B: CausalObject) -> CausalObject:
    if A.theta != B.theta:
        raise NotFlat("summands must share the discard normalization")
    n = A.dim + B.dim
    pts = []
    for g in A.states.generators():
        pts.append(np.concatenate([g, zeros(B.dim)]))
    for g in B.states.generators():
        pts.append(np.concatenate([zeros(A.dim), g]))
    S = AffineSubspace.from_points(pts)
    mu = _scalar_on_ones(S)
    if mu is None:
        raise NotFlat("no scaled uniform state in the sum")
    return CausalObject(n, S, mu, A.theta)


def times(A: CausalObject, B: CausalObject) -> CausalObject:
    if A.mu != B.mu:
        raise NotFlat("factors must share the uniform-state normalization")
    o = np.concatenate([A.states._o, B.states._o])
    dirs = [np.concatenate([d, zeros(B.dim)]) for d in A.states._d]
    dirs += [np.concatenate([zeros(A.dim), e]) for e in B.states._d]
    n = A.dim + B.dim
    D = np.array(dirs, dtype=object).reshape(len(dirs), n)
    S = AffineSubspace._from_raw(n, o, D)
    theta = _scalar_on_ones(S.annihilator_one())
    if theta is None:
        raise NotFlat("no scaled discard on the product")
    return CausalObject(n, S, A.mu, theta)


def _set_compatible(A, B):
    if (A.dim, A.mu, A.theta) != (B.dim, B.mu, B.theta):
        raise NotCompatible("objects must share carrier and normalization scalars")


def union_obj(A: CausalObject, B: CausalObject) -> CausalObject:
    _set_compatible(A, B)
    return CausalObject(A.dim, A.states.hull_union(B.states), A.mu, A.theta)


def intersection_obj(A: CausalObject, B: CausalObject) -> CausalObject:
    _set_compatible(A, B)
    return CausalObject(A.dim, A.states.intersect(B.states), A.mu, A.theta)


# -- formulae ----------------------------------------------------------------

Interpretation = Mapping[str, CausalObject]


def default_interpretation(F: Formula) -> dict[str, CausalObject]:
    fo_obj, reg_obj = two(), chan22()
    out = {}
    for a in fm.leaf_order(F, atoms_only=True):
        out[a.name] = fo_obj if a.fo else reg_obj
    return out


def check_fo_respecting(F: Formula, phi: Interpretation) -> None:
    for a in fm.leaf_order(F, atoms_only=True):
        if a.name not in phi:
            raise NotFoRespecting(f"atom {a.name!r} is not interpreted")
        obj = phi[a.name]
        if a.fo and not obj.is_first_order():
            raise NotFoRespecting(f"first-order atom {a.name!r} needs a first-order object")
        if not a.fo and (obj.is_first_order() or obj.is_first_order_dual()):
            raise NotFoRespecting(f"regular atom {a.name!r} needs an object that is neither first-order nor its dual")


def carrier_dims(F: Formula, phi: Interpretation) -> list[int]:
    return [phi[a.name].dim for a in fm.leaf_order(F, atoms_only=True)]


def interpret(F: Formula, phi: Interpretation, max_dim: int = DEFAULT_MAX_DIM, check: bool = True) -> CausalObject:
    """Structural interpretation; carrier legs follow the leaf order of F."""
    if check:
        check_fo_respecting(F, phi)
    total = math.prod(carrier_dims(F, phi))
    if total > max_dim:
        raise DimensionGuard(f"carrier dimension {total} exceeds the cap of {max_dim}")

    def go(g):
        if isinstance(g, Atom):
            obj = phi[g.name]
            return dual(obj) if g.neg else obj
        if isinstance(g, Unit):
            return unit_obj()
        l, r = go(g.left), go(g.right)
        return {"tensor": tensor, "par": parr, "seq": seq}[g.op](l, r)

    return go(F)


def _pairs(F: Formula) -> list[tuple[int, int]]:
    """Leaf positions (positive, negative) of each atom, atoms only."""
    occ: dict[str, dict[bool, int]] = {}
    for i, a in enumerate(fm.leaf_order(F, atoms_only=True)):
        occ.setdefault(a.name, {})[a.neg] = i
    return [(o[False], o[True]) for o in occ.values()]


def contraction_support(F: Formula, phi: Interpretation) -> np.ndarray:
    """Flat indices where the contraction covector equals one (it is 0/1)."""
    fm.check_balanced(F)
    dims = carrier_dims(F, phi)
    if not dims:
        return np.array([0])
    mask = np.ones(tuple(dims), dtype=bool)
    for p, q in _pairs(F):
        shape_p = [1] * len(dims)
        shape_q = [1] * len(dims)
        shape_p[p] = dims[p]
        shape_q[q] = dims[q]
        mask &= np.arange(dims[p]).reshape(shape_p) == np.arange(dims[q]).reshape(shape_q)
    return np.flatnonzero(mask.ravel())


def contraction_effect(F: Formula, phi: Interpretation) -> tuple[Fraction, ...]:
    """The tensor of identity caps joining each atom pair, in leaf order."""
    dims = carrier_dims(F, phi)
    n = math.prod(dims)
    out = [Fraction(0)] * n
    for i in contraction_support(F, phi):
        out[int(i)] = Fraction(1)
    return tuple(out)


def _pair_support(support: np.ndarray, v: np.ndarray):
    total = ZERO
    for i in support:
        total += v[i]
    return total


def consistent(
    F: Formula,
    phi: Interpretation | None = None,
    route: str = "auto",
    max_dim: int = DEFAULT_MAX_DIM,
) -> bool:
    """Whether the contraction of F is a causal state of its interpretation.

    ``route="direct"`` materializes the interpretation of the negated
    formula and pairs the contraction with its offset and directions.
    ``route="sequent"`` splits F along its root par chain and contracts one
    component at a time, which keeps carriers small.  ``auto`` picks the
    sequent route whenever the root is a par.
    """
    if phi is None:
        phi = default_interpretation(F)
    fm.check_balanced(F)
    check_fo_respecting(F, phi)
    if route == "auto":
        route = "sequent" if len(fm.par_components(F)) > 1 else "direct"
    if route == "direct":
        O = interpret(fm.negate(F), phi, max_dim=max_dim, check=False)
        sup = contraction_support(F, phi)
        if _pair_support(sup, O.states._o) != 1:
            return False
        return all(_pair_support(sup, d) == 0 for d in O.states._d)
    if route == "sequent":
        return _sequent_scalars(F, phi, max_dim) == AffineSubspace.point([1])
    raise ValueError(f"unknown route {route!r}")


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _sequent_scalars(F: Formula, phi: Interpretation, max_dim: int) -> AffineSubspace:
    """Affine span of the contraction paired with product states.

    Each root par component H contributes the states of Φ(H)*; the pairing
    is multi-affine, so it suffices to contract affine generators and reduce
    to an affine basis after each component.
    """
    comps = fm.par_components(F)
    leaves = fm.leaf_order(F, atoms_only=True)
    owner = []
    for j, H in enumerate(comps):
        owner += [j] * len(fm.leaf_order(H, atoms_only=True))
    partner = {}
    for p, q in _pairs(F):
        partner[p] = q
        partner[q] = p
    dims = [phi[a.name].dim for a in leaves]
    comp_leaves = [[i for i in range(len(leaves)) if owner[i] == j] for j in range(len(comps))]

    objs = {}

    def comp_obj(j):
        if j not in objs:
            cap = math.prod(dims[i] for i in comp_leaves[j])
            if cap > max_dim:
                raise DimensionGuard(f"component carrier {cap} exceeds the cap of {max_dim}")
            objs[j] = interpret(fm.negate(comps[j]), phi, max_dim=max_dim, check=False)
        return objs[j]

    # open legs of the running tensor, each labelled by the leaf it waits for
    open_legs: list[int] = []
    state = [np.array(ONE, dtype=object)]
    done: set[int] = set()
    remaining = list(range(len(comps)))
    while remaining:
        # greedy: the component leaving the fewest open legs, ties by index
        def cost(j):
            new_open = sum(1 for i in comp_leaves[j] if owner[partner[i]] not in done and owner[partner[i]] != j)
            closed = sum(1 for i in comp_leaves[j] if i in open_legs)
            return (len(open_legs) - closed + new_open, j)

        j = min(remaining, key=cost)
        remaining.remove(j)
        gens = [g.reshape(tuple(dims[i] for i in comp_leaves[j])) for g in comp_obj(j).states.generators()]
        letter = {}
        for k, leg in enumerate(open_legs):
            letter[("open", leg)] = _LETTERS[k]
        nxt = len(open_legs)
        g_sub = []
        out_legs = [leg for leg in open_legs if leg not in comp_leaves[j]]
        for i in comp_leaves[j]:
            p = partner[i]
            if ("open", i) in letter:
                g_sub.append(letter[("open", i)])
            elif owner[p] == j and ("internal", min(i, p)) in letter:
                g_sub.append(letter[("internal", min(i, p))])
            else:
                c = _LETTERS[nxt]
                nxt += 1
                if owner[p] == j:
                    letter[("internal", min(i, p))] = c
                else:
                    letter[("new", p)] = c
                    out_legs.append(p)
                g_sub.append(c)
        t_sub = "".join(_LETTERS[k] for k in range(len(open_legs)))
        out_sub = "".join(letter[("open", l)] if ("open", l) in letter else letter[("new", l)] for l in out_legs)
        subs = f"{t_sub},{''.join(g_sub)}->{out_sub}"
        pts = []
        for t in state:
            for g in gens:
                pts.append(np.asarray(np.einsum(subs, t, g), dtype=object).ravel())
        hull = AffineSubspace.from_points(pts)
        open_legs = out_legs
        shape = tuple(dims[partner[l]] for l in open_legs)
        state = [g.reshape(shape) for g in hull.generators()]
        done.add(j)
    return AffineSubspace.from_points([np.asarray(s, dtype=object).ravel() for s in state])


def trace_pairing(M: Sequence[Sequence]) -> Fraction:
    """Pair the cap with a square matrix, i.e. its trace."""
    d = len(M)
    cap = np.zeros((d, d), dtype=object)
    for i in range(d):
        cap[i, i] = ONE
    m = np.array([[_q(x) for x in row] for row in M], dtype=object)
    return to_rat((cap * m).sum())


# -- graph types ---------------------------------------------------------------

SIGNALLING = "signalling"
ORDERED = "ordered"
LOCAL2 = "local2"


def _fold(op, objs):
    if not objs:
        return unit_obj()
    out = objs[0]
    for o in objs[1:]:
        out = op(out, o)
    return out


def _regroup(G: gt.Dag, groups: Sequence[Sequence[str]], obj: CausalObject, gamma) -> CausalObject:
    """Permute a carrier laid out group by group back to vertex order."""
    layout = [v for grp in groups for v in grp]
    dims = [gamma[v].dim for v in layout]
    order = [layout.index(v) for v in G.vertices]
    return permute_legs(obj, dims, order)


def graph_type(G: gt.Dag, gamma: Mapping[str, CausalObject], method: str = SIGNALLING) -> CausalObject:
    """Causal object of a DAG with vertex objects gamma, legs in vertex order."""
    if gt.find_cycle(G) is not None:
        raise gt.CyclicGraph("graph types need an acyclic graph")
    if method == SIGNALLING:
        out = None
        for U in gt.down_closed_subsets(G):
            rest = [v for v in G.vertices if v not in U]
            obj = seq(_fold(parr, [gamma[v] for v in U]), _fold(parr, [gamma[v] for v in rest]))
            obj = _regroup(G, [U, rest], obj, gamma)
            out = obj if out is None else intersection_obj(out, obj)
        return out if out is not None else unit_obj()
    if method == ORDERED:
        out = None
        for order in gt.topological_sorts(G):
            obj = _fold(seq, [gamma[v] for v in order])
            obj = _regroup(G, [order], obj, gamma)
            out = obj if out is None else intersection_obj(out, obj)
        return out if out is not None else unit_obj()
    if method == LOCAL2:
        return _local2(G, gamma)
    raise ValueError(f"unknown method {method!r}")


def _local2(G: gt.Dag, gamma) -> CausalObject:
    """Affine hull of graph states whose edges all carry the bit."""
    b, b_star = two(), dual(two())
    if not G.vertices:
        return unit_obj()
    edges = G.sorted_edges()
    # running tensor legs: ("v", name) for vertex legs, ("e", k) for open edges
    legs: list[tuple] = []
    state = [np.array(ONE, dtype=object)]
    for v in G.vertices:
        ins = [k for k, (a, c) in enumerate(edges) if c == v]
        outs = [k for k, (a, c) in enumerate(edges) if a == v]
        comp = gamma[v]
        for _ in ins:
            comp = parr(comp, b_star)
        for _ in outs:
            comp = parr(comp, b)
        comp_legs = [("v", v)] + [("e", k) for k in ins] + [("e", k) for k in outs]
        comp_dims = [gamma[v].dim] + [2] * (len(ins) + len(outs))
        letter = {leg: _LETTERS[i] for i, leg in enumerate(legs)}
        nxt = len(legs)
        g_sub = []
        for leg in comp_legs:
            if leg in letter:
                g_sub.append(letter[leg])
            else:
                letter[leg] = _LETTERS[nxt]
                nxt += 1
                g_sub.append(letter[leg])
        shared = set(legs) & set(comp_legs)
        new_legs = [leg for leg in legs if leg not in shared] + [leg for leg in comp_legs if leg not in shared]
        subs = f"{''.join(letter[l] for l in legs)},{''.join(g_sub)}->{''.join(letter[l] for l in new_legs)}"
        gens = [g.reshape(tuple(comp_dims)) for g in comp.states.generators()]
        pts = [np.asarray(np.einsum(subs, t, g), dtype=object).ravel() for t in state for g in gens]
        hull = AffineSubspace.from_points(pts)
        legs = new_legs
        shape = tuple(gamma[l[1]].dim if l[0] == "v" else 2 for l in legs)
        state = [g.reshape(shape) for g in hull.generators()]
    assert all(l[0] == "v" for l in legs)
    S = AffineSubspace.from_points([np.asarray(s, dtype=object).ravel() for s in state])
    mu = math.prod(gamma[v].mu for v in G.vertices)
    theta = math.prod(gamma[v].theta for v in G.vertices)
    return CausalObject(S.dim, S, mu, theta)


def dual_graph_membership(G: gt.Dag, gamma: Mapping[str, CausalObject], vector, method: str = SIGNALLING) -> bool:
    return dual(graph_type(G, gamma, method)).states.contains(vector)


KIND_OBJECTS: dict[str, Callable[[], CausalObject]] = {
    gt.GENERIC: chan22,
    gt.FO: two,
    gt.FOD: lambda: dual(two()),
    gt.UNIT: unit_obj,
}


def kind_gamma(G: gt.Dag) -> dict[str, CausalObject]:
    """Canonical object per vertex kind: 2⊸2, 2, 2* and I."""
    return {v: KIND_OBJECTS[k]() for v, k in zip(G.vertices, G.kinds)}


def dual_gamma(gamma: Mapping[str, CausalObject]) -> dict[str, CausalObject]:
    return {v: dual(o) for v, o in gamma.items()}


# -- interpretation files ----------------------------------------------------------

def object_from_json(data: dict) -> CausalObject:
    kind = data.get("kind", "custom")
    if kind == "fo2":
        return two()
    if kind == "chan22":
        return chan22()
    if kind == "fo":
        return first_order(int(data["dim"]))
    if kind == "custom":
        S = AffineSubspace(int(data["dim"]), data["offset"], data.get("directions", []))
        return make_object(S)
    raise ValueError(f"unknown object kind {kind!r}")


def interpretation_from_json(data: Mapping[str, dict]) -> dict[str, CausalObject]:
    return {name: object_from_json(entry) for name, entry in data.items()}

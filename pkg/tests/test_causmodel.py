import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causlogic import causmodel as cm
from causlogic import graphtype as gt
from causlogic.corpus import corpus, random_formula, small_dags
from causlogic.formula import leaf_order, parse
from causlogic.linalg import AffineSubspace, subset, to_rat, witness_in_difference
from causlogic.proofnet import check_formula
from exemplars import FO_CYCLE, ONE_CHANNEL, TWO_CHANNELS

TWO = cm.two()
TWO_D = cm.dual(TWO)
CHAN = cm.chan22()
B_CHOICES = {"2": TWO, "2*": TWO_D, "2-o2": CHAN}


# -- basic objects -----------------------------------------------------------------

def test_bit_and_its_dual():
    assert TWO.dim == 2 and TWO.states.affine_dim == 1
    assert TWO.mu == Q(1, 2) and TWO.theta == 1
    assert TWO_D.states == AffineSubspace.point([1, 1])
    assert TWO_D.mu == 1 and TWO_D.theta == Q(1, 2)
    assert TWO.is_first_order() and not TWO.is_first_order_dual()
    assert TWO_D.is_first_order_dual() and not TWO_D.is_first_order()


def test_channel_dimensions():
    assert CHAN.dim == 4
    assert CHAN.states.affine_dim == 2
    assert cm.dual(CHAN).states.affine_dim == 1
    # legs (input, output); each input row sums to one
    assert CHAN.states.contains([1, 0, 0, 1])
    assert CHAN.states.contains([0, 1, 1, 0])
    assert CHAN.states.contains([1, 0, 1, 0])
    assert not CHAN.states.contains([1, 1, 0, 0])


def test_unit_object():
    I = cm.unit_obj()
    assert I.dim == 1 and cm.dual(I) == I
    assert cm.tensor(I, CHAN) == CHAN


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_first_order_objects(d):
    A = cm.first_order(d)
    cm.check_flat(A)
    assert A.states.affine_dim == d - 1
    assert cm.dual(A).states.affine_dim == 0


def test_make_object_derives_scalars():
    A = cm.make_object(AffineSubspace(2, [1, 0], [[-1, 1]]))
    assert A == TWO
    with pytest.raises(cm.NotFlat):
        cm.make_object(AffineSubspace.point([1, 0]))


# -- closure under the connectives ---------------------------------------------------------------

OBJECTS = [cm.unit_obj(), TWO, TWO_D, CHAN, cm.dual(CHAN), cm.first_order(3)]
CONNECTIVES = [cm.tensor, cm.parr, cm.seq, cm.seq_flipped, cm.lolli]


@pytest.mark.parametrize("op", CONNECTIVES, ids=lambda f: f.__name__)
def test_connectives_keep_objects_flat(op):
    for A in OBJECTS:
        for B in OBJECTS:
            if A.dim * B.dim > 16:
                continue
            C = op(A, B)
            cm.check_flat(C)
            assert C.mu * C.theta * C.dim == 1


@pytest.mark.parametrize("A", OBJECTS, ids=repr)
def test_duality_is_involutive(A):
    assert cm.dual(cm.dual(A)) == A
    fresh = cm.CausalObject(A.dim, A.states, A.mu, A.theta)
    assert cm.dual(cm.dual(fresh)) == A


def test_seq_is_self_dual():
    for A in (TWO, TWO_D, CHAN):
        for B in (TWO, TWO_D, CHAN):
            assert cm.dual(cm.seq(A, B)) == cm.seq(cm.dual(A), cm.dual(B))


def test_tensor_seq_par_chain():
    t, s, p = cm.tensor(CHAN, CHAN), cm.seq(CHAN, CHAN), cm.parr(CHAN, CHAN)
    assert (t.states.affine_dim, s.states.affine_dim, p.states.affine_dim) == (8, 10, 12)
    assert subset(t.states, s.states) and subset(s.states, p.states)
    w = witness_in_difference(s.states, t.states)
    assert w is not None and not t.states.contains(w)


def test_seq_is_not_commutative():
    assert cm.seq(CHAN, CHAN) != cm.seq_flipped(CHAN, CHAN)


def test_seq_associates():
    a = cm.seq(cm.seq(TWO, CHAN), TWO_D)
    b = cm.seq(TWO, cm.seq(CHAN, TWO_D))
    assert a == b


def test_tensor_states_contains_products():
    prod = [Q(x) * y for x in (1, 0) for y in (0, 0, 1, 1)]
    # bit state (1,0) times the channel state (0,0,1,1) is not a channel state
    assert not CHAN.states.contains([0, 0, 1, 1])
    assert not cm.tensor(TWO, CHAN).states.contains(prod)
    prod = [Q(x) * y for x in (1, 0) for y in (1, 0, 0, 1)]
    assert cm.tensor(TWO, CHAN).states.contains(prod)


# -- set operations ----------------------------------------------------------------------------------

def test_tensor_and_par_decompose_into_both_orders():
    for A in (TWO, TWO_D, CHAN):
        for B in (TWO, TWO_D, CHAN):
            s, f = cm.seq(A, B), cm.seq_flipped(A, B)
            assert cm.intersection_obj(s, f) == cm.tensor(A, B)
            assert cm.union_obj(s, f) == cm.parr(A, B)


def test_de_morgan():
    s, f = cm.seq(CHAN, CHAN), cm.seq_flipped(CHAN, CHAN)
    lhs = cm.dual(cm.union_obj(s, f))
    rhs = cm.intersection_obj(cm.dual(s), cm.dual(f))
    assert lhs == rhs


def _three_spaces():
    third = [Q(1, 3)] * 3
    out = []
    for i in range(3):
        e = [0, 0, 0]
        e[i] = 1
        out.append(cm.CausalObject(3, AffineSubspace.from_points([e, third]), Q(1, 3), 1))
    return out


def test_union_does_not_distribute_over_intersection():
    A1, A2, A3 = _three_spaces()
    lhs = cm.intersection_obj(cm.union_obj(A1, A2), A3)
    rhs = cm.union_obj(cm.intersection_obj(A1, A3), cm.intersection_obj(A2, A3))
    assert lhs == A3
    assert rhs.states.affine_dim == 0
    assert lhs != rhs


@pytest.mark.parametrize("op", [cm.tensor, cm.parr, cm.seq, cm.seq_flipped], ids=lambda f: f.__name__)
def test_union_and_intersection_distribute_over_products(op):
    A1, A2, _ = _three_spaces()
    for B in (TWO, TWO_D):
        assert op(cm.union_obj(A1, A2), B) == cm.union_obj(op(A1, B), op(A2, B))
        assert op(cm.intersection_obj(A1, A2), B) == cm.intersection_obj(op(A1, B), op(A2, B))


def test_set_operations_need_matching_scalars():
    with pytest.raises(cm.NotCompatible):
        cm.union_obj(TWO, TWO_D)


def test_oplus_and_times():
    I = cm.unit_obj()
    assert cm.oplus(I, I) == TWO
    assert cm.times(I, I) == TWO_D
    assert cm.dual(cm.oplus(TWO, TWO)) == cm.times(TWO_D, TWO_D)
    with pytest.raises(cm.NotFlat):
        cm.oplus(TWO, TWO_D)


# -- first-order identities ------------------------------------------------------------------------

@pytest.mark.parametrize("name", list(B_CHOICES))
def test_first_order_absorbs_par_and_tensor(name):
    B = B_CHOICES[name]
    A = TWO
    assert cm.parr(A, B) == cm.seq_flipped(A, B)
    assert cm.tensor(A, B) == cm.seq(A, B)
    assert cm.parr(TWO_D, B) == cm.seq(TWO_D, B)
    assert cm.tensor(TWO_D, B) == cm.seq_flipped(TWO_D, B)


def test_first_order_pairs_collapse():
    A, A2 = TWO, cm.first_order(3)
    forms = [cm.parr(A, A2), cm.seq(A, A2), cm.seq_flipped(A, A2), cm.tensor(A, A2)]
    assert all(f == forms[0] for f in forms)
    D, D2 = TWO_D, cm.dual(A2)
    forms = [cm.parr(D, D2), cm.seq(D, D2), cm.seq_flipped(D, D2), cm.tensor(D, D2)]
    assert all(f == forms[0] for f in forms)


def test_wire_is_one_way_only_for_first_order():
    assert cm.parr(TWO_D, TWO) == cm.seq(TWO_D, TWO)
    assert cm.parr(cm.dual(CHAN), CHAN) != cm.seq(cm.dual(CHAN), CHAN)


# -- contraction and consistency ------------------------------------------------------------------

def test_contraction_effect_is_a_cap():
    F = parse("!A % !A~")
    assert cm.contraction_effect(F, cm.default_interpretation(F)) == (1, 0, 0, 1)
    G = parse("(!A * !B) % !A~ % !B~")
    eff = cm.contraction_effect(G, cm.default_interpretation(G))
    assert sum(eff) == 4 and len(eff) == 16


def test_paradox_scalars():
    assert cm.trace_pairing([[0, 1], [1, 0]]) == 0
    assert cm.trace_pairing([[1, 0], [0, 1]]) == 2
    for M in ([[0, 1], [1, 0]], [[1, 0], [0, 1]]):
        assert cm.trace_pairing(M) != 1


def test_feedback_loop_is_inconsistent():
    F = parse("!A * !A~")
    assert not cm.consistent(F, route="direct")
    assert not check_formula(F).is_net


@pytest.mark.parametrize(
    "text, ok",
    [
        ("A % A~", True),
        ("A * A~", False),
        ("!A~ < !A", True),
        ("!A < !A~", False),
        ("I", True),
        ("(A < B) % (A~ < B~)", True),
        ("(A < B) % (A~ * B~)", False),
        (FO_CYCLE, True),
        (ONE_CHANNEL, True),
        (TWO_CHANNELS, False),
    ],
)
def test_consistency_examples(text, ok):
    F = parse(text)
    assert cm.consistent(F) == ok
    assert check_formula(F).is_net == ok


def test_routes_agree_on_corpus():
    compared = 0
    for F in corpus(3, 150, max_pairs=4, max_bits=8):
        phi = cm.default_interpretation(F)
        # the direct route materializes the whole carrier
        if math.prod(cm.carrier_dims(F, phi)) > 2**10:
            continue
        a = cm.consistent(F, route="direct")
        b = cm.consistent(F, route="sequent")
        assert a == b, F
        compared += 1
    assert compared >= 40


def test_dimension_guard():
    F = parse(FO_CYCLE)
    with pytest.raises(cm.DimensionGuard):
        cm.consistent(F, route="direct", max_dim=128)
    with pytest.raises(cm.DimensionGuard):
        cm.interpret(F, cm.default_interpretation(F), max_dim=100)


def test_interpretation_must_respect_first_order_atoms():
    F = parse("!A % !A~")
    with pytest.raises(cm.NotFoRespecting):
        cm.consistent(F, {"A": CHAN})
    with pytest.raises(cm.NotFoRespecting):
        cm.consistent(parse("A % A~"), {"A": TWO})
    with pytest.raises(cm.NotFoRespecting):
        cm.consistent(parse("A % A~"), {})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(0, 1))
def test_verdict_independent_of_interpretation(seed, pairs, units):
    F = random_formula(random.Random(seed), pairs, 0.5, units)
    phi = {}
    for a in leaf_order(F, atoms_only=True):
        phi[a.name] = cm.first_order(3) if a.fo else cm.lolli(cm.first_order(3), cm.first_order(2))
    assert cm.consistent(F, phi, route="direct") == check_formula(F).is_net


def test_interpretation_from_json():
    phi = cm.interpretation_from_json(
        {
            "A": {"kind": "chan22"},
            "B": {"kind": "fo2"},
            "C": {"kind": "fo", "dim": 3},
            "D": {"kind": "custom", "dim": 2, "offset": [1, 0], "directions": [[-1, 1]]},
        }
    )
    assert phi["A"] == CHAN and phi["B"] == TWO and phi["D"] == TWO
    assert phi["C"] == cm.first_order(3)
    with pytest.raises(ValueError):
        cm.object_from_json({"kind": "qubit"})


def test_object_json_shape():
    data = TWO.to_json()
    assert data["dim"] == 2 and data["mu"] == "1/2" and data["theta"] == "1"
    assert AffineSubspace.from_json(data["states"]) == TWO.states


# -- graph types ------------------------------------------------------------------------------------

def test_graph_types_of_two_vertices():
    gamma = {"a": CHAN, "b": CHAN}
    empty = gt.Dag("ab")
    chain = gt.Dag("ab", [("a", "b")])
    assert cm.graph_type(empty, gamma) == cm.tensor(CHAN, CHAN)
    assert cm.graph_type(chain, gamma) == cm.seq(CHAN, CHAN)
    assert cm.graph_type(gt.Dag("ab", [("b", "a")]), gamma) == cm.seq_flipped(CHAN, CHAN)


def test_graph_type_of_the_empty_graph_is_the_unit():
    assert cm.graph_type(gt.Dag(()), {}) == cm.unit_obj()


@pytest.mark.parametrize("method", [cm.ORDERED, cm.LOCAL2])
def test_methods_agree_on_small_sample(method):
    for k, G in enumerate(small_dags(3)):
        if k % 7:
            continue
        gamma = cm.kind_gamma(G)
        assert cm.graph_type(G, gamma, method) == cm.graph_type(G, gamma), G


def test_methods_agree_with_other_vertex_objects():
    G = gt.Dag("abc", [("a", "b"), ("a", "c")])
    gamma = {"a": cm.lolli(cm.first_order(3), TWO), "b": CHAN, "c": cm.first_order(3)}
    ref = cm.graph_type(G, gamma)
    assert cm.graph_type(G, gamma, cm.ORDERED) == ref
    assert cm.graph_type(G, gamma, cm.LOCAL2) == ref


def test_standard_form_has_the_same_type():
    for k, G in enumerate(small_dags(3)):
        if k % 5:
            continue
        gamma = cm.kind_gamma(G)
        assert cm.graph_type(gt.standard_form(G), gamma) == cm.graph_type(G, gamma)


def test_substitution_matches_nested_connectives():
    # a -> v with v := (p || q) is a < (p ⊗ q)
    G = gt.Dag("av", [("a", "v")])
    H = gt.Dag("pq")
    S = gt.substitute(G, "v", H)
    gamma = {"a": CHAN, "p": TWO, "q": CHAN}
    assert cm.graph_type(S, gamma) == cm.seq(CHAN, cm.tensor(TWO, CHAN))


def test_dual_graph_membership():
    G = gt.Dag("ab", [("a", "b")])
    gamma = {"a": TWO, "b": TWO}
    assert cm.dual_graph_membership(G, gamma, [1, 1, 1, 1])
    assert not cm.dual_graph_membership(G, gamma, [1, 0, 0, 1])


def test_cyclic_graph_rejected():
    with pytest.raises(gt.CyclicGraph):
        gt.Dag("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(ValueError):
        cm.graph_type(gt.Dag("a"), {"a": TWO}, method="bogus")


def test_cap_is_a_state_of_the_wire():
    for A in (TWO, CHAN, cm.first_order(3)):
        d = A.dim
        cap = [1 if i == j else 0 for i in range(d) for j in range(d)]
        assert cm.parr(A, cm.dual(A)).states.contains(cap)


def test_local_factorization_reproduces_seq_on_channels():
    chain = gt.Dag("ab", [("a", "b")])
    assert cm.graph_type(chain, {"a": CHAN, "b": CHAN}, cm.LOCAL2) == cm.seq(CHAN, CHAN)
    assert cm.graph_type(gt.Dag("ab"), {"a": CHAN, "b": CHAN}, cm.LOCAL2) == cm.tensor(CHAN, CHAN)


def _pairings(G, H):
    gamma = cm.kind_gamma(G)
    g_states = cm.graph_type(G, gamma).states.generators()
    h_states = cm.graph_type(H, cm.dual_gamma(gamma)).states.generators()
    return {sum(to_rat(x) * to_rat(y) for x, y in zip(g, h)) for g in g_states for h in h_states}


def test_compatible_types_pair_to_one():
    G = gt.Dag("abc", [("a", "b"), ("b", "c")])
    H = gt.Dag("abc", [("a", "c")])
    assert gt.compatible(G, H)[0]
    assert _pairings(G, H) == {1}


def test_incompatible_types_admit_a_falsifying_pair():
    G = gt.Dag("ab", [("a", "b")])
    H = gt.Dag("ab", [("b", "a")])
    assert not gt.compatible(G, H)[0]
    assert _pairings(G, H) != {1}

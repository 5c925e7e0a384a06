"""Seeded generators of balanced formulae and annotated DAGs."""

from __future__ import annotations

import itertools
import math
import random
from typing import Iterator

from . import formula as fm
from . import graphtype as gt
from .formula import UNIT, Atom, Bin, Formula
from .proofnet import check_formula

OPS = ("tensor", "seq", "par")


def random_formula(
    rng: random.Random,
    pairs: int,
    p_fo: float = 0.4,
    units: int = 0,
    op_weights=(1.0, 1.0, 1.0),
) -> Formula:
    """A random balanced formula over ``pairs`` atoms plus ``units`` unit leaves."""
    leaves: list[Formula] = []
    for k in range(pairs):
        name = _name(k)
        fo = rng.random() < p_fo
        leaves += [Atom(name, fo), Atom(name, fo, True)]
    leaves += [UNIT] * units
    if not leaves:
        return UNIT
    rng.shuffle(leaves)
    return _random_tree(rng, leaves, op_weights)


def _name(k: int) -> str:
    letters = "ABCDEFGHJKLMNOPQRSTUVWXYZ"
    return letters[k % len(letters)] + (str(k // len(letters)) if k >= len(letters) else "")


def _random_tree(rng, leaves, op_weights):
    if len(leaves) == 1:
        return leaves[0]
    cut = rng.randint(1, len(leaves) - 1)
    op = rng.choices(OPS, weights=op_weights)[0]
    return Bin(op, _random_tree(rng, leaves[:cut], op_weights), _random_tree(rng, leaves[cut:], op_weights))


def carrier_bits(F: Formula) -> int:
    """log2 of the largest carrier the semantic check materializes."""
    comps = fm.par_components(F)
    return max(sum(2 if not a.fo else 1 for a in fm.leaf_order(H, atoms_only=True)) for H in comps)


def corpus(
    seed: int,
    size: int,
    max_pairs: int = 6,
    max_bits: int = 8,
    min_net_fraction: float = 0.3,
    p_fo: float = 0.4,
    max_units: int = 2,
    allow_fo: bool = True,
    allow_units: bool = True,
) -> list[Formula]:
    """Deterministic corpus with a guaranteed share of nets.

    Formulae whose semantic check would materialize more than ``2**max_bits``
    entries per root par component are rejected.
    """
    rng = random.Random(seed)
    want_nets = math.ceil(size * min_net_fraction)
    nets, others = [], []
    seen = set()
    attempts = 0
    while len(nets) + len(others) < size:
        attempts += 1
        if attempts > 10_000 * size:
            raise RuntimeError("corpus generation is not converging")
        pairs = rng.randint(1, max_pairs)
        units = rng.randint(0, max_units) if allow_units else 0
        # par-leaning trees split into small components and are more often nets
        w_par = rng.choice((1.0, 2.0, 4.0))
        F = random_formula(rng, pairs, p_fo if allow_fo else 0.0, units, (1.0, 1.0, w_par))
        if carrier_bits(F) > max_bits:
            continue
        key = fm.render(F)
        if key in seen:
            continue
        net = check_formula(F).is_net
        if not net and len(others) >= size - want_nets:
            continue
        seen.add(key)
        (nets if net else others).append(F)
    return sorted(nets + others, key=fm.render)


def random_dag(rng: random.Random, n: int, p_edge: float = 0.4, kinds=gt.KINDS) -> gt.Dag:
    names = [chr(ord("a") + i) for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p_edge]
    return gt.Dag(names, edges, [rng.choice(kinds) for _ in names])


def small_dags(max_vertices: int = 3, kinds=gt.KINDS) -> Iterator[gt.Dag]:
    """Every DAG on up to ``max_vertices`` labelled vertices with every kind assignment."""
    for n in range(1, max_vertices + 1):
        names = [chr(ord("a") + i) for i in range(n)]
        for es in gt.all_dags(names):
            for ks in itertools.product(kinds, repeat=n):
                yield gt.Dag(names, es, ks)

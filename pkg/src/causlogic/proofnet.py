"""Proof-structures, up-down switchings and the causal proof-net criterion.

A structure is a list of node labels plus a list of links.  Every node is
the conclusion of exactly one link and the premise of at most one.  A
switching picks one option per link; the switching graph is the union of
the per-link edge sets in ``edges_for``.  A structure is a net when every
switching graph is acyclic.

Two deciders are provided.  ``method="enumerate"`` walks the switchings in
lexicographic order and runs a colored DFS on each graph.  The default
``method="search"`` looks for a simple directed cycle in the union of all
switching graphs whose edges can be produced by a single switching, which
is equivalent and usually far cheaper.  Both report the lexicographically
least cyclic switching.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import formula as fm
from .formula import Atom, Bin, Formula, Unit

AXIOM = "axiom"
FO_AXIOM = "fo_axiom"
UNIT_LINK = "unit"
CUT = "cut"
TENSOR = "tensor"
SEQ = "seq"
PAR = "par"

KINDS = (AXIOM, FO_AXIOM, UNIT_LINK, CUT, TENSOR, SEQ, PAR)

# Option order fixes the lexicographic enumeration order.
OPTIONS = {
    AXIOM: ("la", "ra"),
    FO_AXIOM: ("fo",),
    UNIT_LINK: ("i",),
    CUT: ("lc", "rc"),
    TENSOR: ("ul", "ur", "dl", "dr"),
    SEQ: ("us", "ds"),
    PAR: ("up", "dp"),
}

ARITY = {
    AXIOM: (0, 2),
    FO_AXIOM: (0, 2),
    UNIT_LINK: (0, 1),
    CUT: (2, 0),
    TENSOR: (2, 1),
    SEQ: (2, 1),
    PAR: (2, 1),
}

DEFAULT_MAX_SWITCHINGS = 2**26


class SizeGuard(RuntimeError):
    pass


class MalformedStructure(ValueError):
    pass


@dataclass(frozen=True)
class Link:
    kind: str
    premises: tuple[int, ...] = ()
    conclusions: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedStructure(f"unknown link kind {self.kind!r}")
        if (len(self.premises), len(self.conclusions)) != ARITY[self.kind]:
            raise MalformedStructure(f"{self.kind} link has the wrong arity")

    @property
    def options(self) -> tuple[str, ...]:
        return OPTIONS[self.kind]


def edges_for(link: Link, option: str) -> list[tuple[int, int]]:
    """Directed edges contributed by one link under one option."""
    k = link.kind
    if option not in OPTIONS[k]:
        raise ValueError(f"option {option!r} is not valid for a {k} link")
    if k == AXIOM:
        c1, c2 = link.conclusions
        return [(c2, c1)] if option == "la" else [(c1, c2)]
    if k == FO_AXIOM:
        neg, pos = link.conclusions
        return [(neg, pos)]
    if k == UNIT_LINK:
        return []
    if k == CUT:
        p1, p2 = link.premises
        return [(p1, p2)] if option == "lc" else [(p2, p1)]
    l, r = link.premises
    (c,) = link.conclusions
    if k == TENSOR:
        return {
            "dr": [(l, r), (r, c)],
            "dl": [(r, l), (l, c)],
            "ur": [(c, l), (l, r)],
            "ul": [(c, r), (r, l)],
        }[option]
    if k == SEQ:
        return [(l, r), (r, c)] if option == "ds" else [(c, l), (l, r)]
    return [(l, c), (r, c)] if option == "dp" else [(c, l), (c, r)]


@dataclass(frozen=True)
class ProofStructure:
    labels: tuple[Formula, ...]
    links: tuple[Link, ...]

    def __post_init__(self):
        n = len(self.labels)
        concl = [0] * n
        prem = [0] * n
        for link in self.links:
            for v in link.premises + link.conclusions:
                if not 0 <= v < n:
                    raise MalformedStructure(f"node {v} out of range")
            for v in link.conclusions:
                concl[v] += 1
            for v in link.premises:
                prem[v] += 1
        for v in range(n):
            if concl[v] != 1:
                raise MalformedStructure(f"node {v} is the conclusion of {concl[v]} links")
            if prem[v] > 1:
                raise MalformedStructure(f"node {v} is the premise of {prem[v]} links")

    @property
    def conclusions(self) -> tuple[int, ...]:
        used = {v for link in self.links for v in link.premises}
        return tuple(v for v in range(len(self.labels)) if v not in used)

    def counts(self) -> dict[str, int]:
        out = {k: 0 for k in KINDS}
        for link in self.links:
            out[link.kind] += 1
        return out

    def switching_count(self) -> int:
        return math.prod(len(link.options) for link in self.links)

    def sequent(self) -> list[Formula]:
        """Labels of the conclusions, each split along its root par chain."""
        out = []
        for v in self.conclusions:
            out.extend(fm.par_components(self.labels[v]))
        return out

    def check_labels(self) -> None:
        """Raise unless every label agrees with the link that concludes it."""
        for link in self.links:
            lab = [self.labels[v] for v in link.premises + link.conclusions]
            k = link.kind
            if k in (TENSOR, SEQ, PAR):
                if lab[2] != Bin(k, lab[0], lab[1]):
                    raise MalformedStructure(f"{k} conclusion label mismatch")
            elif k == UNIT_LINK:
                if not isinstance(lab[0], Unit):
                    raise MalformedStructure("unit link must conclude I")
            elif k in (AXIOM, FO_AXIOM):
                a, b = lab
                if not (isinstance(a, Atom) and isinstance(b, Atom) and a.name == b.name and a.fo == b.fo):
                    raise MalformedStructure("axiom conclusions must be dual atoms")
                if a.fo != (k == FO_AXIOM):
                    raise MalformedStructure("first-order flag does not match the axiom kind")
                if k == FO_AXIOM and not (a.neg and not b.neg):
                    raise MalformedStructure("first-order axiom conclusions must be (negative, positive)")
                if k == AXIOM and a.neg == b.neg:
                    raise MalformedStructure("axiom conclusions must have opposite polarity")
            elif k == CUT:
                if lab[1] != fm.negate(lab[0]):
                    raise MalformedStructure("cut premises must be dual")

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "nodes": [fm.to_json(f) for f in self.labels],
            "links": [
                {"kind": l.kind, "premises": list(l.premises), "conclusions": list(l.conclusions)}
                for l in self.links
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ProofStructure":
        labels = tuple(fm.from_json(n) for n in data["nodes"])
        links = tuple(
            Link(l["kind"], tuple(l.get("premises", [])), tuple(l.get("conclusions", [])))
            for l in data["links"]
        )
        return cls(labels, links)

    def to_dot(self) -> str:
        lines = ["digraph structure {", "  node [shape=box, fontname=monospace];"]
        for v, f in enumerate(self.labels):
            lines.append(f"  n{v} [label={_dot_str(f'{v}: ' + fm.pretty(f))}];")
        for i, link in enumerate(self.links):
            lines.append(f"  l{i} [shape=ellipse, label={_dot_str(f'{i}: {link.kind}')}];")
            for p in link.premises:
                lines.append(f"  n{p} -> l{i};")
            for c in link.conclusions:
                lines.append(f"  l{i} -> n{c};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_str(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def structure_of(f: Formula) -> ProofStructure:
    """The cut-free structure of a balanced formula.

    Nodes are numbered in post-order of the syntax tree.  Links are listed in
    the order of their first conclusion node, so an axiom sits at the
    position of its leftmost leaf.  Axiom conclusions are (positive,
    negative); first-order axiom conclusions are (negative, positive).
    """
    fm.check_balanced(f)
    labels: list[Formula] = []
    at_node: dict[int, Link] = {}
    leaves: dict[str, dict[bool, int]] = {}

    def visit(g):
        if isinstance(g, Bin):
            l = visit(g.left)
            r = visit(g.right)
            labels.append(g)
            v = len(labels) - 1
            at_node[v] = Link(g.op, (l, r), (v,))
            return v
        labels.append(g)
        v = len(labels) - 1
        if isinstance(g, Unit):
            at_node[v] = Link(UNIT_LINK, (), (v,))
        else:
            leaves.setdefault(g.name, {})[g.neg] = v
        return v

    visit(f)
    for name, occ in leaves.items():
        pos, neg = occ[False], occ[True]
        if labels[pos].fo:
            link = Link(FO_AXIOM, (), (neg, pos))
        else:
            link = Link(AXIOM, (), (pos, neg))
        at_node[min(pos, neg)] = link
    links = tuple(at_node[v] for v in sorted(at_node))
    return ProofStructure(tuple(labels), links)


# -- switchings --------------------------------------------------------------

Switching = tuple  # one option string per link, indexed like P.links


def switchings(P: ProofStructure, max_switchings: int = DEFAULT_MAX_SWITCHINGS) -> Iterator[Switching]:
    """All switchings in lexicographic order, link 0 most significant."""
    total = P.switching_count()
    if total > max_switchings:
        raise SizeGuard(f"{total} switchings exceed the cap of {max_switchings}")
    return itertools.product(*(link.options for link in P.links))


def validate_switching(P: ProofStructure, s: Sequence[str]) -> None:
    if len(s) != len(P.links):
        raise ValueError("switching length does not match the number of links")
    for link, o in zip(P.links, s):
        if o not in link.options:
            raise ValueError(f"option {o!r} is not valid for a {link.kind} link")


@dataclass(frozen=True)
class SwitchingGraph:
    n: int
    edges: tuple[tuple[int, int, int, str], ...]  # (source, target, link id, option)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v, _, _ in self.edges:
            adj[u].append(v)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return any(a == u and b == v for a, b, _, _ in self.edges)

    def find_cycle(self) -> list[int] | None:
        return find_cycle(self.n, self.adjacency())

    def to_dot(self, labels: Sequence[Formula] | None = None) -> str:
        lines = ["digraph switching {", "  node [fontname=monospace];"]
        for v in range(self.n):
            text = f"{v}" if labels is None else f"{v}: {fm.pretty(labels[v])}"
            lines.append(f"  n{v} [label={_dot_str(text)}];")
        for u, v, i, o in self.edges:
            lines.append(f"  n{u} -> n{v} [label={_dot_str(f'{i}:{o}')}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def switching_graph(P: ProofStructure, s: Sequence[str]) -> SwitchingGraph:
    validate_switching(P, s)
    edges = []
    for i, (link, o) in enumerate(zip(P.links, s)):
        for u, v in edges_for(link, o):
            edges.append((u, v, i, o))
    return SwitchingGraph(len(P.labels), tuple(edges))


def find_cycle(n: int, adj: Sequence[Sequence[int]]) -> list[int] | None:
    """Iterative three-color DFS; returns the vertices of one directed cycle."""
    color = [0] * n
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            for v in it:
                if color[v] == 0:
                    color[v] = 1
                    parent[v] = u
                    stack.append((v, iter(adj[v])))
                    break
                if color[v] == 1:
                    cyc = [u]
                    while cyc[-1] != v:
                        cyc.append(parent[cyc[-1]])
                    return cyc[::-1]
            else:
                color[u] = 2
                stack.pop()
    return None


# -- verdicts ----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    is_net: bool
    switching: Switching | None = None
    cycle: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        if self.is_net:
            return {"verdict": "net"}
        return {
            "verdict": "notnet",
            "switching": {str(i): o for i, o in enumerate(self.switching)},
            "cycle": list(self.cycle),
        }

    def replays(self, P: ProofStructure) -> bool:
        """True when the witness cycle runs along edges of its switching graph."""
        if self.is_net:
            return True
        g = switching_graph(P, self.switching)
        cyc = list(self.cycle)
        if not cyc or len(set(cyc)) != len(cyc):
            return False
        return all(g.has_edge(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc)))


NET = Verdict(True)


def is_proof_net(
    P: ProofStructure,
    method: str = "search",
    max_switchings: int = DEFAULT_MAX_SWITCHINGS,
) -> Verdict:
    if method == "enumerate":
        return _decide_enumerate(P, max_switchings)
    if method == "search":
        return _decide_search(P)
    raise ValueError(f"unknown method {method!r}")


def check_formula(f: Formula, method: str = "search", max_switchings: int = DEFAULT_MAX_SWITCHINGS) -> Verdict:
    return is_proof_net(structure_of(f), method=method, max_switchings=max_switchings)


def _decide_enumerate(P, max_switchings):
    n = len(P.labels)
    per_link = [[edges_for(link, o) for o in link.options] for link in P.links]
    for s in switchings(P, max_switchings):
        adj = [[] for _ in range(n)]
        for i, link in enumerate(P.links):
            for u, v in per_link[i][link.options.index(s[i])]:
                adj[u].append(v)
        cyc = find_cycle(n, adj)
        if cyc is not None:
            return Verdict(False, tuple(s), tuple(cyc))
    return NET


def cyclic_switchings(P: ProofStructure, max_switchings: int = DEFAULT_MAX_SWITCHINGS) -> set[Switching]:
    """Every switching whose graph has a cycle (for small structures)."""
    out = set()
    for s in switchings(P, max_switchings):
        if switching_graph(P, s).find_cycle() is not None:
            out.add(tuple(s))
    return out


# Constrained cycle search over the union graph.  Each union edge carries the
# bitmask of options of its link that produce it; a cycle is realizable by a
# single switching iff, per link, the masks of its edges intersect.

def _union_graph(P: ProofStructure):
    n = len(P.labels)
    bucket: dict[tuple[int, int, int], int] = {}
    for i, link in enumerate(P.links):
        for k, o in enumerate(link.options):
            for u, v in edges_for(link, o):
                bucket[(u, v, i)] = bucket.get((u, v, i), 0) | (1 << k)
    out = [[] for _ in range(n)]
    for (u, v, i), mask in sorted(bucket.items()):
        out[u].append((v, i, mask))
    return out


def _search_cycle(n, out, allowed):
    """Find a realizable cycle given per-link allowed masks.

    Returns ``(cycle, masks)`` where masks maps each link used by the cycle
    to its feasible option mask, or None.
    """
    masks = dict()
    for start in range(n):
        path = [start]
        on_path = {start}
        # iterator stack of (vertex, position in out[vertex]) with undo records
        stack = [(start, 0)]
        undo: list[tuple[int, int | None]] = []
        while stack:
            u, pos = stack[-1]
            edges = out[u]
            advanced = False
            while pos < len(edges):
                v, i, m = edges[pos]
                pos += 1
                if v < start or (v in on_path and v != start):
                    continue
                cur = masks.get(i, allowed[i])
                new = cur & m
                if not new:
                    continue
                if v == start:
                    masks_out = dict(masks)
                    masks_out[i] = new
                    return list(path), masks_out
                stack[-1] = (u, pos)
                undo.append((i, masks.get(i)))
                masks[i] = new
                path.append(v)
                on_path.add(v)
                stack.append((v, 0))
                advanced = True
                break
            if advanced:
                continue
            stack.pop()
            if stack:
                i, prev = undo.pop()
                if prev is None:
                    del masks[i]
                else:
                    masks[i] = prev
                on_path.discard(path.pop())
        masks.clear()
    return None


def _decide_search(P):
    n = len(P.labels)
    out = _union_graph(P)
    full = [(1 << len(link.options)) - 1 for link in P.links]
    found = _search_cycle(n, out, full)
    if found is None:
        return NET
    # Greedy descent to the lexicographically least cyclic switching.
    allowed = list(full)
    witness = found[1]
    for i, link in enumerate(P.links):
        for k in range(len(link.options)):
            bit = 1 << k
            if not allowed[i] & bit:
                continue
            if witness.get(i, allowed[i]) & bit:
                allowed[i] = bit
                if i in witness:
                    witness[i] = bit
                break
            trial = list(allowed)
            trial[i] = bit
            res = _search_cycle(n, out, trial)
            if res is not None:
                allowed = trial
                witness = res[1]
                break
    s = tuple(link.options[a.bit_length() - 1] for link, a in zip(P.links, allowed))
    cyc = switching_graph(P, s).find_cycle()
    assert cyc is not None
    return Verdict(False, s, tuple(cyc))

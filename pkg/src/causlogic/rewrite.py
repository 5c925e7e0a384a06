"""Structure-level encodings that remove link kinds while keeping the verdict.

``pom`` removes first-order axioms and units; ``fo`` removes regular axioms,
seq links and units.  Both work on the graph and recompute every label from
the axioms upward, so cut links keep their premises but are not re-checked
for duality.
"""

from __future__ import annotations

from itertools import count

from . import proofnet as pn
from .formula import Atom, Bin, Formula, alpha_equivalent
from .proofnet import Link, ProofStructure

__all__ = ["FreshNames", "pom", "fo", "relabel", "structures_equivalent"]

PREFIX = "@n"


class FreshNames:
    """Generated atom names; the prefix cannot be produced by the parser."""

    def __init__(self, taken=(), prefix: str = PREFIX):
        self.prefix = prefix
        self.taken = set(taken)
        self._c = count()

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{next(self._c)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _atom_names(P: ProofStructure) -> set[str]:
    return {f.name for f in P.labels if isinstance(f, Atom)}


class _Builder:
    """Mutable copy of a structure; labels are filled in by ``finish``."""

    def __init__(self, P: ProofStructure):
        self.leaf: dict[int, Formula] = {}
        self.links: list[Link] = list(P.links)
        self.n = len(P.labels)
        for link in P.links:
            if link.kind in (pn.AXIOM, pn.FO_AXIOM, pn.UNIT_LINK):
                for v in link.conclusions:
                    self.leaf[v] = P.labels[v]

    def node(self) -> int:
        self.n += 1
        return self.n - 1

    def finish(self) -> ProofStructure:
        return relabel(self.n, self.links, self.leaf)


def relabel(n: int, links, leaf: dict[int, Formula]) -> ProofStructure:
    """Build a structure, deriving connective labels from their premises."""
    labels: list[Formula | None] = [None] * n
    for v, f in leaf.items():
        labels[v] = f
    by_concl = {}
    for link in links:
        if link.kind in (pn.TENSOR, pn.SEQ, pn.PAR):
            by_concl[link.conclusions[0]] = link

    def label(v):
        # explicit stack to avoid deep recursion on long chains
        stack = [v]
        while stack:
            u = stack[-1]
            if labels[u] is not None:
                stack.pop()
                continue
            link = by_concl[u]
            l, r = link.premises
            missing = [p for p in (l, r) if labels[p] is None]
            if missing:
                stack.extend(missing)
                continue
            labels[u] = Bin(link.kind, labels[l], labels[r])
            stack.pop()
        return labels[v]

    for v in range(n):
        label(v)
    return ProofStructure(tuple(labels), tuple(links))


def pom(P: ProofStructure) -> ProofStructure:
    """Replace first-order axioms and units by regular-atom gadgets.

    A first-order axiom on (A¹)* at m and A¹ at p becomes regular atoms U at
    m and W at p, plus a new conclusion U* < W* whose leaves are joined to m
    and p by axioms.  The only path it offers runs from m to p.  A unit
    becomes X ⅋ X* over a fresh axiom.
    """
    fresh = FreshNames(_atom_names(P))
    b = _Builder(P)
    out = []
    for link in b.links:
        if link.kind == pn.FO_AXIOM:
            m, p = link.conclusions
            u, w = fresh(), fresh()
            b.leaf[m] = Atom(u)
            b.leaf[p] = Atom(w)
            u_star, w_star, s = b.node(), b.node(), b.node()
            b.leaf[u_star] = Atom(u, neg=True)
            b.leaf[w_star] = Atom(w, neg=True)
            out += [
                Link(pn.AXIOM, (), (m, u_star)),
                Link(pn.AXIOM, (), (p, w_star)),
                Link(pn.SEQ, (u_star, w_star), (s,)),
            ]
        elif link.kind == pn.UNIT_LINK:
            (c,) = link.conclusions
            x = fresh()
            del b.leaf[c]
            a, a_star = b.node(), b.node()
            b.leaf[a] = Atom(x)
            b.leaf[a_star] = Atom(x, neg=True)
            out += [Link(pn.AXIOM, (), (a, a_star)), Link(pn.PAR, (a, a_star), (c,))]
        else:
            out.append(link)
    b.links = out
    return b.finish()


def fo(P: ProofStructure) -> ProofStructure:
    """Replace regular axioms, seq links and units by first-order gadgets.

    A regular axiom on A (at p) and A* (at m) becomes (Y¹)* ⅋ X¹ at p and
    Y¹ ⊗ (X¹)* at m, with first-order axioms carrying Y from p to m and X
    from m to p.  A seq l < r becomes (l ⊗ (Z¹)*) ⅋ (Z¹ ⊗ r) with Z carried
    from the left side to the right.  A unit becomes X¹ ⅋ (X¹)*.
    """
    fresh = FreshNames(_atom_names(P))
    b = _Builder(P)
    out = []
    for link in b.links:
        if link.kind == pn.AXIOM:
            c1, c2 = link.conclusions
            p, m = (c1, c2) if not b.leaf[c1].neg else (c2, c1)
            y, x = fresh(), fresh()
            del b.leaf[p], b.leaf[m]
            y_neg, x_pos, y_pos, x_neg = (b.node() for _ in range(4))
            b.leaf[y_neg] = Atom(y, fo=True, neg=True)
            b.leaf[x_pos] = Atom(x, fo=True)
            b.leaf[y_pos] = Atom(y, fo=True)
            b.leaf[x_neg] = Atom(x, fo=True, neg=True)
            out += [
                Link(pn.FO_AXIOM, (), (y_neg, y_pos)),
                Link(pn.FO_AXIOM, (), (x_neg, x_pos)),
                Link(pn.PAR, (y_neg, x_pos), (p,)),
                Link(pn.TENSOR, (y_pos, x_neg), (m,)),
            ]
        elif link.kind == pn.SEQ:
            l, r = link.premises
            (c,) = link.conclusions
            z = fresh()
            z_neg, z_pos, t1, t2 = (b.node() for _ in range(4))
            b.leaf[z_neg] = Atom(z, fo=True, neg=True)
            b.leaf[z_pos] = Atom(z, fo=True)
            out += [
                Link(pn.FO_AXIOM, (), (z_neg, z_pos)),
                Link(pn.TENSOR, (l, z_neg), (t1,)),
                Link(pn.TENSOR, (z_pos, r), (t2,)),
                Link(pn.PAR, (t1, t2), (c,)),
            ]
        elif link.kind == pn.UNIT_LINK:
            (c,) = link.conclusions
            x = fresh()
            del b.leaf[c]
            a, a_neg = b.node(), b.node()
            b.leaf[a] = Atom(x, fo=True)
            b.leaf[a_neg] = Atom(x, fo=True, neg=True)
            out += [Link(pn.FO_AXIOM, (), (a_neg, a)), Link(pn.PAR, (a, a_neg), (c,))]
        else:
            out.append(link)
    b.links = out
    return b.finish()


def structures_equivalent(P: ProofStructure, Q: ProofStructure):
    """Compare the sequents of two structures up to a renaming of atoms.

    Conclusions are split along root par chains and matched as multisets.
    Returns the renaming or None.
    """
    return alpha_equivalent(P.sequent(), Q.sequent())

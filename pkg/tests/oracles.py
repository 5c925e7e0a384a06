"""Independent reference implementations used only by the tests.

Nothing here imports the package's linear algebra or proof-net code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from causlogic.formula import Atom, Bin, Unit, leaf_order


# -- exact linear algebra on lists of Fractions ----------------------------------

def frac_rref(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def frac_rank(rows) -> int:
    return len(frac_rref(rows)[1])


def affine_rank(points) -> int:
    """Affine dimension of the hull of a point list (-1 if empty)."""
    if not points:
        return -1
    p0 = points[0]
    return frac_rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def in_affine_hull(points, v) -> bool:
    """Membership via homogeneous rank: v is in aff(points) iff (v,1) adds no rank."""
    hom = [list(p) + [1] for p in points]
    return frac_rank(hom + [list(v) + [1]]) == frac_rank(hom)


def frac_annihilator_points(points, dim):
    """Solve {π : π·p = 1 for all p} by Gaussian elimination; returns (offset, basis) or None."""
    aug = [list(p) + [1] for p in points]
    red, piv = frac_rref(aug)
    if dim in piv:
        return None
    free = [c for c in range(dim) if c not in piv]
    off = [Fraction(0)] * dim
    for row, c in zip(red, piv):
        off[c] = row[dim]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for row, c in zip(red, piv):
            v[c] = -row[f]
        basis.append(v)
    return off, basis


# -- R&B graphs --------------------------------------------------------------------

def rb_correct(F) -> bool:
    """Pomset correctness via alternating elementary circuits.

    Each formula occurrence v gives a B edge between top(v) and bottom(v).
    Axioms join the tops of dual atoms by an R edge; a tensor joins the
    bottoms of its premises and each premise bottom to its conclusion top; a
    par joins each premise bottom to its conclusion top; a seq is a par plus
    the directed R arc bottom(left) -> bottom(right).  The structure is
    correct iff there is no elementary circuit alternating B and R edges
    that follows every directed arc forwards.
    """
    nodes = []

    def number(g):
        if isinstance(g, Bin):
            l = number(g.left)
            r = number(g.right)
            nodes.append((g, l, r))
        else:
            nodes.append((g, None, None))
        return len(nodes) - 1

    number(F)
    top = lambda v: 2 * v
    bot = lambda v: 2 * v + 1
    n = 2 * len(nodes)
    # adjacency entries: (target, kind) where kind is "B" or "R"
    adj = [[] for _ in range(n)]

    def und(a, b, kind):
        adj[a].append((b, kind))
        adj[b].append((a, kind))

    for v in range(len(nodes)):
        und(top(v), bot(v), "B")
    occ = {}
    for v, (g, l, r) in enumerate(nodes):
        if isinstance(g, Atom):
            occ.setdefault(g.name, []).append(v)
        elif isinstance(g, Bin):
            und(bot(l), top(v), "R")
            und(bot(r), top(v), "R")
            if g.op == "tensor":
                und(bot(l), bot(r), "R")
            elif g.op == "seq":
                adj[bot(l)].append((bot(r), "R"))
    for a, b in occ.values():
        und(top(a), top(b), "R")

    def search(start):
        # DFS over elementary paths from start, alternating edge kinds
        for first in ("B", "R"):
            stack = [(start, first, {start})]
            while stack:
                u, need, seen = stack.pop()
                for w, kind in adj[u]:
                    if kind != need:
                        continue
                    other = "R" if need == "B" else "B"
                    if w == start and other == first:
                        return True
                    if w in seen or w < start:
                        continue
                    stack.append((w, other, seen | {w}))
        return False

    return not any(search(s) for s in range(n))


# -- graph enumerations -------------------------------------------------------------

def brute_sorts(vertices, edges):
    return [p for p in itertools.permutations(vertices) if all(p.index(u) < p.index(v) for u, v in edges)]


def brute_down_closed(vertices, edges):
    out = []
    for k in range(len(vertices)):
        for U in itertools.combinations(vertices, k):
            if all(u in U for u, v in edges if v in U):
                out.append(U)
    return out


def brute_closure(vertices, edges):
    reach = {(u, v) for u, v in edges}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(reach), repeat=2):
            if b == c and (a, d) not in reach:
                reach.add((a, d))
                changed = True
    return reach


def count_links(F) -> dict:
    """Link multiset of the structure of F, read off the syntax tree."""
    out = {"axiom": 0, "fo_axiom": 0, "unit": 0, "tensor": 0, "seq": 0, "par": 0}
    atoms = set()
    for leaf in leaf_order(F):
        if isinstance(leaf, Unit):
            out["unit"] += 1
        else:
            atoms.add((leaf.name, leaf.fo))
    for _, fo in atoms:
        out["fo_axiom" if fo else "axiom"] += 1

    def walk(g):
        if isinstance(g, Bin):
            out[g.op] += 1
            walk(g.left)
            walk(g.right)

    walk(F)
    return out

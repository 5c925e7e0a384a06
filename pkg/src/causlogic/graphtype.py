"""Annotated DAGs and the combinatorics of graph types.

Each vertex carries a local kind summarizing its interpretation:

* ``generic``: neither first-order nor first-order dual
* ``fo``: first-order (a unique effect; information only flows in)
* ``fod``: first-order dual (a unique state; information only flows out)
* ``unit``: both

The standard form keeps a closure edge u -> v only when u can send and v
can receive, which is all inclusion and compatibility need.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

GENERIC = "generic"
FO = "fo"
FOD = "fod"
UNIT = "unit"
KINDS = (GENERIC, FO, FOD, UNIT)
DUAL_KIND = {GENERIC: GENERIC, FO: FOD, FOD: FO, UNIT: UNIT}

# kinds that can be the source / target of a standard-form edge
_SENDS = {GENERIC, FOD}
_RECEIVES = {GENERIC, FO}


class CyclicGraph(ValueError):
    pass


class VertexMismatch(ValueError):
    pass


class NameCollision(ValueError):
    pass


@dataclass(frozen=True)
class Dag:
    vertices: tuple[str, ...]
    kinds: tuple[str, ...]
    edges: frozenset

    def __init__(self, vertices: Sequence[str], edges: Iterable = (), kinds: Sequence[str] | dict | None = None):
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise NameCollision("duplicate vertex names")
        if kinds is None:
            kinds = (GENERIC,) * len(vertices)
        elif isinstance(kinds, dict):
            kinds = tuple(kinds.get(v, GENERIC) for v in vertices)
        kinds = tuple(kinds)
        if len(kinds) != len(vertices) or any(k not in KINDS for k in kinds):
            raise ValueError("one known kind per vertex is required")
        es = frozenset((str(u), str(v)) for u, v in edges)
        names = set(vertices)
        for u, v in es:
            if u not in names or v not in names:
                raise VertexMismatch(f"edge {u}->{v} mentions an unknown vertex")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "edges", es)
        cyc = find_cycle(self)
        if cyc is not None:
            raise CyclicGraph(f"cycle {cyc}")

    def kind(self, v: str) -> str:
        return self.kinds[self.vertices.index(v)]

    @property
    def kind_map(self) -> dict[str, str]:
        return dict(zip(self.vertices, self.kinds))

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def sorted_edges(self) -> list[tuple[str, str]]:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return sorted(self.edges, key=lambda e: (pos[e[0]], pos[e[1]]))

    def with_edges(self, edges) -> "Dag":
        return Dag(self.vertices, edges, self.kinds)

    def with_kinds(self, kinds) -> "Dag":
        return Dag(self.vertices, self.edges, kinds)

    def dual_kinds(self) -> "Dag":
        return self.with_kinds(tuple(DUAL_KIND[k] for k in self.kinds))

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": [{"name": v, "kind": k} for v, k in zip(self.vertices, self.kinds)],
            "edges": [list(e) for e in self.sorted_edges()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Dag":
        vs = [(v, GENERIC) if isinstance(v, str) else (v["name"], v.get("kind", GENERIC)) for v in data["vertices"]]
        return cls([v for v, _ in vs], [tuple(e) for e in data.get("edges", [])], [k for _, k in vs])

    def to_dot(self) -> str:
        shape = {GENERIC: "circle", FO: "invtriangle", FOD: "triangle", UNIT: "point"}
        lines = ["digraph G {"]
        for v, k in zip(self.vertices, self.kinds):
            lines.append(f"  {json.dumps(v)} [shape={shape[k]}];")
        for u, v in self.sorted_edges():
            lines.append(f"  {json.dumps(u)} -> {json.dumps(v)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_edges(text: str) -> list[tuple[str, str]]:
    """Read an edge list written as ``u>v,v>w``."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        bits = [b.strip() for b in part.split(">")]
        if len(bits) < 2 or not all(bits):
            raise ValueError(f"bad edge {part!r}")
        out.extend(zip(bits, bits[1:]))
    return out


def _adjacency(vertices, edges):
    adj = {v: [] for v in vertices}
    pos = {v: i for i, v in enumerate(vertices)}
    for u, v in sorted(edges, key=lambda e: (pos[e[0]], pos[e[1]])):
        adj[u].append(v)
    return adj


def find_cycle(G_or_vertices, edges=None) -> list[str] | None:
    """A directed cycle as a vertex list, or None."""
    if edges is None:
        vertices, edges = G_or_vertices.vertices, G_or_vertices.edges
    else:
        vertices = G_or_vertices
    adj = _adjacency(vertices, edges)
    color = dict.fromkeys(vertices, 0)
    parent = {}
    for root in vertices:
        if color[root]:
            continue
        color[root] = 1
        stack = [(root, iter(adj[root]))]
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


def transitive_closure(G: Dag) -> Dag:
    adj = _adjacency(G.vertices, G.edges)
    closure = set()
    for s in G.vertices:
        stack = list(adj[s])
        seen = set()
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            closure.add((s, v))
            stack.extend(adj[v])
    return G.with_edges(closure)


def standard_form(G: Dag) -> Dag:
    km = G.kind_map
    closed = transitive_closure(G).edges
    return G.with_edges((u, v) for u, v in closed if km[u] in _SENDS and km[v] in _RECEIVES)


def _same_vertices(G: Dag, G2: Dag) -> None:
    if G.vertices != G2.vertices:
        raise VertexMismatch("graphs must share the same ordered vertex list")


def includes(G: Dag, G2: Dag) -> bool:
    """True when the graph type of G is contained in that of G2."""
    _same_vertices(G, G2)
    if G.kinds != G2.kinds:
        raise VertexMismatch("graphs must carry the same kinds")
    return standard_form(G).edges <= standard_form(G2).edges


def equivalent(G: Dag, G2: Dag) -> bool:
    return includes(G, G2) and includes(G2, G)


def compatible(G: Dag, G2: Dag) -> tuple[bool, list[str] | None]:
    """Whether G's type can be plugged into the dual-kinded G2's type.

    Returns ``(ok, cycle)`` where cycle witnesses a failure.
    """
    _same_vertices(G, G2)
    if tuple(DUAL_KIND[k] for k in G.kinds) != G2.kinds:
        raise VertexMismatch("second graph must carry the dual kinds of the first")
    union = standard_form(G).edges | standard_form(G2).edges
    cyc = find_cycle(G.vertices, union)
    return cyc is None, cyc


def substitute(G: Dag, v: str, G2: Dag) -> Dag:
    """Flatten G2 into the vertex v of G."""
    if v not in G.vertices:
        raise VertexMismatch(f"{v!r} is not a vertex")
    clash = (set(G.vertices) - {v}) & set(G2.vertices)
    if clash:
        raise NameCollision(f"shared vertex names {sorted(clash)}")
    i = G.index(v)
    vertices = G.vertices[:i] + G2.vertices + G.vertices[i + 1:]
    kinds = G.kinds[:i] + G2.kinds + G.kinds[i + 1:]
    edges = {(a, b) for a, b in G.edges if v not in (a, b)} | set(G2.edges)
    for a, b in G.edges:
        if b == v:
            edges |= {(a, x) for x in G2.vertices}
        elif a == v:
            edges |= {(x, b) for x in G2.vertices}
    return Dag(vertices, edges, kinds)


def parallel(G: Dag, G2: Dag) -> Dag:
    if set(G.vertices) & set(G2.vertices):
        raise NameCollision("vertex sets must be disjoint")
    return Dag(G.vertices + G2.vertices, G.edges | G2.edges, G.kinds + G2.kinds)


def series(G: Dag, G2: Dag) -> Dag:
    P = parallel(G, G2)
    return P.with_edges(P.edges | {(a, b) for a in G.vertices for b in G2.vertices})


def singleton(name: str, kind: str = GENERIC) -> Dag:
    return Dag([name], (), [kind])


def topological_sorts(G: Dag) -> Iterator[tuple[str, ...]]:
    """Linear extensions, lexicographic in the vertex order."""
    preds = {v: set() for v in G.vertices}
    for u, v in G.edges:
        preds[v].add(u)
    order = G.vertices

    def go(prefix, placed):
        if len(prefix) == len(order):
            yield tuple(prefix)
            return
        for v in order:
            if v not in placed and preds[v] <= placed:
                prefix.append(v)
                placed.add(v)
                yield from go(prefix, placed)
                placed.discard(v)
                prefix.pop()

    return go([], set())


def is_down_closed(G: Dag, U) -> bool:
    U = set(U)
    return all(u in U for u, v in G.edges if v in U)


def down_closed_subsets(G: Dag) -> Iterator[tuple[str, ...]]:
    """Strict down-closed subsets, by size then lexicographically."""
    n = len(G.vertices)
    for k in range(n):
        for U in itertools.combinations(G.vertices, k):
            if is_down_closed(G, U):
                yield U


def all_dags(vertices: Sequence[str]) -> Iterator[frozenset]:
    """Edge sets of every DAG on the given labelled vertices."""
    pairs = [(a, b) for a in vertices for b in vertices if a != b]
    for bits in range(1 << len(pairs)):
        es = [pairs[j] for j in range(len(pairs)) if bits >> j & 1]
        if find_cycle(list(vertices), es) is None:
            yield frozenset(es)

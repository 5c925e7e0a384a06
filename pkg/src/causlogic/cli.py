"""Command-line front end.

Exit codes: 0 for a net / true verdict, 1 for not-a-net / false (with the
witness printed as JSON), 2 for bad input.  Batch runs over a generated
corpus (``--random N``) exit 0 unless an input error occurs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import causmodel as cm
from . import formula as fm
from . import graphtype as gt
from . import proofnet as pn
from . import rewrite as rw
from .corpus import corpus

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _dump(obj, out=None) -> None:
    text = json.dumps(obj, ensure_ascii=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _read_source(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load_formula(arg: str) -> fm.Formula:
    text = _read_source(arg).strip()
    if text.startswith("{"):
        data = json.loads(text)
        if "nodes" in data:
            P = pn.ProofStructure.from_json(data)
            if len(P.conclusions) != 1:
                raise InputError("structure has several conclusions; pass it where a structure is accepted")
            return P.labels[P.conclusions[0]]
        return fm.from_json(data)
    return fm.parse(text)


def _load_structure(arg: str) -> pn.ProofStructure:
    text = _read_source(arg).strip()
    if text.startswith("{"):
        data = json.loads(text)
        if "nodes" in data:
            return pn.ProofStructure.from_json(data)
        return pn.structure_of(fm.from_json(data))
    return pn.structure_of(fm.parse(text))


def _parse_kinds(text: str | None) -> dict[str, str]:
    out = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        name, _, kind = part.partition("=")
        if kind not in gt.KINDS:
            raise InputError(f"unknown kind {kind!r}; expected one of {', '.join(gt.KINDS)}")
        out[name.strip()] = kind
    return out


def _load_graph(arg: str, vertices: str | None = None, kinds: str | None = None) -> gt.Dag:
    text = _read_source(arg).strip()
    if text.startswith("{"):
        G = gt.Dag.from_json(json.loads(text))
        if kinds:
            km = G.kind_map
            km.update(_parse_kinds(kinds))
            G = G.with_kinds(km)
        return G
    edges = gt.parse_edges(text)
    if vertices:
        names = [v.strip() for v in vertices.split(",") if v.strip()]
    else:
        names = list(dict.fromkeys(v for e in edges for v in e))
    return gt.Dag(names, edges, _parse_kinds(kinds))


def _load_interp(arg: str, F: fm.Formula) -> dict:
    if arg == "default":
        return cm.default_interpretation(F)
    data = json.loads(_read_source(arg))
    phi = cm.default_interpretation(F)
    phi.update(cm.interpretation_from_json(data))
    return phi


def _parse_switching(text: str, P: pn.ProofStructure) -> tuple:
    if text.isdigit():
        k = int(text)
        for i, s in enumerate(pn.switchings(P)):
            if i == k:
                return tuple(s)
        raise InputError(f"switching index {k} out of range")
    s = tuple(p.strip() for p in text.split(","))
    pn.validate_switching(P, s)
    return s


# -- commands -------------------------------------------------------------------

def cmd_check(a) -> int:
    if a.random:
        rows = []
        for F in corpus(a.seed, a.random):
            v = pn.check_formula(F, method=a.method, max_switchings=a.max_switchings)
            rows.append({"formula": fm.render(F), **v.to_json()})
        _dump(rows)
        return EXIT_OK
    if a.formula is None:
        raise InputError("a formula is required unless --random is given")
    P = _load_structure(a.formula)
    v = pn.is_proof_net(P, method=a.method, max_switchings=a.max_switchings)
    _dump(v.to_json())
    return EXIT_OK if v.is_net else EXIT_FALSE


def cmd_switchings(a) -> int:
    P = _load_structure(a.formula)
    out = {"count": P.switching_count(), "links": [l.kind for l in P.links]}
    if a.list:
        rows = []
        for i, s in enumerate(pn.switchings(P, a.max_switchings)):
            if a.limit is not None and i >= a.limit:
                break
            cyc = pn.switching_graph(P, s).find_cycle()
            rows.append({"switching": list(s), "cycle": cyc})
        out["switchings"] = rows
    _dump(out)
    return EXIT_OK


def cmd_rewrite(a) -> int:
    P = _load_structure(a.input)
    Q = rw.pom(P) if a.which == "pom" else rw.fo(P)
    _dump(Q.to_json(), a.output)
    return EXIT_OK


def cmd_graph(a) -> int:
    if a.op == "normalize":
        G = _load_graph(a.graph, a.vertices, a.kinds)
        _dump(gt.standard_form(G).to_json())
        return EXIT_OK
    if a.op == "sorts":
        G = _load_graph(a.graph, a.vertices, a.kinds)
        _dump({
            "sorts": [list(s) for s in gt.topological_sorts(G)],
            "down_closed": [list(u) for u in gt.down_closed_subsets(G)],
        })
        return EXIT_OK
    if a.op == "includes":
        G = _load_graph(a.graph, a.vertices, a.kinds)
        H = _load_graph(a.other, a.vertices or ",".join(G.vertices), a.kinds)
        ok = gt.includes(G, H)
        _dump({"includes": ok})
        return EXIT_OK if ok else EXIT_FALSE
    if a.op == "compatible":
        G = _load_graph(a.graph, a.vertices, a.kinds)
        H = _load_graph(a.other, a.vertices or ",".join(G.vertices), a.other_kinds)
        if a.other_kinds is None and not a.other.lstrip().startswith("{") and not os.path.isfile(a.other):
            H = H.with_kinds(tuple(gt.DUAL_KIND[k] for k in G.kinds))
        ok, cyc = gt.compatible(G, H)
        _dump({"compatible": ok} if ok else {"compatible": False, "cycle": cyc})
        return EXIT_OK if ok else EXIT_FALSE
    if a.op == "subst":
        G = _load_graph(a.graph)
        H = _load_graph(a.other)
        _dump(gt.substitute(G, a.vertex, H).to_json())
        return EXIT_OK
    raise InputError(f"unknown graph operation {a.op!r}")


def cmd_sem(a) -> int:
    if a.op == "check":
        if a.random:
            rows = []
            for F in corpus(a.seed, a.random):
                ok = cm.consistent(F, cm.default_interpretation(F), route=a.route, max_dim=a.max_dim)
                rows.append({"formula": fm.render(F), "consistent": ok})
            _dump(rows)
            return EXIT_OK
        if a.formula is None:
            raise InputError("--formula is required unless --random is given")
        F = _load_formula(a.formula)
        phi = _load_interp(a.interp, F)
        ok = cm.consistent(F, phi, route=a.route, max_dim=a.max_dim)
        _dump({"consistent": ok})
        return EXIT_OK if ok else EXIT_FALSE
    if a.op == "object":
        F = _load_formula(a.formula)
        phi = _load_interp(a.interp, F)
        _dump(cm.interpret(F, phi, max_dim=a.max_dim).to_json(), a.output)
        return EXIT_OK
    if a.op == "graphtype":
        G = _load_graph(a.graph, a.vertices, a.kinds)
        _dump(cm.graph_type(G, cm.kind_gamma(G), a.method).to_json(), a.output)
        return EXIT_OK
    raise InputError(f"unknown sem operation {a.op!r}")


def cmd_export_dot(a) -> int:
    if a.graph:
        text = _load_graph(a.input, a.vertices, a.kinds).to_dot()
    else:
        P = _load_structure(a.input)
        if a.switching is not None:
            s = _parse_switching(a.switching, P)
            text = pn.switching_graph(P, s).to_dot(P.labels)
        else:
            text = P.to_dot()
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="causlogic", description="Causal proof-nets, graph types and their affine semantics.")
    p.add_argument("--seed", type=int, default=0, help="seed for generated corpora")
    p.add_argument("--max-switchings", type=int, default=pn.DEFAULT_MAX_SWITCHINGS)
    p.add_argument("--max-dim", type=int, default=cm.DEFAULT_MAX_DIM)
    # the same flags are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-switchings", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-dim", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="decide the proof-net criterion")
    c.add_argument("formula", nargs="?", help="formula text, a file, or '-' for stdin")
    c.add_argument("--method", choices=("search", "enumerate"), default="search")
    c.add_argument("--random", type=int, default=0, metavar="N", help="check N generated formulae instead")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("switchings", parents=[common], help="count or list switchings")
    c.add_argument("formula")
    c.add_argument("--list", action="store_true")
    c.add_argument("--limit", type=int)
    c.set_defaults(func=cmd_switchings)

    c = sub.add_parser("rewrite", parents=[common], help="apply the pom or fo encoding")
    c.add_argument("which", choices=("pom", "fo"))
    c.add_argument("input")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_rewrite)

    c = sub.add_parser("graph", parents=[common], help="graph-type combinatorics")
    c.add_argument("op", choices=("normalize", "includes", "compatible", "subst", "sorts"))
    c.add_argument("graph", help="graph JSON file or an edge list like 'a>b,b>c'")
    c.add_argument("other", nargs="?", help="second graph (includes, compatible, subst)")
    c.add_argument("--vertex", help="vertex to substitute")
    c.add_argument("--vertices", help="comma-separated vertex order for edge-list input")
    c.add_argument("--kinds", help="vertex kinds, e.g. 'a=fo,b=fod'")
    c.add_argument("--other-kinds", help="kinds for the second graph of 'compatible'")
    c.set_defaults(func=cmd_graph)

    c = sub.add_parser("sem", parents=[common], help="semantic oracle")
    c.add_argument("op", choices=("check", "object", "graphtype"))
    c.add_argument("graph", nargs="?", help="graph for 'graphtype'")
    c.add_argument("--formula")
    c.add_argument("--interp", default="default", help="'default' or an interpretation JSON file")
    c.add_argument("--route", choices=("auto", "direct", "sequent"), default="auto")
    c.add_argument("--method", choices=(cm.SIGNALLING, cm.ORDERED, cm.LOCAL2), default=cm.SIGNALLING)
    c.add_argument("--vertices")
    c.add_argument("--kinds")
    c.add_argument("--random", type=int, default=0, metavar="N")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_sem)

    c = sub.add_parser("export-dot", parents=[common], help="DOT for a structure, a switching graph or a DAG")
    c.add_argument("input")
    c.add_argument("--switching", help="switching index or comma-separated options")
    c.add_argument("--graph", action="store_true", help="treat the input as a DAG")
    c.add_argument("--vertices")
    c.add_argument("--kinds")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_export_dot)
    return p


_INPUT_ERRORS = (
    InputError,
    fm.ParseError,
    fm.UnbalancedFormula,
    pn.SizeGuard,
    pn.MalformedStructure,
    gt.CyclicGraph,
    gt.VertexMismatch,
    gt.NameCollision,
    cm.NotFlat,
    cm.NotCompatible,
    cm.NotFoRespecting,
    cm.DimensionGuard,
    json.JSONDecodeError,
    KeyError,
    ValueError,
    OSError,
)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if a.command == "graph" and a.op in ("includes", "compatible", "subst") and a.other is None:
        sys.stderr.write(f"causlogic: graph {a.op} needs two graphs\n")
        return EXIT_INPUT
    if a.command == "graph" and a.op == "subst" and not a.vertex:
        sys.stderr.write("causlogic: graph subst needs --vertex\n")
        return EXIT_INPUT
    try:
        return a.func(a)
    except _INPUT_ERRORS as e:
        sys.stderr.write(f"causlogic: {e}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

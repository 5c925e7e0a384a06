"""Causal formulae in negation normal form.

Concrete syntax::

    A        regular atom          !A       first-order atom
    A~       negated atom          !A~      negated first-order atom
    I        unit
    F * G    tensor                F % G    par
    F < G    seq

There is no precedence between the three binary operators; mixing them
requires parentheses.  Chains of one operator associate to the left.
``(F)~`` is accepted and expands to the NNF dual of ``F``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Atom",
    "Unit",
    "Bin",
    "Formula",
    "ParseError",
    "UnbalancedFormula",
    "parse",
    "render",
    "pretty",
    "negate",
    "is_balanced",
    "check_balanced",
    "leaf_order",
    "atom_names",
    "rename",
    "par_components",
    "to_json",
    "from_json",
    "tensor",
    "par",
    "seq",
    "alpha_equivalent",
]

OPS = ("tensor", "seq", "par")
_SYMBOL = {"tensor": "*", "seq": "<", "par": "%"}
_ASCII = {k: f" {v} " for k, v in _SYMBOL.items()}
_PRETTY = {"tensor": " ⊗ ", "seq": " < ", "par": " ⅋ "}
_BY_SYMBOL = {v: k for k, v in _SYMBOL.items()}


@dataclass(frozen=True)
class Atom:
    name: str
    fo: bool = False
    neg: bool = False

    def dual(self) -> "Atom":
        return Atom(self.name, self.fo, not self.neg)


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown connective {self.op!r}")


Formula = Union[Atom, Unit, Bin]
UNIT = Unit()


def tensor(*fs: Formula) -> Formula:
    return _chain("tensor", fs)


def par(*fs: Formula) -> Formula:
    return _chain("par", fs)


def seq(*fs: Formula) -> Formula:
    return _chain("seq", fs)


def _chain(op, fs):
    if not fs:
        raise ValueError("empty chain")
    out = fs[0]
    for f in fs[1:]:
        out = Bin(op, out, f)
    return out


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnbalancedFormula(ValueError):
    pass


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([()*%<~!])|([A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text: str):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2)
        out.append((m.group(1) or m.group(2), start))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, expected=None):
        tok, off = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok or 'end of input'!r}", off)
        self.i += 1
        return tok, off

    def expr(self):
        f = self.term()
        op = None
        while self.peek()[0] in _BY_SYMBOL:
            tok, off = self.take()
            this = _BY_SYMBOL[tok]
            if op is not None and this != op:
                raise ParseError("mixed connectives need parentheses", off)
            op = this
            f = Bin(op, f, self.term())
        return f

    def term(self):
        tok, off = self.peek()
        if tok == "(":
            self.take()
            f = self.expr()
            self.take(")")
        elif tok == "!":
            self.take()
            name, noff = self.take()
            if not _is_ident(name) or name == "I":
                raise ParseError("expected an atom name after '!'", noff)
            f = Atom(name, fo=True)
        elif tok == "I":
            self.take()
            f = UNIT
        elif _is_ident(tok):
            self.take()
            f = Atom(tok)
        else:
            raise ParseError(f"unexpected {tok or 'end of input'!r}", off)
        while self.peek()[0] == "~":
            self.take()
            f = negate(f)
        return f


def _is_ident(tok: str) -> bool:
    return bool(tok) and (tok[0].isalpha() or tok[0] == "_")


def parse(text: str, strict: bool = True) -> Formula:
    """Parse concrete syntax into an AST.

    With ``strict`` the atom occurrences are validated: no name may occur
    twice with the same polarity, and both occurrences must agree on the
    first-order flag.
    """
    p = _Parser(text)
    f = p.expr()
    tok, off = p.peek()
    if tok != "":
        raise ParseError(f"trailing input {tok!r}", off)
    if strict:
        _check_occurrences(f, text)
    return f


def _check_occurrences(f: Formula, text: str = "") -> None:
    seen: dict[tuple[str, bool], Atom] = {}
    flags: dict[str, bool] = {}
    for a in leaf_order(f, atoms_only=True):
        if (a.name, a.neg) in seen:
            raise ParseError(f"atom {a.name!r} occurs twice with the same polarity", _find(text, a.name))
        seen[(a.name, a.neg)] = a
        if flags.setdefault(a.name, a.fo) != a.fo:
            raise ParseError(f"atom {a.name!r} is first-order in one occurrence only", _find(text, a.name))
    return None


def _find(text: str, name: str) -> int:
    m = re.search(r"(?<![A-Za-z0-9_])" + re.escape(name) + r"(?![A-Za-z0-9_'])", text)
    return m.start() if m else 0


# -- rendering -------------------------------------------------------------

def render(f: Formula) -> str:
    """ASCII rendering accepted by :func:`parse`."""
    return _render(f, _ASCII, _atom_ascii)


def pretty(f: Formula) -> str:
    """Unicode rendering for display."""
    return _render(f, _PRETTY, _atom_pretty)


def _atom_ascii(a: Atom) -> str:
    return ("!" if a.fo else "") + a.name + ("~" if a.neg else "")


def _atom_pretty(a: Atom) -> str:
    base = a.name + ("¹" if a.fo else "")
    if a.neg:
        return f"({base})*" if a.fo else base + "*"
    return base


def _render(f, symbols, atom_fn):
    def go(g, top):
        if isinstance(g, Atom):
            return atom_fn(g)
        if isinstance(g, Unit):
            return "I"
        # a left operand with the same connective needs no parentheses
        same = isinstance(g.left, Bin) and g.left.op == g.op
        body = go(g.left, same) + symbols[g.op] + go(g.right, False)
        return body if top else f"({body})"

    return go(f, True)


# -- structure -------------------------------------------------------------

def negate(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return f.dual()
    if isinstance(f, Unit):
        return f
    op = {"tensor": "par", "par": "tensor", "seq": "seq"}[f.op]
    return Bin(op, negate(f.left), negate(f.right))


def leaf_order(f: Formula, atoms_only: bool = False) -> list:
    """Leaves left to right; units are included unless ``atoms_only``."""
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Bin):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, Atom) or not atoms_only:
            out.append(g)
    return out


def atom_names(f: Formula) -> list[str]:
    """Atom names in order of first occurrence."""
    return list(dict.fromkeys(a.name for a in leaf_order(f, atoms_only=True)))


def is_balanced(f: Formula) -> bool:
    counts = Counter((a.name, a.neg) for a in leaf_order(f, atoms_only=True))
    flags: dict[str, set] = {}
    for a in leaf_order(f, atoms_only=True):
        flags.setdefault(a.name, set()).add(a.fo)
    return all(
        counts[(n, False)] == 1 and counts[(n, True)] == 1 and len(flags[n]) == 1
        for n in flags
    )


def check_balanced(f: Formula) -> None:
    if not is_balanced(f):
        raise UnbalancedFormula(f"formula is not balanced: {render(f)}")


def rename(f: Formula, mapping: dict[str, str]) -> Formula:
    if isinstance(f, Atom):
        return Atom(mapping.get(f.name, f.name), f.fo, f.neg)
    if isinstance(f, Unit):
        return f
    return Bin(f.op, rename(f.left, mapping), rename(f.right, mapping))


def par_components(f: Formula) -> list[Formula]:
    """Operands of the maximal par chain at the root."""
    if isinstance(f, Bin) and f.op == "par":
        return par_components(f.left) + par_components(f.right)
    return [f]


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order traversal of the syntax tree."""
    if isinstance(f, Bin):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    yield f


# -- JSON ------------------------------------------------------------------

def to_json(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {"op": "atom", "name": f.name, "fo": f.fo, "neg": f.neg}
    if isinstance(f, Unit):
        return {"op": "unit"}
    return {"op": f.op, "children": [to_json(f.left), to_json(f.right)]}


def from_json(data: dict) -> Formula:
    op = data.get("op")
    if op == "atom":
        return Atom(str(data["name"]), bool(data.get("fo", False)), bool(data.get("neg", False)))
    if op == "unit":
        return UNIT
    if op in OPS:
        kids = data.get("children", [])
        if len(kids) != 2:
            raise ValueError(f"{op} node needs exactly two children")
        return Bin(op, from_json(kids[0]), from_json(kids[1]))
    raise ValueError(f"unknown formula node {op!r}")


# -- renaming equivalence --------------------------------------------------

def _match(f: Formula, g: Formula, ren: dict, inv: dict) -> bool:
    if isinstance(f, Atom):
        if not isinstance(g, Atom) or f.fo != g.fo or f.neg != g.neg:
            return False
        if f.name in ren:
            return ren[f.name] == g.name
        if g.name in inv:
            return False
        ren[f.name] = g.name
        inv[g.name] = f.name
        return True
    if isinstance(f, Unit):
        return isinstance(g, Unit)
    return (
        isinstance(g, Bin)
        and f.op == g.op
        and _match(f.left, g.left, ren, inv)
        and _match(f.right, g.right, ren, inv)
    )


def alpha_equivalent(fs: list[Formula], gs: list[Formula]) -> dict | None:
    """Match two multisets of formulae under one bijective atom renaming.

    Returns the renaming (names of ``fs`` to names of ``gs``) or None.
    """
    if len(fs) != len(gs):
        return None

    def go(i, used, ren, inv):
        if i == len(fs):
            return dict(ren)
        for j, g in enumerate(gs):
            if j in used:
                continue
            r2, i2 = dict(ren), dict(inv)
            if _match(fs[i], g, r2, i2):
                out = go(i + 1, used | {j}, r2, i2)
                if out is not None:
                    return out
        return None

    return go(0, frozenset(), {}, {})

"""Exact rational linear algebra and canonical affine subspaces.

Vectors are stored internally as numpy object arrays of ``flint.fmpq``; row
reduction is delegated to FLINT.  The public surface speaks
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint
import numpy as np

__all__ = [
    "DimMismatch",
    "AffineSubspace",
    "to_rat",
    "rat_vector",
    "rref",
    "nullspace",
    "solve_affine",
    "canonicalize",
    "intersect",
    "affine_hull_union",
    "contains",
    "subset",
    "annihilator_one",
    "witness_in_difference",
]

ZERO = flint.fmpq(0)
ONE = flint.fmpq(1)


class DimMismatch(ValueError):
    pass


def _q(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, (int, np.integer)):
        return flint.fmpq(int(x))
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_rat(q) -> Fraction:
    """Convert an internal scalar to a :class:`Fraction`."""
    if isinstance(q, Fraction):
        return q
    q = _q(q)
    return Fraction(int(q.p), int(q.q))


def rat_vector(values: Iterable) -> np.ndarray:
    return np.array([_q(v) for v in values], dtype=object)


def rat_matrix(rows: Iterable[Iterable], ncols: int) -> np.ndarray:
    data = [[_q(v) for v in row] for row in rows]
    if not data:
        return np.empty((0, ncols), dtype=object)
    out = np.array(data, dtype=object)
    if out.ndim != 2 or out.shape[1] != ncols:
        raise DimMismatch(f"expected rows of length {ncols}")
    return out


def zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def _to_flint(a: np.ndarray) -> flint.fmpq_mat:
    r, c = a.shape
    return flint.fmpq_mat(r, c, list(a.flat))


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with unit pivots; zero rows are dropped.

    Returns the nonzero rows and their pivot columns.
    """
    r, c = a.shape
    if r == 0 or c == 0:
        return np.empty((0, c), dtype=object), []
    m, rank = _to_flint(a).rref()
    out = np.array(m.entries(), dtype=object).reshape(r, c)[:rank]
    pivots = []
    for row in out:
        for j in range(c):
            if row[j] != 0:
                pivots.append(j)
                break
    return out, pivots


def nullspace(a: np.ndarray, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}``."""
    n = a.shape[1] if ncols is None else ncols
    red, pivots = rref(a) if a.shape[0] else (np.empty((0, n), dtype=object), [])
    free = [j for j in range(n) if j not in set(pivots)]
    basis = zeros((len(free), n))
    for k, f in enumerate(free):
        basis[k, f] = ONE
        for row, p in zip(red, pivots):
            basis[k, p] = -row[f]
    return basis


def solve_affine(a: np.ndarray, b: Sequence) -> "AffineSubspace":
    """Solution set of ``a @ x = b`` as a (possibly empty) affine subspace."""
    m, n = a.shape
    b = np.array([_q(v) for v in b], dtype=object)
    if m == 0:
        return AffineSubspace.full(n)
    aug = np.concatenate([a, b.reshape(m, 1)], axis=1)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return AffineSubspace.empty(n)
    offset = zeros(n)
    for row, p in zip(red, pivots):
        offset[p] = row[n]
    return AffineSubspace._from_raw(n, offset, nullspace(red[:, :n], n))


class AffineSubspace:
    """An affine subspace of Q^n held in canonical form, or the empty set.

    Directions are kept in reduced row-echelon form and the offset is reduced
    against them (zero at every pivot column), so equal subspaces have
    identical data.
    """

    __slots__ = ("dim", "_o", "_d", "_pivots", "_hash")

    def __init__(self, dim: int, offset: Sequence | None = None, directions: Iterable[Sequence] = ()):
        if dim < 0:
            raise ValueError("ambient dimension must be nonnegative")
        if offset is None:
            self._set(dim, None, np.empty((0, dim), dtype=object))
            return
        o = rat_vector(offset)
        if o.shape != (dim,):
            raise DimMismatch(f"offset has length {len(o)}, expected {dim}")
        self._set(dim, o, rat_matrix(directions, dim))

    @classmethod
    def _from_raw(cls, dim: int, offset, directions) -> "AffineSubspace":
        self = cls.__new__(cls)
        self._set(dim, offset, directions)
        return self

    def _set(self, dim, o, d):
        self.dim = dim
        self._hash = None
        if o is None:
            self._o = None
            self._d = np.empty((0, dim), dtype=object)
            self._pivots = []
            return
        d, pivots = rref(d) if d.shape[0] else (d, [])
        if pivots:
            o = o - o[pivots].dot(d)
        self._o = o
        self._d = d
        self._pivots = pivots

    # -- constructors ---------------------------------------------------
    @classmethod
    def empty(cls, dim: int) -> "AffineSubspace":
        return cls(dim)

    @classmethod
    def point(cls, v: Sequence) -> "AffineSubspace":
        v = list(v)
        return cls(len(v), v)

    @classmethod
    def full(cls, dim: int) -> "AffineSubspace":
        d = zeros((dim, dim))
        for i in range(dim):
            d[i, i] = ONE
        return cls._from_raw(dim, zeros(dim), d)

    @classmethod
    def from_points(cls, points: Iterable[Sequence], dim: int | None = None) -> "AffineSubspace":
        pts = [rat_vector(p) for p in points]
        if not pts:
            if dim is None:
                raise ValueError("dimension required for an empty point set")
            return cls.empty(dim)
        n = len(pts[0])
        if dim is not None and dim != n:
            raise DimMismatch("points do not match the requested dimension")
        if any(len(p) != n for p in pts):
            raise DimMismatch("points of differing length")
        dirs = np.array([p - pts[0] for p in pts[1:]], dtype=object).reshape(len(pts) - 1, n)
        return cls._from_raw(n, pts[0], dirs)

    # -- views ------------------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return self._o is None

    @property
    def affine_dim(self) -> int:
        """Number of independent directions; -1 for the empty set."""
        return -1 if self._o is None else self._d.shape[0]

    @property
    def offset(self) -> tuple[Fraction, ...] | None:
        return None if self._o is None else tuple(to_rat(x) for x in self._o)

    @property
    def directions(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(to_rat(x) for x in row) for row in self._d)

    def generators(self) -> list[np.ndarray]:
        """Affinely independent points spanning the subspace."""
        if self._o is None:
            return []
        return [self._o] + [self._o + d for d in self._d]

    def equations(self) -> tuple[np.ndarray, np.ndarray]:
        """Implicit form ``(N, b)`` with the subspace equal to ``{x : N x = b}``."""
        if self._o is None:
            raise ValueError("the empty set has no implicit equations here")
        n = nullspace(self._d, self.dim) if self._d.shape[0] else _identity(self.dim)
        return n, n.dot(self._o) if n.shape[0] else np.empty(0, dtype=object)

    def _reduce(self, v: np.ndarray) -> np.ndarray:
        if self._pivots:
            return v - v[self._pivots].dot(self._d)
        return v

    # -- predicates / operations -----------------------------------------
    def contains(self, v: Sequence) -> bool:
        v = v if isinstance(v, np.ndarray) else rat_vector(v)
        if len(v) != self.dim:
            raise DimMismatch(f"vector of length {len(v)} in Q^{self.dim}")
        if self._o is None:
            return False
        r = self._reduce(v - self._o)
        return all(x == 0 for x in r)

    def subset(self, other: "AffineSubspace") -> bool:
        _check_dims(self, other)
        if self._o is None:
            return True
        if other._o is None:
            return False
        if not other.contains(self._o):
            return False
        for d in self._d:
            if any(x != 0 for x in other._reduce(d)):
                return False
        return True

    def intersect(self, other: "AffineSubspace") -> "AffineSubspace":
        _check_dims(self, other)
        if self._o is None or other._o is None:
            return AffineSubspace.empty(self.dim)
        n1, b1 = self.equations()
        n2, b2 = other.equations()
        a = np.concatenate([n1, n2], axis=0)
        return solve_affine(a, list(b1) + list(b2))

    def hull_union(self, other: "AffineSubspace") -> "AffineSubspace":
        _check_dims(self, other)
        if self._o is None:
            return other
        if other._o is None:
            return self
        dirs = np.concatenate([self._d, other._d, (other._o - self._o).reshape(1, self.dim)], axis=0)
        return AffineSubspace._from_raw(self.dim, self._o, dirs)

    def annihilator_one(self) -> "AffineSubspace":
        """Covectors pairing to one with every point: ``{p : p.x = 1 for x in S}``."""
        if self._o is None:
            return AffineSubspace.full(self.dim)
        a = np.concatenate([self._o.reshape(1, self.dim), self._d], axis=0)
        b = [ONE] + [ZERO] * self._d.shape[0]
        return solve_affine(a, b)

    def permute(self, perm: Sequence[int]) -> "AffineSubspace":
        """Reindex coordinates: the new coordinate ``i`` is the old ``perm[i]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.dim)):
            raise ValueError("not a permutation of the coordinates")
        if self._o is None:
            return self
        return AffineSubspace._from_raw(self.dim, self._o[perm], self._d[:, perm])

    def map_linear(self, m: np.ndarray) -> "AffineSubspace":
        """Image under the linear map ``x -> m @ x``."""
        if m.shape[1] != self.dim:
            raise DimMismatch("map does not match the ambient dimension")
        if self._o is None:
            return AffineSubspace.empty(m.shape[0])
        dirs = self._d.dot(m.T) if self._d.shape[0] else np.empty((0, m.shape[0]), dtype=object)
        return AffineSubspace._from_raw(m.shape[0], m.dot(self._o), dirs)

    # -- identity ---------------------------------------------------------
    def _key(self):
        if self._o is None:
            return (self.dim, None)
        return (self.dim, tuple(self._o), tuple(self._d.flat), self._d.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineSubspace):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        if self._o is None:
            return f"AffineSubspace(dim={self.dim}, empty)"
        return f"AffineSubspace(dim={self.dim}, affine_dim={self.affine_dim})"

    def to_json(self) -> dict:
        if self._o is None:
            return {"dim": self.dim, "empty": True}
        return {
            "dim": self.dim,
            "offset": [str(to_rat(x)) for x in self._o],
            "directions": [[str(to_rat(x)) for x in row] for row in self._d],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AffineSubspace":
        if data.get("empty"):
            return cls.empty(data["dim"])
        return cls(data["dim"], data["offset"], data.get("directions", []))


def _identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def _check_dims(s1: AffineSubspace, s2: AffineSubspace) -> None:
    if s1.dim != s2.dim:
        raise DimMismatch(f"ambient dimensions differ: {s1.dim} vs {s2.dim}")


# Functional aliases matching the operation names used across the package.

def canonicalize(s: AffineSubspace) -> AffineSubspace:
    return AffineSubspace._from_raw(s.dim, s._o, s._d) if s._o is not None else s


def intersect(s1: AffineSubspace, s2: AffineSubspace) -> AffineSubspace:
    return s1.intersect(s2)


def affine_hull_union(s1: AffineSubspace, s2: AffineSubspace) -> AffineSubspace:
    if s1.is_empty or s2.is_empty:
        raise ValueError("affine hull union needs two nonempty subspaces")
    return s1.hull_union(s2)


def contains(s: AffineSubspace, v: Sequence) -> bool:
    return s.contains(v)


def subset(s1: AffineSubspace, s2: AffineSubspace) -> bool:
    return s1.subset(s2)


def annihilator_one(s: AffineSubspace) -> AffineSubspace:
    return s.annihilator_one()


def witness_in_difference(s1: AffineSubspace, s2: AffineSubspace) -> tuple[Fraction, ...] | None:
    """A point of ``s1`` outside ``s2``, or None when ``s1`` is contained in ``s2``."""
    _check_dims(s1, s2)
    if s1.subset(s2):
        return None
    if not s2.contains(s1._o):
        return tuple(to_rat(x) for x in s1._o)
    for d in s1._d:
        p = s1._o + d
        if not s2.contains(p):
            return tuple(to_rat(x) for x in p)
    raise AssertionError("unreachable: s1 not a subset yet every generator lies in s2")

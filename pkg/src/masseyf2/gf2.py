"""Exact linear algebra over GF(2) with int bitsets.

A vector of length ``n`` is a Python ``int`` in ``[0, 2**n)``; bit ``i`` is
coordinate ``i``.  The length is carried by the enclosing matrix or subspace.
Pivots are lowest set bits, so echelon bases list pivots in increasing order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import ContractViolation


def _check(v: int, n: int, what: str = "vector") -> None:
    if v < 0 or v >> n:
        raise ContractViolation(f"{what} {v:#b} does not fit in dimension {n}")


def lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


def bits(v: int) -> Iterator[int]:
    """Indices of the set bits of ``v``, increasing."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def from_bits(seq: Iterable[int]) -> int:
    """Pack a 0/1 sequence (coordinate 0 first) into an int."""
    out = 0
    for i, b in enumerate(seq):
        if b & 1:
            out |= 1 << i
    return out


def to_bits(v: int, n: int) -> list[int]:
    return [(v >> i) & 1 for i in range(n)]


def bitstring(v: int, n: int) -> str:
    return "".join(str((v >> i) & 1) for i in range(n))


class Echelon:
    """Incremental echelon basis keyed by lowest set bit, with tags.

    Each stored row carries a tag (an int) recording which inserted
    vectors were combined to produce it, so reductions return the
    combination used.
    """

    __slots__ = ("rows",)

    def __init__(self) -> None:
        self.rows: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        rows = self.rows
        residual = 0
        while v:
            low = v & -v
            hit = rows.get(low.bit_length() - 1)
            if hit is None:
                residual |= low
                v ^= low
            else:
                v ^= hit[0]
                tag ^= hit[1]
        return residual, tag

    def insert(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Add ``v``; returns the reduced vector and its tag.

        A zero reduced vector means ``v`` was dependent, and the tag is then
        a linear relation among the inserted tags.
        """
        r, t = self.reduce(v, tag)
        if r:
            self.rows[lowbit(r)] = (r, t)
        return r, t


def _rref(vectors: Iterable[int]) -> tuple[int, ...]:
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    pivots = sorted(ech.rows)
    done: dict[int, int] = {}
    for p in reversed(pivots):
        v = ech.rows[p][0]
        higher = v >> (p + 1) << (p + 1)
        for q in bits(higher):
            b = done.get(q)
            if b is not None:
                v ^= b
        done[p] = v
    return tuple(done[p] for p in pivots)


@dataclass(frozen=True)
class Gf2Matrix:
    """An ``nrows x ncols`` matrix stored by columns (each an int of length nrows)."""

    nrows: int
    ncols: int
    columns: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.columns) != self.ncols:
            raise ContractViolation("column count does not match ncols")
        for c in self.columns:
            _check(c, self.nrows, "column")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "Gf2Matrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [0] * ncols
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ContractViolation("ragged rows")
            for j, e in enumerate(row):
                if e & 1:
                    cols[j] |= 1 << i
        return cls(nrows, ncols, tuple(cols))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, ncols, (0,) * ncols)

    def apply(self, v: int) -> int:
        _check(v, self.ncols)
        out = 0
        cols = self.columns
        for j in bits(v):
            out ^= cols[j]
        return out

    def rows(self) -> list[list[int]]:
        return [[(c >> i) & 1 for c in self.columns] for i in range(self.nrows)]

    def rank(self) -> int:
        ech = Echelon()
        for c in self.columns:
            ech.insert(c)
        return len(ech)


@dataclass(frozen=True)
class Gf2Subspace:
    """Subspace of GF(2)^ambient_dim in canonical reduced row-echelon form."""

    ambient_dim: int
    basis: tuple[int, ...] = ()

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[int] = ()) -> "Gf2Subspace":
        vecs = list(vectors)
        for v in vecs:
            _check(v, ambient_dim)
        return cls(ambient_dim, _rref(vecs))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Gf2Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Gf2Subspace":
        return cls(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(lowbit(b) for b in self.basis)

    def reduce(self, v: int) -> int:
        """Canonical representative of ``v`` modulo this subspace."""
        _check(v, self.ambient_dim)
        for b in self.basis:
            if (v >> lowbit(b)) & 1:
                v ^= b
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __contains__(self, v: int) -> bool:
        return self.contains(v)

    def is_subspace_of(self, other: "Gf2Subspace") -> bool:
        _same_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    def elements(self) -> Iterator[int]:
        """All 2**dimension elements, in Gray-code order starting at 0."""
        v = 0
        yield v
        for k in range(1, 1 << len(self.basis)):
            v ^= self.basis[lowbit(k)]
            yield v


def _same_ambient(s: Gf2Subspace, t: Gf2Subspace) -> None:
    if s.ambient_dim != t.ambient_dim:
        raise ContractViolation(f"ambient dimensions differ: {s.ambient_dim} vs {t.ambient_dim}")


@dataclass(frozen=True)
class Gf2AffineSubspace:
    """``representative + direction``; the representative is stored reduced."""

    representative: int
    direction: Gf2Subspace

    def __post_init__(self) -> None:
        object.__setattr__(self, "representative", self.direction.reduce(self.representative))

    @property
    def ambient_dim(self) -> int:
        return self.direction.ambient_dim

    @property
    def contains_zero(self) -> bool:
        return self.representative == 0

    def contains(self, v: int) -> bool:
        return self.direction.reduce(v) == self.representative

    def __contains__(self, v: int) -> bool:
        return self.contains(v)

    def elements(self) -> Iterator[int]:
        for d in self.direction.elements():
            yield self.representative ^ d

    def __len__(self) -> int:
        return 1 << self.direction.dimension


def null_space(m: Gf2Matrix) -> Gf2Subspace:
    return _eliminate(m, 0)[2]


def column_space(m: Gf2Matrix) -> Gf2Subspace:
    return Gf2Subspace.span(m.nrows, m.columns)


def _eliminate(m: Gf2Matrix, target: int) -> tuple[int, Optional[int], Gf2Subspace]:
    ech = Echelon()
    relations = []
    for j, c in enumerate(m.columns):
        r, t = ech.insert(c, 1 << j)
        if not r:
            relations.append(t)
    residual, particular = ech.reduce(target)
    kernel = Gf2Subspace.span(m.ncols, relations)
    return residual, (particular if residual == 0 else None), kernel


def solve(m: Gf2Matrix, target: int) -> Optional[tuple[int, Gf2Subspace]]:
    """Solve ``m x = target``.

    Returns ``(particular, kernel)`` or ``None`` when inconsistent.  The
    particular solution uses only pivot columns (free variables zero).
    """
    _check(target, m.nrows, "target")
    _, particular, kernel = _eliminate(m, target)
    if particular is None:
        return None
    return particular, kernel


def subspace_sum(s: Gf2Subspace, t: Gf2Subspace) -> Gf2Subspace:
    _same_ambient(s, t)
    return Gf2Subspace(s.ambient_dim, _rref(s.basis + t.basis))


def subspace_intersection(s: Gf2Subspace, t: Gf2Subspace) -> Gf2Subspace:
    _same_ambient(s, t)
    ech = Echelon()
    for i, b in enumerate(s.basis):
        ech.insert(b, 1 << i)
    found = []
    k = len(s.basis)
    for j, b in enumerate(t.basis):
        r, tag = ech.insert(b, 1 << (k + j))
        if not r:
            v = 0
            for i in bits(tag & ((1 << k) - 1)):
                v ^= s.basis[i]
            found.append(v)
    return Gf2Subspace.span(s.ambient_dim, found)


def contains(s: Gf2Subspace, v: int) -> bool:
    return s.contains(v)


def affine_contains(a: Gf2AffineSubspace, v: int) -> bool:
    return a.contains(v)


class QuotientMap:
    """Linear map ``ambient -> ambient/modulo`` in coordinates of a fixed complement.

    The complement is the subsequence of ``ambient.basis`` that stays
    independent modulo ``modulo``; ``lift`` returns combinations of those
    vectors, so lifts of basis coordinates are ambient basis vectors.
    """

    def __init__(self, ambient: Gf2Subspace, modulo: Gf2Subspace) -> None:
        _same_ambient(ambient, modulo)
        if not modulo.is_subspace_of(ambient):
            raise ContractViolation("quotient requires modulo to lie inside ambient")
        self.ambient = ambient
        self.modulo = modulo
        ech = Echelon()
        for b in modulo.basis:
            ech.insert(b)
        complement = []
        for b in ambient.basis:
            r, _ = ech.reduce(b)
            if r:
                ech.insert(b, 1 << len(complement))
                complement.append(b)
        self._ech = ech
        self.complement: tuple[int, ...] = tuple(complement)
        self._total: Optional[Echelon] = None

    @property
    def dimension(self) -> int:
        return len(self.complement)

    def __call__(self, v: int) -> int:
        residual, tag = self._ech.reduce(v)
        if residual:
            raise ContractViolation("vector does not lie in the ambient subspace")
        return tag

    def extended(self, v: int) -> int:
        """A fixed linear extension of the map to the whole space."""
        if self._total is None:
            total = Echelon()
            total.rows = dict(self._ech.rows)
            for i in range(self.ambient.ambient_dim):
                total.insert(1 << i)
            self._total = total
        return self._total.reduce(v)[1]

    def lift(self, coords: int) -> int:
        _check(coords, self.dimension, "coordinates")
        out = 0
        for i in bits(coords):
            out ^= self.complement[i]
        return out


def quotient_coordinates(ambient: Gf2Subspace, modulo: Gf2Subspace) -> QuotientMap:
    return QuotientMap(ambient, modulo)

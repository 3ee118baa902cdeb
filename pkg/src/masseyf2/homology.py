"""Cycles, boundaries and homology classes of a validated presentation."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .dga import ChainElement, Dga, DgaPresentation, algebra, validate
from .errors import DegreeUnavailable, InvalidPresentation, NotACycle
from .gf2 import Gf2Matrix, Gf2Subspace, QuotientMap, column_space, null_space, quotient_coordinates


@dataclass(frozen=True)
class HomologyClass:
    """A class in ``H^degree``; equality ignores the chosen representative."""

    degree: int
    coords: int
    representative: ChainElement = field(compare=False)

    def is_zero(self) -> bool:
        return self.coords == 0


@dataclass(frozen=True)
class _Degree:
    cycles: Gf2Subspace
    boundaries: Gf2Subspace
    qmap: QuotientMap


class HomologyStructure:
    """Homology of ``presentation`` in degrees ``0 .. truncation - 1``.

    Degrees are computed on first use; negative degrees are the zero group.
    """

    def __init__(self, presentation: DgaPresentation) -> None:
        report = validate(presentation)
        if not report.ok:
            kind, witness, detail = report.violations[0]
            raise InvalidPresentation(f"{kind} violation at {witness}: {detail}")
        self.presentation = presentation
        self.dga: Dga = algebra(presentation)
        self._lock = threading.Lock()
        self._degrees: dict[int, _Degree] = {}

    @property
    def max_degree(self) -> int:
        return self.presentation.truncation - 1

    def available(self, n: int) -> bool:
        return n <= self.max_degree

    def require(self, n: int) -> None:
        if not self.available(n):
            raise DegreeUnavailable(
                f"homology in degree {n} needs chains up to degree {n + 1}, "
                f"beyond truncation {self.presentation.truncation}", degree=n)

    def _degree(self, n: int) -> _Degree:
        self.require(n)
        got = self._degrees.get(n)
        if got is not None:
            return got
        with self._lock:
            got = self._degrees.get(n)
            if got is None:
                A = self.dga
                dim = A.dim(n)
                if n < 0:
                    cycles = boundaries = Gf2Subspace.zero(0)
                else:
                    cycles = null_space(Gf2Matrix(A.dim(n + 1), dim, A.d_columns(n)))
                    if n == 0:
                        boundaries = Gf2Subspace.zero(dim)
                    else:
                        boundaries = column_space(Gf2Matrix(dim, A.dim(n - 1), A.d_columns(n - 1)))
                got = _Degree(cycles, boundaries, quotient_coordinates(cycles, boundaries))
                self._degrees[n] = got
        return got

    # -- spaces --------------------------------------------------------------

    def cycles(self, n: int) -> Gf2Subspace:
        return self._degree(n).cycles

    def boundaries(self, n: int) -> Gf2Subspace:
        return self._degree(n).boundaries

    def dim(self, n: int) -> int:
        return self._degree(n).qmap.dimension

    def basis(self, n: int) -> list[ChainElement]:
        """Cycle representatives of the homology basis in degree ``n``."""
        return [ChainElement(n, v) for v in self._degree(n).qmap.complement]

    def basis_classes(self, n: int) -> list[HomologyClass]:
        return [HomologyClass(n, 1 << i, rep) for i, rep in enumerate(self.basis(n))]

    def quotient_map(self, n: int) -> QuotientMap:
        return self._degree(n).qmap

    # -- classes -------------------------------------------------------------

    def is_cycle(self, u: ChainElement) -> bool:
        return self.cycles(u.degree).contains(u.coords)

    def is_boundary(self, u: ChainElement) -> bool:
        return self.boundaries(u.degree).contains(u.coords)

    def class_coords(self, u: ChainElement) -> int:
        deg = self._degree(u.degree)
        if not deg.cycles.contains(u.coords):
            du = self.dga.differential(u)
            raise NotACycle(f"{self.dga.format(u)} is not a cycle: d = {self.dga.format(du)}",
                            element=self.dga.format(u), differential=self.dga.format(du))
        return deg.qmap(u.coords)

    def class_of(self, u: ChainElement) -> HomologyClass:
        return HomologyClass(u.degree, self.class_coords(u), u)

    def from_coords(self, n: int, coords: int) -> HomologyClass:
        return HomologyClass(n, coords, ChainElement(n, self._degree(n).qmap.lift(coords)))

    def zero_class(self, n: int) -> HomologyClass:
        return HomologyClass(n, 0, ChainElement(n, 0))

    def is_homologous(self, u: ChainElement, v: ChainElement) -> bool:
        for w in (u, v):
            if not self.is_cycle(w):
                self.class_coords(w)
        return self.is_boundary(u + v)

    def product_class(self, s: HomologyClass, t: HomologyClass) -> HomologyClass:
        self.require(s.degree + t.degree)
        return self.class_of(self.dga.multiply(s.representative, t.representative))

    def left_product_columns(self, a: HomologyClass, n: int) -> list[int]:
        """Class coordinates of ``a * b`` for each basis class ``b`` of ``H^n``."""
        self.require(a.degree + n)
        return [self.class_coords(self.dga.multiply(a.representative, rep)) for rep in self.basis(n)]

    def format_class(self, s: HomologyClass) -> str:
        return self.dga.format(ChainElement(s.degree, self.quotient_map(s.degree).lift(s.coords)))


def build_homology(p: DgaPresentation) -> HomologyStructure:
    return HomologyStructure(p)


def class_of(h: HomologyStructure, u: ChainElement) -> HomologyClass:
    return h.class_of(u)


def is_homologous(h: HomologyStructure, u: ChainElement, v: ChainElement) -> bool:
    return h.is_homologous(u, v)


def product_class(h: HomologyStructure, s: HomologyClass, t: HomologyClass) -> HomologyClass:
    return h.product_class(s, t)


def parse_class(h: HomologyStructure, text: str) -> HomologyClass:
    return h.class_of(h.dga.parse(text))

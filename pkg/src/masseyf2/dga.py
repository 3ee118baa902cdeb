"""Truncated free graded-commutative DGAs over F2, modulo monomial relations.

A monomial is a tuple of exponents aligned with the generator order.  The
differential is given on generators and extended by the Leibniz rule;
cohomological grading, ``d`` raises degree by one.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import ContractViolation, PresentationError, TruncationOverflow
from .gf2 import bits

Monomial = tuple[int, ...]
Polynomial = tuple[Monomial, ...]

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    degree: int


@dataclass(frozen=True)
class DgaPresentation:
    """Generators, differentials on generators, monomial relations, truncation.

    ``differentials[i]`` is the polynomial ``d(generators[i])`` (empty means 0).
    """

    name: str
    truncation: int
    generators: tuple[GeneratorDecl, ...]
    differentials: tuple[Polynomial, ...]
    relations: tuple[Monomial, ...] = ()

    def __post_init__(self) -> None:
        if len(self.differentials) != len(self.generators):
            raise ContractViolation("one differential per generator required")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ContractViolation("duplicate generator names")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ContractViolation(f"unknown generator {name!r}") from None

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators))

    def generator(self, name: str) -> Monomial:
        i = self.index(name)
        return tuple(1 if j == i else 0 for j in range(len(self.generators)))

    def differential_of(self, name: str) -> Polynomial:
        return self.differentials[self.index(name)]

    def with_differential(self, name: str, poly: Polynomial, new_name: Optional[str] = None) -> "DgaPresentation":
        diffs = list(self.differentials)
        diffs[self.index(name)] = normalize(poly)
        return DgaPresentation(new_name or self.name, self.truncation, self.generators, tuple(diffs), self.relations)


@dataclass(frozen=True)
class ChainElement:
    """An element of a single degree, as a bitset over that degree's monomial basis."""

    degree: int
    coords: int = 0

    def __add__(self, other: "ChainElement") -> "ChainElement":
        if other.degree != self.degree:
            raise ContractViolation(f"cannot add degree {self.degree} and degree {other.degree}")
        return ChainElement(self.degree, self.coords ^ other.coords)

    __sub__ = __add__

    def is_zero(self) -> bool:
        return self.coords == 0


def normalize(terms: Iterable[Monomial]) -> Polynomial:
    """Cancel repeated monomials in pairs and sort canonically."""
    acc: set[Monomial] = set()
    for t in terms:
        acc ^= {t}
    return tuple(sorted(acc, key=_order_key))


def _order_key(m: Monomial) -> tuple[int, ...]:
    return tuple(-e for e in m)


def _divides(r: Monomial, m: Monomial) -> bool:
    return all(a <= b for a, b in zip(r, m))


@dataclass
class ValidationReport:
    violations: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness: str, detail: str) -> None:
        self.violations.append((kind, witness, detail))


class Dga:
    """Computational view of a presentation: bases, products and ``d`` as bitsets.

    Per-degree caches are filled lazily under a lock.
    """

    def __init__(self, p: DgaPresentation) -> None:
        if p.truncation < 0:
            raise ContractViolation("truncation must be non-negative")
        for g in p.generators:
            if g.degree < 1:
                raise ContractViolation(f"generator {g.name} must have degree >= 1")
        self.p = p
        self._ngen = len(p.generators)
        self._lock = threading.RLock()
        self._basis: dict[int, tuple[Monomial, ...]] = {}
        self._index: dict[int, dict[Monomial, int]] = {}
        self._dcols: dict[int, tuple[int, ...]] = {}

    # -- bases ---------------------------------------------------------------

    def in_ideal(self, m: Monomial) -> bool:
        return any(_divides(r, m) for r in self.p.relations)

    def basis(self, n: int) -> tuple[Monomial, ...]:
        """Monomial basis of degree ``n``; empty outside ``0..truncation``."""
        if n < 0 or n > self.p.truncation:
            return ()
        got = self._basis.get(n)
        if got is None:
            with self._lock:
                got = self._basis.get(n)
                if got is None:
                    got = self._enumerate(n)
                    self._index[n] = {m: i for i, m in enumerate(got)}
                    self._basis[n] = got
        return got

    def _enumerate(self, n: int) -> tuple[Monomial, ...]:
        degs = self.p.degrees
        out: list[Monomial] = []
        exps = [0] * self._ngen

        def rec(i: int, remaining: int) -> None:
            if i == self._ngen:
                if remaining == 0:
                    m = tuple(exps)
                    if not self.in_ideal(m):
                        out.append(m)
                return
            for e in range(remaining // degs[i], -1, -1):
                exps[i] = e
                rec(i + 1, remaining - e * degs[i])
            exps[i] = 0

        rec(0, n)
        return tuple(sorted(out, key=_order_key))

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def index_of(self, m: Monomial) -> Optional[int]:
        """Basis index of ``m``, or None when ``m`` lies in the relation ideal."""
        n = self.p.monomial_degree(m)
        self._check_degree(n)
        self.basis(n)
        return self._index[n].get(m)

    def _check_degree(self, n: int) -> None:
        if n > self.p.truncation:
            raise TruncationOverflow(f"degree {n} exceeds truncation {self.p.truncation}")

    # -- elements ------------------------------------------------------------

    def element(self, terms: Iterable[Monomial], degree: Optional[int] = None) -> ChainElement:
        terms = list(terms)
        if degree is None:
            if not terms:
                raise ContractViolation("degree needed for the zero element")
            degree = self.p.monomial_degree(terms[0])
        v = 0
        for t in terms:
            if self.p.monomial_degree(t) != degree:
                raise ContractViolation("inhomogeneous polynomial")
            i = self.index_of(t)
            if i is not None:
                v ^= 1 << i
        return ChainElement(degree, v)

    def gen(self, name: str) -> ChainElement:
        return self.element([self.p.generator(name)])

    def one(self) -> ChainElement:
        return ChainElement(0, 1)

    def zero(self, n: int) -> ChainElement:
        return ChainElement(n, 0)

    def terms(self, u: ChainElement) -> list[Monomial]:
        b = self.basis(u.degree)
        return [b[i] for i in bits(u.coords)]

    def check(self, u: ChainElement) -> None:
        if u.coords >> self.dim(u.degree) or u.coords < 0:
            raise ContractViolation(f"coordinates do not fit degree {u.degree}")

    # -- product -------------------------------------------------------------

    def multiply(self, u: ChainElement, v: ChainElement) -> ChainElement:
        n = u.degree + v.degree
        self._check_degree(n)
        if not u.coords or not v.coords:
            return ChainElement(n, 0)
        bu, bv = self.basis(u.degree), self.basis(v.degree)
        self.basis(n)
        idx = self._index[n]
        out = 0
        for i in bits(u.coords):
            mi = bu[i]
            for j in bits(v.coords):
                k = idx.get(tuple(a + b for a, b in zip(mi, bv[j])))
                if k is not None:
                    out ^= 1 << k
        return ChainElement(n, out)

    def mult_columns(self, u: ChainElement, n: int) -> list[int]:
        """Images of the degree-``n`` basis under ``x -> u*x``."""
        self._check_degree(u.degree + n)
        return [self.multiply(u, ChainElement(n, 1 << j)).coords for j in range(self.dim(n))]

    # -- differential --------------------------------------------------------

    def free_differential(self, m: Monomial) -> Polynomial:
        """``d`` of a monomial in the free algebra (relations not applied)."""
        out: set[Monomial] = set()
        for i, e in enumerate(m):
            if e % 2 == 0:
                continue
            for t in self.p.differentials[i]:
                term = tuple(a + b - (1 if j == i else 0) for j, (a, b) in enumerate(zip(m, t)))
                out ^= {term}
        return tuple(sorted(out, key=_order_key))

    def d_columns(self, n: int) -> tuple[int, ...]:
        """Images of the degree-``n`` basis under ``d``, as degree n+1 bitsets."""
        if n < 0:
            return ()
        got = self._dcols.get(n)
        if got is None:
            self._check_degree(n + 1)
            with self._lock:
                got = self._dcols.get(n)
                if got is None:
                    self.basis(n + 1)
                    idx = self._index[n + 1]
                    cols = []
                    for m in self.basis(n):
                        v = 0
                        for t in self.free_differential(m):
                            k = idx.get(t)
                            if k is not None:
                                v ^= 1 << k
                        cols.append(v)
                    got = tuple(cols)
                    self._dcols[n] = got
        return got

    def differential(self, u: ChainElement) -> ChainElement:
        self._check_degree(u.degree + 1)
        cols = self.d_columns(u.degree)
        out = 0
        for i in bits(u.coords):
            out ^= cols[i]
        return ChainElement(u.degree + 1, out)

    # -- text ----------------------------------------------------------------

    def format_monomial(self, m: Monomial) -> str:
        return format_monomial(self.p, m)

    def format(self, u: ChainElement) -> str:
        if not u.coords:
            return "0"
        return " + ".join(self.format_monomial(m) for m in self.terms(u))

    def parse(self, text: str) -> ChainElement:
        """Parse a homogeneous polynomial; ``0@n`` denotes zero in degree n."""
        s = text.strip()
        m = re.fullmatch(r"0\s*@\s*(-?\d+)", s)
        if m:
            return ChainElement(int(m.group(1)), 0)
        terms = parse_polynomial(s, self.p.names)
        if not terms:
            raise PresentationError("the zero polynomial needs a degree, write 0@<degree>", code="ambiguous_zero")
        degs = {self.p.monomial_degree(t) for t in terms}
        if len(degs) != 1:
            raise PresentationError(f"inhomogeneous polynomial {text!r}", code="inhomogeneous")
        return self.element(terms)


@lru_cache(maxsize=64)
def algebra(p: DgaPresentation) -> Dga:
    return Dga(p)


# -- module-level operations ----------------------------------------------------


def monomial_basis(p: DgaPresentation, degree: int) -> list[Monomial]:
    if degree < 0 or degree > p.truncation:
        raise ContractViolation(f"degree {degree} outside 0..{p.truncation}")
    return list(algebra(p).basis(degree))


def multiply(p: DgaPresentation, u: ChainElement, v: ChainElement) -> ChainElement:
    return algebra(p).multiply(u, v)


def differential(p: DgaPresentation, u: ChainElement) -> ChainElement:
    return algebra(p).differential(u)


@lru_cache(maxsize=64)
def validate(p: DgaPresentation) -> ValidationReport:
    """Check degree compatibility, ``d^2 = 0`` and closure of the relation ideal."""
    report = ValidationReport()
    try:
        A = algebra(p)
    except ContractViolation as exc:
        report.add("structure", p.name, str(exc))
        return report
    for g, poly in zip(p.generators, p.differentials):
        for t in poly:
            if len(t) != len(p.generators) or any(e < 0 for e in t):
                report.add("structure", g.name, "malformed monomial in differential")
            elif p.monomial_degree(t) != g.degree + 1:
                report.add("degree", g.name, f"term {format_monomial(p, t)} has degree "
                           f"{p.monomial_degree(t)}, expected {g.degree + 1}")
    for r in p.relations:
        if p.monomial_degree(r) > p.truncation:
            report.add("relation", format_monomial(p, r), "relation degree exceeds truncation")
    if not report.ok:
        return report

    # d(r) and d(g r) must stay in the ideal; since d(m r) = d(m) r + m d(r),
    # this makes the ideal closed under d.
    for r in p.relations:
        multiples = [r] + [tuple(a + b for a, b in zip(r, p.generator(g.name))) for g in p.generators]
        for m in multiples:
            if p.monomial_degree(m) + 1 > p.truncation:
                continue
            bad = [t for t in A.free_differential(m) if not A.in_ideal(t)]
            if bad:
                report.add("relation", format_monomial(p, m),
                           "d leaves the relation ideal: " + " + ".join(format_monomial(p, t) for t in bad))

    # Only the lowest failing degree is reported; higher failures are its multiples.
    for n in range(0, p.truncation - 1):
        if not report.ok:
            break
        dn, dn1 = A.d_columns(n), A.d_columns(n + 1)
        for i, col in enumerate(dn):
            dd = 0
            for j in bits(col):
                dd ^= dn1[j]
            if dd:
                m = A.basis(n)[i]
                report.add("d_squared", format_monomial(p, m),
                           "d(d(m)) = " + A.format(ChainElement(n + 2, dd)))
    return report


# -- text format ------------------------------------------------------------------


def format_monomial(p: DgaPresentation, m: Monomial) -> str:
    parts = []
    for name, e in zip(p.names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_polynomial(p: DgaPresentation, poly: Sequence[Monomial]) -> str:
    if not poly:
        return "0"
    return " + ".join(format_monomial(p, m) for m in poly)


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<op>[+*^]))")


def _tokens(text: str, col0: int, line: int) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            c = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PresentationError(f"unexpected character {text[c]!r}", line, col0 + c + 1)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col0 + start + 1))
        pos = m.end()
    return out


def parse_polynomial(text: str, names: Sequence[str], line: int = 0, col0: int = 0) -> Polynomial:
    """Parse ``0 | monomial (+ monomial)*`` with ``monomial := factor (* factor)*``."""
    toks = _tokens(text, col0, line)
    if not toks:
        raise PresentationError("empty polynomial", line, col0 + 1)
    if len(toks) == 1 and toks[0][0] == "int" and toks[0][1] == "0":
        return ()
    lookup = {n: i for i, n in enumerate(names)}
    terms: list[Monomial] = []
    pos = 0

    def expect(kind: str) -> tuple[str, str, int]:
        nonlocal pos
        if pos >= len(toks):
            end = toks[-1][2] + len(toks[-1][1])
            raise PresentationError(f"expected {kind} at end of input", line, end)
        tok = toks[pos]
        if tok[0] != kind:
            raise PresentationError(f"expected {kind}, found {tok[1]!r}", line, tok[2])
        pos += 1
        return tok

    while True:
        exps = [0] * len(names)
        while True:
            _, name, col = expect("name")
            if name not in lookup:
                raise PresentationError(f"unknown name {name!r}", line, col, code="unknown_name")
            k = 1
            if pos < len(toks) and toks[pos][1] == "^":
                pos += 1
                _, num, ncol = expect("int")
                k = int(num)
                if k < 1:
                    raise PresentationError("exponent must be positive", line, ncol)
            exps[lookup[name]] += k
            if pos < len(toks) and toks[pos][1] == "*":
                pos += 1
                continue
            break
        terms.append(tuple(exps))
        if pos == len(toks):
            break
        op = toks[pos]
        if op[1] != "+":
            raise PresentationError(f"expected '+', found {op[1]!r}", line, op[2])
        pos += 1
    return normalize(terms)


def parse_presentation(text: str) -> DgaPresentation:
    name: Optional[str] = None
    truncation: Optional[int] = None
    gens: list[GeneratorDecl] = []
    rels: list[tuple[str, int, int]] = []
    diffs: list[tuple[str, str, int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        keyword, _, rest = stripped.partition(" ")
        rest_col = indent + len(keyword) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if name is None and keyword != "dga":
            raise PresentationError("first line must be 'dga <name>'", lineno, indent + 1)
        if keyword == "dga":
            if name is not None:
                raise PresentationError("repeated 'dga' line", lineno, indent + 1)
            if not NAME_RE.fullmatch(rest):
                raise PresentationError("invalid algebra name", lineno, rest_col + 1)
            name = rest
        elif keyword == "truncate":
            if truncation is not None:
                raise PresentationError("repeated 'truncate' line", lineno, indent + 1)
            if not re.fullmatch(r"\d+", rest) or int(rest) < 1:
                raise PresentationError("truncation must be a positive integer", lineno, rest_col + 1)
            truncation = int(rest)
        elif keyword == "gen":
            parts = rest.split()
            if len(parts) != 2 or not NAME_RE.fullmatch(parts[0]) or not re.fullmatch(r"\d+", parts[1]):
                raise PresentationError("expected 'gen <name> <degree>'", lineno, rest_col + 1)
            if any(g.name == parts[0] for g in gens):
                raise PresentationError(f"duplicate generator {parts[0]!r}", lineno, rest_col + 1,
                                        code="duplicate_generator")
            if int(parts[1]) < 1:
                raise PresentationError("generator degree must be at least 1", lineno, rest_col + 1)
            gens.append(GeneratorDecl(parts[0], int(parts[1])))
        elif keyword == "rel":
            rels.append((rest, lineno, rest_col))
        elif keyword == "d":
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)", rest)
            if not m:
                raise PresentationError("expected 'd <name> = <polynomial>'", lineno, rest_col + 1)
            diffs.append((m.group(1), m.group(2), lineno, rest_col, rest_col + m.start(2)))
        else:
            raise PresentationError(f"unknown keyword {keyword!r}", lineno, indent + 1)
    if name is None:
        raise PresentationError("missing 'dga <name>' line", 1, 1)
    if truncation is None:
        raise PresentationError("missing 'truncate <N>' line", 1, 1, code="missing_truncation")

    names = [g.name for g in gens]
    degrees = [g.degree for g in gens]
    deg_of = lambda m: sum(e * d for e, d in zip(m, degrees))  # noqa: E731
    relations: list[Monomial] = []
    for text_r, lineno, col in rels:
        poly = parse_polynomial(text_r, names, lineno, col)
        if len(poly) != 1:
            raise PresentationError("a relation must be a single monomial", lineno, col + 1)
        if deg_of(poly[0]) > truncation:
            raise PresentationError("relation degree exceeds truncation", lineno, col + 1)
        relations.append(poly[0])
    table: list[Polynomial] = [()] * len(gens)
    seen: set[str] = set()
    for gname, body, lineno, col, body_col in diffs:
        if gname not in names:
            raise PresentationError(f"unknown name {gname!r}", lineno, col + 1, code="unknown_name")
        if gname in seen:
            raise PresentationError(f"second differential for {gname!r}", lineno, col + 1)
        seen.add(gname)
        poly = parse_polynomial(body, names, lineno, body_col)
        i = names.index(gname)
        for t in poly:
            if deg_of(t) != degrees[i] + 1:
                raise PresentationError(
                    f"d({gname}) has a term of degree {deg_of(t)}, expected {degrees[i] + 1}",
                    lineno, body_col + 1, code="degree_mismatch")
        table[i] = poly
    return DgaPresentation(name, truncation, tuple(gens), tuple(table), tuple(relations))


def format_presentation(p: DgaPresentation) -> str:
    lines = [f"dga {p.name}", f"truncate {p.truncation}"]
    lines += [f"gen {g.name} {g.degree}" for g in p.generators]
    lines += [f"rel {format_monomial(p, r)}" for r in p.relations]
    for g, poly in zip(p.generators, p.differentials):
        if poly:
            lines.append(f"d {g.name} = {format_polynomial(p, poly)}")
    return "\n".join(lines) + "\n"

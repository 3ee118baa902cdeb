"""Threefold brackets, divisibility subgroups, coindeterminacy, fourfold brackets.

Every set of chain-level choices here is the solution set of a linear
system over F2, so each computation is one elimination.  Cycles ``a_i`` are
taken from the representatives carried by the input classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .dga import ChainElement
from .errors import BracketUndefined, ContractViolation
from .gf2 import (Echelon, Gf2AffineSubspace, Gf2Matrix, Gf2Subspace, bits, lowbit, solve,
                  subspace_sum)
from .homology import HomologyClass, HomologyStructure

DEFAULT_ENUMERATION_LIMIT = 16


class _System:
    """Linear system assembled from blocks of variables and equations."""

    def __init__(self) -> None:
        self.var_dims: list[int] = []
        self.eq_dims: list[int] = []
        self.rhs: list[int] = []
        self.blocks: list[tuple[int, int, Sequence[int]]] = []

    def var(self, dim: int) -> int:
        self.var_dims.append(dim)
        return len(self.var_dims) - 1

    def eq(self, dim: int, rhs: int = 0) -> int:
        self.eq_dims.append(dim)
        self.rhs.append(rhs)
        return len(self.eq_dims) - 1

    def add(self, eq: int, var: int, columns: Sequence[int]) -> None:
        if len(columns) != self.var_dims[var]:
            raise ContractViolation("block width does not match variable dimension")
        self.blocks.append((eq, var, columns))

    def _offsets(self, dims: list[int]) -> list[int]:
        out, acc = [], 0
        for d in dims:
            out.append(acc)
            acc += d
        return out

    def solve(self) -> Optional[tuple[list[int], list[list[int]]]]:
        """Particular solution and kernel basis, each split into variable blocks."""
        voff, eoff = self._offsets(self.var_dims), self._offsets(self.eq_dims)
        ncols, nrows = sum(self.var_dims), sum(self.eq_dims)
        cols = [0] * ncols
        for eq, var, block in self.blocks:
            for j, c in enumerate(block):
                cols[voff[var] + j] ^= c << eoff[eq]
        target = 0
        for e, r in enumerate(self.rhs):
            target |= r << eoff[e]
        got = solve(Gf2Matrix(nrows, ncols, tuple(cols)), target)
        if got is None:
            return None
        particular, kernel = got
        return self.split(particular), [self.split(k) for k in kernel.basis]

    def split(self, v: int) -> list[int]:
        out = []
        for off, d in zip(self._offsets(self.var_dims), self.var_dims):
            out.append((v >> off) & ((1 << d) - 1))
        return out


def _reps(*classes: HomologyClass) -> list[ChainElement]:
    return [s.representative for s in classes]


def _span_classes(h: HomologyStructure, n: int, cycles: Sequence[int]) -> Gf2Subspace:
    return Gf2Subspace.span(h.dim(n), (h.class_coords(ChainElement(n, c)) for c in cycles))


def _product_span(h: HomologyStructure, a: HomologyClass, n: int) -> Gf2Subspace:
    """``a * H^n`` inside ``H^(|a| + n)``."""
    if n < 0:
        return Gf2Subspace.zero(h.dim(a.degree + n))
    return Gf2Subspace.span(h.dim(a.degree + n), h.left_product_columns(a, n))


def _lift(h: HomologyStructure, u: ChainElement, what: str) -> ChainElement:
    """Canonical ``x`` with ``d(x) = u``; refuses when ``u`` is not a boundary."""
    A = h.dga
    n = u.degree - 1
    got = solve(Gf2Matrix(A.dim(u.degree), A.dim(n), A.d_columns(n)), u.coords)
    if got is None:
        raise BracketUndefined(f"bracket undefined at threefold stage: {what} = {A.format(u)} is not a boundary",
                               code="bracket_undefined", product=what)
    return ChainElement(n, got[0])


# -- threefold brackets ------------------------------------------------------------


@dataclass(frozen=True)
class TripleBracket:
    inputs: tuple[HomologyClass, HomologyClass, HomologyClass]
    value: Gf2AffineSubspace
    degree: int
    witness: tuple[ChainElement, ChainElement]

    @property
    def contains_zero(self) -> bool:
        return self.value.contains_zero

    @property
    def strictly_zero(self) -> bool:
        return self.value.contains_zero and self.value.direction.dimension == 0


def triple_bracket(h: HomologyStructure, s0: HomologyClass, s1: HomologyClass, s2: HomologyClass,
                   lifts: Optional[tuple[ChainElement, ChainElement]] = None) -> TripleBracket:
    """``<s0, s1, s2>`` as a coset of ``s0*H + H*s2``.

    ``lifts`` may supply ``(a01, a12)``; otherwise canonical solutions are used.
    """
    a0, a1, a2 = _reps(s0, s1, s2)
    A = h.dga
    n = s0.degree + s1.degree + s2.degree - 1
    h.require(n)
    if lifts is None:
        a01 = _lift(h, A.multiply(a0, a1), "a0*a1")
        a12 = _lift(h, A.multiply(a1, a2), "a1*a2")
    else:
        a01, a12 = lifts
        if A.differential(a01) != A.multiply(a0, a1) or A.differential(a12) != A.multiply(a1, a2):
            raise ContractViolation("supplied lifts do not bound a0*a1 and a1*a2")
    rep = h.class_coords(A.multiply(a0, a12) + A.multiply(a01, a2))
    # commutative, so H * s2 = s2 * H
    direction = subspace_sum(_product_span(h, s0, s1.degree + s2.degree - 1),
                             _product_span(h, s2, s0.degree + s1.degree - 1))
    return TripleBracket((s0, s1, s2), Gf2AffineSubspace(rep, direction), n, (a01, a12))


# -- divisibility subgroups ----------------------------------------------------------


def _preimage(h: HomologyStructure, n: int, fixed: HomologyClass, m: int, other: HomologyClass) -> Gf2Subspace:
    """``{x in H^n : fixed*x in H^m * other}``."""
    target = fixed.degree + n
    h.require(target)
    sys = _System()
    x = sys.var(h.dim(n))
    z = sys.var(h.dim(m) if m >= 0 else 0)
    e = sys.eq(h.dim(target))
    sys.add(e, x, h.left_product_columns(fixed, n))
    if m >= 0:
        sys.add(e, z, h.left_product_columns(other, m))
    _, kernel = sys.solve()
    return Gf2Subspace.span(h.dim(n), (k[x] for k in kernel))


def left_div_subgroup(h: HomologyStructure, a: HomologyClass, b: HomologyClass, degree: int) -> Gf2Subspace:
    """``(a \\\\ b)`` in ``H^degree``: classes x with ``a x = z b`` for some z."""
    return _preimage(h, degree, a, a.degree + degree - b.degree, b)


def right_div_subgroup(h: HomologyStructure, a: HomologyClass, b: HomologyClass, degree: int) -> Gf2Subspace:
    """``(a // b)`` in ``H^degree``: classes x with ``a z = x b`` for some z."""
    return _preimage(h, degree, b, degree + b.degree - a.degree, a)


# -- coindeterminacy -----------------------------------------------------------------


@dataclass(frozen=True)
class _LiftSet:
    """Affine set of lifts ``x`` of ``a1*a2`` usable on one side, with partner lifts."""

    x0: ChainElement
    partner0: ChainElement
    directions: tuple[int, ...]


def _side_system(h: HomologyStructure, a: ChainElement, b: ChainElement, lower: ChainElement,
                 upper: ChainElement) -> Optional[_LiftSet]:
    """Solve ``d x = lower``, ``d p = upper``, ``a x + b p = d u`` jointly.

    Left side: a = a0, b = a2, p = z.  Right side: a = a3, b = a1, p = w.
    """
    A = h.dga
    nx, np_ = lower.degree - 1, upper.degree - 1
    prod_deg = a.degree + nx
    sys = _System()
    x = sys.var(A.dim(nx))
    z = sys.var(A.dim(np_))
    u = sys.var(A.dim(prod_deg - 1))
    ex = sys.eq(A.dim(nx + 1), lower.coords)
    ez = sys.eq(A.dim(np_ + 1), upper.coords)
    eb = sys.eq(A.dim(prod_deg))
    sys.add(ex, x, A.d_columns(nx))
    sys.add(ez, z, A.d_columns(np_))
    sys.add(eb, x, A.mult_columns(a, nx))
    sys.add(eb, z, A.mult_columns(b, np_))
    sys.add(eb, u, A.d_columns(prod_deg - 1))
    got = sys.solve()
    if got is None:
        return None
    part, kernel = got
    dirs = Gf2Subspace.span(A.dim(nx), (k[x] for k in kernel)).basis
    return _LiftSet(ChainElement(nx, part[x]), ChainElement(np_, part[z]), dirs)


@dataclass(frozen=True)
class CoindetResult:
    inputs: tuple[HomologyClass, HomologyClass, HomologyClass, HomologyClass]
    coset: Gf2AffineSubspace
    degree: int
    left_div: Gf2Subspace
    right_div: Gf2Subspace
    witness_x: Optional[ChainElement]
    witness_y: Optional[ChainElement]
    witness_z: Optional[ChainElement]
    witness_w: Optional[ChainElement]
    _left: _LiftSet = field(repr=False, compare=False)
    _right: _LiftSet = field(repr=False, compare=False)

    @property
    def contains_zero(self) -> bool:
        return self.coset.contains_zero


def _check_triples(h, s0, s1, s2, s3) -> tuple[TripleBracket, TripleBracket]:
    left = triple_bracket(h, s0, s1, s2)
    right = triple_bracket(h, s1, s2, s3)
    for name, t in (("<a0, a1, a2>", left), ("<a1, a2, a3>", right)):
        if not t.contains_zero:
            raise BracketUndefined(f"triple bracket {name} does not contain zero",
                                   code="triple_does_not_contain_zero", bracket=name)
    return left, right


def coindeterminacy(h: HomologyStructure, s0: HomologyClass, s1: HomologyClass, s2: HomologyClass,
                    s3: HomologyClass) -> CoindetResult:
    """Classes of ``x + y`` over admissible lifts ``x`` (left) and ``y`` (right) of ``a1 a2``."""
    _check_triples(h, s0, s1, s2, s3)
    a0, a1, a2, a3 = _reps(s0, s1, s2, s3)
    A = h.dga
    a12 = A.multiply(a1, a2)
    left = _side_system(h, a0, a2, a12, A.multiply(a0, a1))
    right = _side_system(h, a3, a1, a12, A.multiply(a2, a3))
    if left is None or right is None:
        # excluded by _check_triples
        raise BracketUndefined("no admissible lift of a1*a2", code="triple_does_not_contain_zero")
    n = a12.degree - 1
    rep = h.class_coords(left.x0 + right.x0)
    direction = _span_classes(h, n, left.directions + right.directions)
    coset = Gf2AffineSubspace(rep, direction)
    ldiv = left_div_subgroup(h, s0, s2, n)
    rdiv = right_div_subgroup(h, s1, s3, n)
    wx = wy = wz = ww = None
    if coset.contains_zero:
        joint = _joint_witness(h, a0, a1, a2, a3)
        if joint is None:
            raise AssertionError("zero lies in the coindeterminacy but no common lift exists")
        wx, wz, ww = joint
        wy = wx
    else:
        wx, wy, wz, ww = left.x0, right.x0, left.partner0, right.partner0
    return CoindetResult((s0, s1, s2, s3), coset, n, ldiv, rdiv, wx, wy, wz, ww, left, right)


def _joint_witness(h, a0, a1, a2, a3) -> Optional[tuple[ChainElement, ChainElement, ChainElement]]:
    """Common lift x of a1 a2 with partners z, w making both triple expressions bound."""
    A = h.dga
    p01, p12, p23 = A.multiply(a0, a1), A.multiply(a1, a2), A.multiply(a2, a3)
    n01, n12, n23 = p01.degree - 1, p12.degree - 1, p23.degree - 1
    nl, nr = a0.degree + n12, a3.degree + n12
    sys = _System()
    x, z, w = sys.var(A.dim(n12)), sys.var(A.dim(n01)), sys.var(A.dim(n23))
    u, v = sys.var(A.dim(nl - 1)), sys.var(A.dim(nr - 1))
    for var, n, target in ((x, n12, p12), (z, n01, p01), (w, n23, p23)):
        sys.add(sys.eq(A.dim(n + 1), target.coords), var, A.d_columns(n))
    el, er = sys.eq(A.dim(nl)), sys.eq(A.dim(nr))
    sys.add(el, x, A.mult_columns(a0, n12))
    sys.add(el, z, A.mult_columns(a2, n01))
    sys.add(el, u, A.d_columns(nl - 1))
    sys.add(er, w, A.mult_columns(a1, n23))
    sys.add(er, x, A.mult_columns(a3, n12))
    sys.add(er, v, A.d_columns(nr - 1))
    got = sys.solve()
    if got is None:
        return None
    part, _ = got
    return ChainElement(n12, part[x]), ChainElement(n01, part[z]), ChainElement(n23, part[w])


def is_fourfold_defined(h: HomologyStructure, s0, s1, s2, s3) -> tuple[bool, CoindetResult]:
    """Definedness of ``<s0, s1, s2, s3>``: zero lies in the coindeterminacy."""
    result = coindeterminacy(h, s0, s1, s2, s3)
    return result.contains_zero, result


def half_strict_defined(h: HomologyStructure, s0, s1, s2, s3) -> bool:
    """True when one of the two threefold subbrackets is strictly zero."""
    left, right = _check_triples(h, s0, s1, s2, s3)
    verdict = left.strictly_zero or right.strictly_zero
    if verdict and not is_fourfold_defined(h, s0, s1, s2, s3)[0]:
        raise AssertionError("a strictly zero subbracket did not yield a defined fourfold bracket")
    return verdict


# -- fourfold brackets ---------------------------------------------------------------


@dataclass(frozen=True)
class FourfoldBracket:
    """Value set of ``<s0, s1, s2, s3>`` as a union of cosets of ``direction``.

    ``coset_representatives`` are canonical modulo ``direction``.  When
    ``enumeration_truncated`` is set only the coset of ``representative`` is
    known to lie in the bracket.
    """

    inputs: tuple[HomologyClass, HomologyClass, HomologyClass, HomologyClass]
    degree: int
    defined: bool
    representative: int
    direction: Gf2Subspace
    coset_representatives: frozenset[int]
    enumeration_truncated: bool
    free_parameters: int
    coindeterminacy: CoindetResult
    witness: tuple[ChainElement, ...]

    def contains(self, coords: int) -> bool:
        r = self.direction.reduce(coords)
        return r in self.coset_representatives

    def values(self) -> frozenset[int]:
        return frozenset(r ^ d for r in self.coset_representatives for d in self.direction.elements())

    def __len__(self) -> int:
        return len(self.coset_representatives) << self.direction.dimension


def fourfold_bracket(h: HomologyStructure, s0, s1, s2, s3,
                     enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT) -> FourfoldBracket:
    """Enumerate ``class(a0 a13 + a01 a23 + a02 a3)`` over all admissible choices.

    The admissible tuples ``(a01, a12, a23, a02, a13)`` form an affine space
    ``t0 + W``.  Directions of ``W`` with zero ``a01`` and ``a23`` parts move
    the value linearly; only a complement of them has to be enumerated.
    """
    defined, co = is_fourfold_defined(h, s0, s1, s2, s3)
    if not defined:
        raise BracketUndefined(
            "fourfold bracket is not defined: the coindeterminacy "
            f"{h.format_class(h.from_coords(co.degree, co.coset.representative))} + "
            f"<{', '.join(h.format_class(h.from_coords(co.degree, b)) for b in co.coset.direction.basis)}> "
            "does not contain zero", code="fourfold_undefined")
    a0, a1, a2, a3 = _reps(s0, s1, s2, s3)
    A = h.dga
    n = sum(s.degree for s in (s0, s1, s2, s3)) - 2
    h.require(n)
    p01, p12, p23 = A.multiply(a0, a1), A.multiply(a1, a2), A.multiply(a2, a3)
    n01, n12, n23 = p01.degree - 1, p12.degree - 1, p23.degree - 1
    n02, n13 = a0.degree + n12 - 1, a1.degree + n23 - 1

    sys = _System()
    v01, v12, v23 = sys.var(A.dim(n01)), sys.var(A.dim(n12)), sys.var(A.dim(n23))
    v02, v13 = sys.var(A.dim(n02)), sys.var(A.dim(n13))
    for var, deg, target in ((v01, n01, p01), (v12, n12, p12), (v23, n23, p23)):
        sys.add(sys.eq(A.dim(deg + 1), target.coords), var, A.d_columns(deg))
    e02, e13 = sys.eq(A.dim(n02 + 1)), sys.eq(A.dim(n13 + 1))
    sys.add(e02, v02, A.d_columns(n02))
    sys.add(e02, v12, A.mult_columns(a0, n12))
    sys.add(e02, v01, A.mult_columns(a2, n01))
    sys.add(e13, v13, A.d_columns(n13))
    sys.add(e13, v23, A.mult_columns(a1, n23))
    sys.add(e13, v12, A.mult_columns(a3, n12))
    got = sys.solve()
    if got is None:
        raise AssertionError("coindeterminacy contains zero but no defining system exists")
    t0, kernel = got

    qmap = h.quotient_map(n)
    mul = A.multiply

    def el(deg, v):
        return ChainElement(deg, v)

    def linear_part(w: list[int]) -> ChainElement:
        return mul(a0, el(n13, w[v13])) + mul(el(n02, w[v02]), a3)

    c01, c23 = el(n01, t0[v01]), el(n23, t0[v23])
    base = linear_part(t0) + mul(c01, c23)
    rep = h.class_coords(base)

    # split W into a complement W1 of ker(pi) and ker(pi), pi = (a01, a23) parts
    ech = Echelon()
    w1: list[list[int]] = []
    w0: list[list[int]] = []
    shift = A.dim(n01)
    for k in kernel:
        r, tag = ech.insert(k[v01] | (k[v23] << shift), 1 << len(w1))
        if r:
            w1.append(k)
        else:
            combo = list(k)
            for i in bits(tag ^ (1 << len(w1))):
                combo = [p ^ q for p, q in zip(combo, w1[i])]
            w0.append(combo)
    direction = Gf2Subspace.span(h.dim(n), (h.class_coords(linear_part(w)) for w in w0))

    k1 = len(w1)
    truncated = k1 > enumeration_limit
    if truncated:
        reps = frozenset({direction.reduce(rep)})
    else:
        ext = qmap.extended
        lin = []
        for w in w1:
            e01, e23 = el(n01, w[v01]), el(n23, w[v23])
            lin.append(ext((linear_part(w) + mul(c01, e23) + mul(e01, c23) + mul(e01, e23)).coords))
        cross = [[0] * k1 for _ in range(k1)]
        for i in range(k1):
            ei = el(n01, w1[i][v01])
            for j in range(k1):
                if i != j:
                    cross[i][j] = ext(mul(ei, el(n23, w1[j][v23])).coords)
        pair = [[cross[i][j] ^ cross[j][i] for j in range(k1)] for i in range(k1)]
        # Gray-code walk; acc[i] = sum of pair[i][j] over currently set j
        acc = [0] * k1
        value = rep
        seen = {direction.reduce(value)}
        for step in range(1, 1 << k1):
            i = lowbit(step)
            value ^= lin[i] ^ acc[i]
            row = pair[i]
            for j in range(k1):
                acc[j] ^= row[j]
            seen.add(direction.reduce(value))
        reps = frozenset(seen)
    witness = tuple(el(d, t0[v]) for d, v in ((n01, v01), (n12, v12), (n23, v23), (n02, v02), (n13, v13)))
    return FourfoldBracket((s0, s1, s2, s3), n, True, direction.reduce(rep), direction, reps,
                           truncated, k1, co, witness)


# -- well-definedness ----------------------------------------------------------------


@dataclass
class WellDefinednessReport:
    trials: int
    items: dict[str, bool]
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(self.items.values())


def _random_in(rng: random.Random, base: int, directions: Sequence[int]) -> int:
    v = base
    for d in directions:
        if rng.getrandbits(1):
            v ^= d
    return v


def _random_boundary(rng: random.Random, h: HomologyStructure, n: int) -> int:
    return _random_in(rng, 0, h.boundaries(n).basis)


def _admissible(h: HomologyStructure, x: ChainElement, a: ChainElement, b: ChainElement,
                upper: ChainElement) -> bool:
    """Whether x lifts its target and some partner p (d p = upper) makes ``a x + p b`` bound."""
    A = h.dga
    np_ = upper.degree - 1
    prod_deg = a.degree + x.degree
    sys = _System()
    z = sys.var(A.dim(np_))
    u = sys.var(A.dim(prod_deg - 1))
    ez = sys.eq(A.dim(np_ + 1), upper.coords)
    eb = sys.eq(A.dim(prod_deg), A.multiply(a, x).coords)
    sys.add(ez, z, A.d_columns(np_))
    sys.add(eb, z, A.mult_columns(b, np_))
    sys.add(eb, u, A.d_columns(prod_deg - 1))
    return sys.solve() is not None


def coindet_well_definedness_check(h: HomologyStructure, s0, s1, s2, s3, trials: int = 20,
                                   seed: int = 0) -> WellDefinednessReport:
    """Randomized check that the coindeterminacy is well defined in homology.

    (1) sums of admissible lifts are cycles; (2) adding a boundary to an
    admissible lift keeps it admissible and keeps the class in the coset;
    (3) replacing each representative by a homologous one gives the same coset.
    """
    rng = random.Random(seed)
    A = h.dga
    base = coindeterminacy(h, s0, s1, s2, s3)
    a0, a1, a2, a3 = _reps(s0, s1, s2, s3)
    a12 = A.multiply(a1, a2)
    n = base.degree
    items = {"sum_is_cycle": True, "boundary_shift": True, "homologous_inputs": True}
    bad: Optional[str] = None
    L, R = base._left, base._right
    for t in range(trials):
        x = ChainElement(n, _random_in(rng, L.x0.coords, L.directions))
        y = ChainElement(n, _random_in(rng, R.x0.coords, R.directions))
        if not h.is_cycle(x + y):
            items["sum_is_cycle"] = False
            bad = bad or f"trial {t}: x + y = {A.format(x + y)} is not a cycle"
        xb = x + ChainElement(n, _random_boundary(rng, h, n))
        ok = (A.differential(xb) == a12
              and _admissible(h, xb, a0, a2, A.multiply(a0, a1))
              and base.coset.contains(h.class_coords(xb + y)))
        if not ok:
            items["boundary_shift"] = False
            bad = bad or f"trial {t}: x + b = {A.format(xb)} is not admissible"
        moved = [h.class_of(s.representative + ChainElement(s.degree, _random_boundary(rng, h, s.degree)))
                 for s in (s0, s1, s2, s3)]
        other = coindeterminacy(h, *moved)
        if other.coset != base.coset:
            items["homologous_inputs"] = False
            bad = bad or ("trial %d: representatives %s give a different coset"
                          % (t, ", ".join(A.format(m.representative) for m in moved)))
    return WellDefinednessReport(trials, items, bad)

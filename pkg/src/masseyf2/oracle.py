"""Brute-force cross-checks by exhaustive enumeration of chain-level choices.

Nothing here uses the linear solvers: solution sets are found by walking
every vector of a chain space and keeping those that satisfy the equation,
and boundary sets are listed explicitly.  Homology classes are read off
through the structure only when a result is reported as a set of classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .dga import ChainElement, DgaPresentation, GeneratorDecl, algebra, normalize
from .errors import BracketUndefined, OracleCapExceeded
from .gf2 import Gf2Matrix, null_space, bits
from .homology import HomologyClass, HomologyStructure, build_homology

CAP_BITS = 22


def _walk(columns: tuple[int, ...] | list[int]) -> Iterable[tuple[int, int]]:
    """Yield ``(v, M v)`` for every ``v`` of the domain, Gray-code order."""
    k = len(columns)
    if k > CAP_BITS:
        raise OracleCapExceeded(f"chain space of dimension {k} exceeds the 2^{CAP_BITS} cap", dim=k)
    v = image = 0
    yield v, image
    for step in range(1, 1 << k):
        i = (step & -step).bit_length() - 1
        v ^= 1 << i
        image ^= columns[i]
        yield v, image


def _check_states(n: int) -> None:
    if n > 1 << CAP_BITS:
        raise OracleCapExceeded(f"{n} combined states exceed the 2^{CAP_BITS} cap", states=n)


class _Chains:
    def __init__(self, h: HomologyStructure) -> None:
        self.h = h
        self.A = h.dga
        self._bset: dict[int, frozenset[int]] = {}

    def preimages(self, target: ChainElement) -> list[int]:
        n = target.degree - 1
        if n < 0:
            return [0] if target.coords == 0 else []
        return [v for v, dv in _walk(self.A.d_columns(n)) if dv == target.coords]

    def boundaries(self, n: int) -> frozenset[int]:
        got = self._bset.get(n)
        if got is None:
            got = frozenset(dv for _, dv in _walk(self.A.d_columns(n - 1))) if n > 0 else frozenset({0})
            self._bset[n] = got
        return got

    def times(self, a: ChainElement, n: int) -> list[int]:
        return self.A.mult_columns(a, n)

    @staticmethod
    def apply(columns: list[int], v: int) -> int:
        out = 0
        for i in bits(v):
            out ^= columns[i]
        return out


def _solutions(C: _Chains, a: ChainElement, b: ChainElement, what: str) -> list[int]:
    sols = C.preimages(C.A.multiply(a, b))
    if not sols:
        raise BracketUndefined(f"{what} is not a boundary", code="bracket_undefined")
    return sols


def brute_force_triple(h: HomologyStructure, s0: HomologyClass, s1: HomologyClass,
                       s2: HomologyClass) -> frozenset[HomologyClass]:
    C = _Chains(h)
    a0, a1, a2 = s0.representative, s1.representative, s2.representative
    sol01 = _solutions(C, a0, a1, "a0*a1")
    sol12 = _solutions(C, a1, a2, "a1*a2")
    _check_states(len(sol01) * len(sol12))
    n01, n12 = a0.degree + a1.degree - 1, a1.degree + a2.degree - 1
    m0 = C.times(a0, n12)
    m2 = C.times(a2, n01)
    left = {C.apply(m0, x) for x in sol12}
    right = {C.apply(m2, z) for z in sol01}
    n = a0.degree + n12
    chains = {l ^ r for l in left for r in right}
    return frozenset(h.class_of(ChainElement(n, c)) for c in chains)


def _admissible_lifts(C: _Chains, a: ChainElement, b: ChainElement, lifts: list[int], partners: list[int],
                      nx: int, np_: int) -> list[int]:
    """Lifts x for which ``a x + p b`` is a boundary for some listed partner p."""
    _check_states(len(lifts) * len(partners))
    ma, mb = C.times(a, nx), C.times(b, np_)
    bset = C.boundaries(a.degree + nx)
    partner_images = {C.apply(mb, p) for p in partners}
    out = []
    for x in lifts:
        ax = C.apply(ma, x)
        if any((ax ^ q) in bset for q in partner_images):
            out.append(x)
    return out


def _lift_sets(h: HomologyStructure, s0, s1, s2, s3) -> tuple[_Chains, int, list[int], list[int]]:
    C = _Chains(h)
    a0, a1, a2, a3 = (s.representative for s in (s0, s1, s2, s3))
    sol01 = _solutions(C, a0, a1, "a0*a1")
    sol12 = _solutions(C, a1, a2, "a1*a2")
    sol23 = _solutions(C, a2, a3, "a2*a3")
    n01, n12, n23 = (a0.degree + a1.degree - 1, a1.degree + a2.degree - 1, a2.degree + a3.degree - 1)
    X = _admissible_lifts(C, a0, a2, sol12, sol01, n12, n01)
    Y = _admissible_lifts(C, a3, a1, sol12, sol23, n12, n23)
    return C, n12, X, Y


def brute_force_coindet(h: HomologyStructure, s0, s1, s2, s3) -> frozenset[HomologyClass]:
    """All classes ``x + y``; empty when either side has no admissible lift."""
    C, n, X, Y = _lift_sets(h, s0, s1, s2, s3)
    _check_states(len(X) * len(Y))
    sums = {x ^ y for x in X for y in Y}
    return frozenset(h.class_of(ChainElement(n, s)) for s in sums)


def brute_force_coindet_contains_zero(h: HomologyStructure, s0, s1, s2, s3) -> bool:
    """Zero test against the enumerated boundary set, without homology coordinates."""
    C, n, X, Y = _lift_sets(h, s0, s1, s2, s3)
    _check_states(len(X) * len(Y))
    bset = C.boundaries(n)
    return any((x ^ y) in bset for x in X for y in Y)


def brute_force_fourfold_defined(h: HomologyStructure, s0, s1, s2, s3) -> bool:
    """Some single a12 serves both threefold subbrackets."""
    _, _, X, Y = _lift_sets(h, s0, s1, s2, s3)
    return bool(set(X) & set(Y))


def _lifts_of_everything(A, n: int) -> tuple[dict[int, int], list[int]]:
    """One preimage per boundary of degree n + 1, and all cycles of degree n."""
    first: dict[int, int] = {}
    cycles = []
    for v, dv in _walk(A.d_columns(n)):
        first.setdefault(dv, v)
        if dv == 0:
            cycles.append(v)
    return first, cycles


def brute_force_fourfold_values(h: HomologyStructure, s0, s1, s2, s3) -> frozenset[HomologyClass]:
    """Every class ``a0 a13 + a01 a23 + a02 a3`` over all admissible choices.

    For fixed ``(a01, a12, a23)`` the lifts ``a02`` and ``a13`` run over one
    particular lift plus all cycles ``p``, ``q``; the extra terms ``p a3`` and
    ``a0 q`` are cycles, so their classes are listed once and added.
    """
    C = _Chains(h)
    A = C.A
    a0, a1, a2, a3 = (s.representative for s in (s0, s1, s2, s3))
    sol01 = _solutions(C, a0, a1, "a0*a1")
    sol12 = _solutions(C, a1, a2, "a1*a2")
    sol23 = _solutions(C, a2, a3, "a2*a3")
    n01, n12, n23 = (a0.degree + a1.degree - 1, a1.degree + a2.degree - 1, a2.degree + a3.degree - 1)
    n02, n13 = a0.degree + n12 - 1, a1.degree + n23 - 1
    n = a0.degree + n13
    _check_states(len(sol01) * len(sol12) + len(sol12) * len(sol23))
    m0_12, m2_01 = C.times(a0, n12), C.times(a2, n01)
    m1_23, m3_12 = C.times(a1, n23), C.times(a3, n12)
    m0_13, m3_02 = C.times(a0, n13), C.times(a3, n02)
    d02, z02 = _lifts_of_everything(A, n02)
    d13, z13 = _lifts_of_everything(A, n13)
    offsets = {h.class_coords(ChainElement(n, C.apply(m3_02, p))) for p in z02}
    offsets = {o ^ h.class_coords(ChainElement(n, C.apply(m0_13, q))) for o in offsets for q in z13}

    bases = set()
    count = 0
    for y in sol12:
        left = [(x, d02[t]) for x in sol01 if (t := C.apply(m0_12, y) ^ C.apply(m2_01, x)) in d02]
        if not left:
            continue
        right = [(w, d13[t]) for w in sol23 if (t := C.apply(m1_23, w) ^ C.apply(m3_12, y)) in d13]
        count += len(left) * len(right)
        _check_states(count)
        for x, p02 in left:
            for w, p13 in right:
                g = (C.apply(m0_13, p13) ^ C.apply(m3_02, p02)
                     ^ A.multiply(ChainElement(n01, x), ChainElement(n23, w)).coords)
                bases.add(g)
    base_classes = {h.class_coords(ChainElement(n, g)) for g in bases}
    return frozenset(h.from_coords(n, b ^ o) for b in base_classes for o in offsets)


# -- random presentations -------------------------------------------------------------

PLANT_SIZE = 9


@dataclass(frozen=True)
class RandomDgaSpec:
    """Parameters for :func:`random_presentation`; identical specs give identical output.

    ``max_degree`` is the truncation (at least 3).  With at least
    ``PLANT_SIZE`` generators allowed, ``plant_probability`` is the chance of
    seeding a planted quadruple like the one in the shipped algebra ``A``.
    """

    seed: int
    max_generators: int = 6
    max_degree: int = 5
    differential_density: Fraction = Fraction(2, 3)
    relation_density: Fraction = Fraction(1, 4)
    plant_probability: Fraction = Fraction(3, 4)


class _Builder:
    """Degree-1 generators whose differentials are sets of index pairs ``(i, j)``, i <= j."""

    def __init__(self) -> None:
        self.diffs: list[frozenset] = []
        self.rels: list[tuple[int, int]] = []

    def gen(self, d=frozenset()) -> int:
        self.diffs.append(frozenset(d))
        return len(self.diffs) - 1

    @staticmethod
    def times(u: Iterable[int], v: Iterable[int]) -> frozenset:
        out: set = set()
        for i in u:
            for j in v:
                out ^= {(min(i, j), max(i, j))}
        return frozenset(out)

    def presentation(self, name: str, truncation: int) -> DgaPresentation:
        k = len(self.diffs)

        def mono(*idx: int) -> tuple:
            e = [0] * k
            for i in idx:
                e[i] += 1
            return tuple(e)

        gens = tuple(GeneratorDecl(f"g{i}", 1) for i in range(k))
        diffs = tuple(normalize(mono(*t) for t in d) for d in self.diffs)
        return DgaPresentation(name, truncation, gens, diffs, tuple(mono(*r) for r in self.rels))


def _generic_differential(b: _Builder, rng: random.Random, spec: RandomDgaSpec) -> frozenset:
    if len(b.diffs) < 2 or rng.random() >= spec.differential_density:
        return frozenset()
    A = algebra(b.presentation("partial", 3))
    z1 = null_space(Gf2Matrix(A.dim(2), A.dim(1), A.d_columns(1))).basis
    z2 = null_space(Gf2Matrix(A.dim(3), A.dim(2), A.d_columns(2))).basis
    if rng.random() < 0.6 and z1:
        def pick() -> ChainElement:
            return ChainElement(1, rng.choice(z1))
        target = A.multiply(pick(), pick()).coords
        if rng.random() < 0.3:
            target ^= A.multiply(pick(), pick()).coords
    else:
        target = 0
        for v in z2:
            if rng.random() < 0.3:
                target ^= v
    out = set()
    for m in A.terms(ChainElement(2, target)):
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        out.add((idx[0], idx[1]))
    return frozenset(out)


def _plant(b: _Builder, rng: random.Random) -> list[frozenset]:
    """Cycles a0..a3 with killers for a_i a_{i+1} and, usually, for both triple products.

    Killers of the triple products are sometimes perturbed by a product of
    cycles, as ``c*a3`` is in the shipped ``A_prime``.
    """
    cyc = [b.gen() for _ in range(rng.randint(4, 5))]

    def element() -> frozenset:
        return frozenset(rng.sample(cyc, 1 if rng.random() < 0.7 else 2))

    a = [element() for _ in range(4)]
    k01 = b.gen(b.times(a[0], a[1]))
    k12 = b.gen(b.times(a[1], a[2]))
    k23 = b.gen(b.times(a[2], a[3]))
    left = b.times(a[0], {k12}) ^ b.times({k01}, a[2])
    right = b.times(a[1], {k23}) ^ b.times({k12}, a[3])
    for rep, outer in ((left, (a[0], a[2])), (right, (a[1], a[3]))):
        if rng.random() < 0.85:
            if rng.random() < 0.5:
                rep = rep ^ b.times(element(), rng.choice(outer))
            b.gen(rep)
    return a


def _random_build(spec: RandomDgaSpec) -> tuple[DgaPresentation, Optional[list[frozenset]]]:
    rng = random.Random(spec.seed)
    b = _Builder()
    planted = None
    if spec.max_generators >= PLANT_SIZE and rng.random() < spec.plant_probability:
        planted = _plant(b, rng)
    low = max(len(b.diffs), min(3, spec.max_generators))
    count = rng.randint(low, max(spec.max_generators, low))
    while len(b.diffs) < count:
        b.gen(_generic_differential(b, rng, spec))
    cycles = [i for i, d in enumerate(b.diffs) if not d]
    for i in cycles:
        for j in cycles:
            if i <= j and rng.random() < spec.relation_density / max(len(cycles), 1):
                b.rels.append((i, j))
    return b.presentation(f"random_{spec.seed}", max(spec.max_degree, 3)), planted


def random_presentation(spec: RandomDgaSpec) -> DgaPresentation:
    """A random valid presentation on degree-1 generators.

    Each generator is a cycle or has as differential a cycle of the algebra
    generated before it (often a product of two earlier cycles), so
    ``d^2 = 0`` holds by construction.  Relations are products of two
    generators with zero differential, which keeps the ideal closed under d.
    """
    return _random_build(spec)[0]


# -- random cross-checks --------------------------------------------------------------


@dataclass
class InstanceCheck:
    seed: int
    presentation: DgaPresentation
    classes: tuple[str, str, str, str]
    fast_defined: bool
    oracle_defined: bool
    oracle_coindet_zero: bool
    coset_law: bool
    triple_match: bool
    coindet_match: bool
    half_strict: bool
    fourfold_match: Optional[bool] = None
    mismatches: list[str] = field(default_factory=list)


@dataclass
class RandomCheckSummary:
    count: int
    seed: int
    max_generators: int
    max_degree: int
    attempts: int = 0
    instances: list[InstanceCheck] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return len(self.instances)

    @property
    def skipped(self) -> int:
        return self.attempts - self.checked

    @property
    def mismatches(self) -> list[tuple[int, str]]:
        return [(c.seed, m) for c in self.instances for m in c.mismatches]

    @property
    def defined_counts(self) -> tuple[int, int]:
        yes = sum(c.fast_defined for c in self.instances)
        return yes, self.checked - yes


def _admissible_quadruple(h: HomologyStructure, s: list[HomologyClass]) -> bool:
    from .massey import triple_bracket

    try:
        return (triple_bracket(h, *s[:3]).contains_zero and triple_bracket(h, *s[1:]).contains_zero)
    except BracketUndefined:
        return False


def _pick_classes(h: HomologyStructure, rng: random.Random, planted: Optional[list] = None,
                  tries: int = 40) -> Optional[tuple]:
    """Nonzero degree-1 classes a0..a3 whose two subbrackets contain zero.

    The planted quadruple is tried first, then random ones.
    """
    dim = h.dim(1)
    if dim == 0:
        return None
    if planted is not None:
        k = len(h.presentation.generators)
        chains = [h.dga.element([tuple(1 if j == i else 0 for j in range(k)) for i in sorted(a)]) for a in planted]
        s = [h.class_of(c) for c in chains]
        if all(not x.is_zero() for x in s) and _admissible_quadruple(h, s):
            return tuple(s)
    zero_product = {}

    def kills(i: int, j: int) -> bool:
        if (i, j) not in zero_product:
            zero_product[i, j] = h.product_class(h.from_coords(1, i), h.from_coords(1, j)).is_zero()
        return zero_product[i, j]

    for _ in range(tries):
        c = [rng.randrange(1, 1 << dim) for _ in range(4)]
        if kills(c[0], c[1]) and kills(c[1], c[2]) and kills(c[2], c[3]):
            s = [h.from_coords(1, x) for x in c]
            if _admissible_quadruple(h, s):
                return tuple(s)
    return None


def check_instance(h: HomologyStructure, classes: tuple, seed: int = 0) -> InstanceCheck:
    """Compare the linear-algebra path against enumeration on one quadruple."""
    from .gf2 import subspace_sum
    from .massey import (coindeterminacy, fourfold_bracket, half_strict_defined, left_div_subgroup,
                         right_div_subgroup, triple_bracket)

    s0, s1, s2, s3 = classes
    co = coindeterminacy(h, *classes)
    fast = co.contains_zero
    o_def = brute_force_fourfold_defined(h, *classes)
    o_zero = brute_force_coindet_contains_zero(h, *classes)
    coindet_match = {c.coords for c in brute_force_coindet(h, *classes)} == set(co.coset.elements())
    law = co.coset.direction == subspace_sum(left_div_subgroup(h, s0, s2, co.degree),
                                            right_div_subgroup(h, s1, s3, co.degree))
    triple_ok = True
    for trio in ((s0, s1, s2), (s1, s2, s3)):
        t = triple_bracket(h, *trio)
        triple_ok &= {c.coords for c in brute_force_triple(h, *trio)} == set(t.value.elements())
    half = half_strict_defined(h, *classes)
    four = None
    if fast:
        try:
            f = fourfold_bracket(h, *classes)
            if not f.enumeration_truncated:
                four = {c.coords for c in brute_force_fourfold_values(h, *classes)} == f.values()
        except OracleCapExceeded:
            pass
    check = InstanceCheck(seed, h.presentation, tuple(h.format_class(s) for s in classes), fast, o_def, o_zero,
                          law, triple_ok, coindet_match, half, four)
    if not (fast == o_def == o_zero):
        check.mismatches.append(f"definedness: fast={fast} oracle_direct={o_def} oracle_coindet={o_zero}")
    if not coindet_match:
        check.mismatches.append("coindeterminacy set differs from enumeration")
    if not law:
        check.mismatches.append("coindeterminacy direction differs from (a0\\\\a2) + (a1//a3)")
    if not triple_ok:
        check.mismatches.append("threefold bracket differs from enumeration")
    if half and not fast:
        check.mismatches.append("half-strict hypothesis holds but bracket undefined")
    if four is False:
        check.mismatches.append("fourfold value set differs from enumeration")
    return check


def random_check(count: int, seed: int, max_generators: int = 10, max_degree: int = 5,
                 max_attempts: Optional[int] = None) -> RandomCheckSummary:
    """Check ``count`` random instances whose subbrackets contain zero.

    Presentations without an admissible quadruple are skipped; at most
    ``max_attempts`` presentations are tried (default ``50 * count``).
    """
    master = random.Random(seed)
    summary = RandomCheckSummary(count, seed, max_generators, max_degree)
    limit = 50 * count if max_attempts is None else max_attempts
    while summary.checked < count and summary.attempts < limit:
        summary.attempts += 1
        inst_seed = master.getrandbits(63)
        p, planted = _random_build(RandomDgaSpec(inst_seed, max_generators, max_degree))
        h = build_homology(p)
        classes = _pick_classes(h, random.Random(inst_seed), planted)
        if classes is None:
            continue
        summary.instances.append(check_instance(h, classes, inst_seed))
    return summary

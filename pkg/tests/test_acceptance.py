"""Exit criteria, one marked group per criterion.

A summary with one PASS/FAIL line per criterion is printed at the end of the
run (see conftest.py).
"""

import json
import random
import time
from itertools import product

import pytest

from masseyf2.cli import run
from masseyf2.dga import algebra, format_presentation, parse_presentation, validate
from masseyf2.errors import BracketUndefined
from masseyf2.examples import FIXTURE_NAMES, fixture, fixture_text
from masseyf2.gf2 import Gf2Matrix, Gf2Subspace, bits, null_space, solve, subspace_intersection, subspace_sum
from masseyf2.homology import build_homology
from masseyf2.massey import (coindet_well_definedness_check, coindeterminacy, is_fourfold_defined,
                             left_div_subgroup, right_div_subgroup, triple_bracket)
from masseyf2.oracle import random_check

from conftest import classes, homology

QUAD = ("a0", "a1", "a2", "a3")
RANDOM_COUNT = 100
RANDOM_SEED = 7


def cold(name):
    """Build from the packaged text with every cache cleared."""
    algebra.cache_clear()
    validate.cache_clear()
    return fixture_text(name)


def cli_json(argv):
    code, report, _ = run(argv + ["--json"])
    return code, json.loads(report.to_json())


@pytest.fixture(scope="module")
def fixture_paths(tmp_path_factory):
    d = tmp_path_factory.mktemp("fixtures")
    for name in FIXTURE_NAMES:
        (d / f"{name}.dga").write_text(fixture_text(name))
    return {name: str(d / f"{name}.dga") for name in FIXTURE_NAMES}


@pytest.fixture(scope="module")
def random_summary():
    t0 = time.perf_counter()
    summary = random_check(RANDOM_COUNT, RANDOM_SEED, max_generators=10, max_degree=5)
    return summary, time.perf_counter() - t0


@pytest.fixture(scope="module")
def random_summary_small():
    # smaller algebras hit the strictly-zero hypothesis far more often
    return random_check(RANDOM_COUNT, RANDOM_SEED, max_generators=5, max_degree=5)


# -- 1 ---------------------------------------------------------------------------------


@pytest.mark.acceptance(1)
def test_criterion_1_A_defined(fixture_paths):
    cold("A")
    t0 = time.perf_counter()
    code_c, coin = cli_json(["coindet", fixture_paths["A"], *QUAD])
    code_f, four = cli_json(["fourfold", fixture_paths["A"], *QUAD])
    elapsed = time.perf_counter() - t0
    assert code_c == code_f == 0
    assert coin["result"]["contains_zero"] is True
    assert four["result"]["defined"] is True
    assert elapsed < 1.0, f"{elapsed:.2f}s"


# -- 2 ---------------------------------------------------------------------------------


@pytest.mark.acceptance(2)
def test_criterion_2_A_prime_undefined(fixture_paths):
    text = cold("A_prime")
    t0 = time.perf_counter()
    code, four = cli_json(["fourfold", fixture_paths["A_prime"], *QUAD])
    h = build_homology(parse_presentation(text))
    co = coindeterminacy(h, *classes(h, *QUAD))
    elapsed = time.perf_counter() - t0
    assert code == 0 and four["result"]["defined"] is False
    c = h.class_coords(h.dga.parse("c"))
    assert c != 0
    assert co.coset.direction.reduce(co.coset.representative) == co.coset.direction.reduce(c)
    assert four["result"]["coindeterminacy"]["representative"]["class"] == "c"
    assert elapsed < 1.0, f"{elapsed:.2f}s"


# -- 3 ---------------------------------------------------------------------------------


@pytest.mark.acceptance(3)
def test_criterion_3_indeterminacy_membership(hA):
    a0, a1, a2, a3 = classes(hA, *QUAD)
    left, right = triple_bracket(hA, a0, a1, a2), triple_bracket(hA, a1, a2, a3)
    a0c = hA.class_coords(hA.dga.parse("a0*c"))
    ca3 = hA.class_coords(hA.dga.parse("c*a3"))
    assert a0c != 0 and ca3 != 0
    assert left.value.direction.contains(a0c)
    assert right.value.direction.contains(ca3)


# -- 4 ---------------------------------------------------------------------------------


def coset_law_holds(h, s):
    co = coindeterminacy(h, *s)
    expected = subspace_sum(left_div_subgroup(h, s[0], s[2], co.degree),
                            right_div_subgroup(h, s[1], s[3], co.degree))
    return co.coset.direction == expected


@pytest.mark.acceptance(4)
def test_criterion_4_coset_law(random_summary):
    for name in ("A", "A_prime"):
        h = homology(name)
        assert coset_law_holds(h, classes(h, *QUAD)), name
    summary, _ = random_summary
    assert summary.checked >= RANDOM_COUNT
    failures = [c.seed for c in summary.instances if not c.coset_law]
    assert not failures, failures
    # recompute a sample here, outside the harness
    for c in summary.instances[:20]:
        h = build_homology(c.presentation)
        assert coset_law_holds(h, classes(h, *c.classes))


# -- 5 ---------------------------------------------------------------------------------


@pytest.mark.acceptance(5)
def test_criterion_5_definedness_matches_enumeration(random_summary):
    summary, elapsed = random_summary
    assert summary.checked >= RANDOM_COUNT
    bad = [(c.seed, c.fast_defined, c.oracle_defined, c.oracle_coindet_zero) for c in summary.instances
           if not (c.fast_defined == c.oracle_defined == c.oracle_coindet_zero)]
    assert not bad, bad
    assert not summary.mismatches, summary.mismatches
    yes, no = summary.defined_counts
    assert yes > 0 and no > 0, "both verdicts must be exercised"
    assert elapsed < 300, f"{elapsed:.1f}s"


# -- 6 ---------------------------------------------------------------------------------


@pytest.mark.acceptance(6)
def test_criterion_6_half_strict(hHalf, random_summary, random_summary_small):
    s = classes(hHalf, *QUAD)
    assert triple_bracket(hHalf, *s[:3]).strictly_zero or triple_bracket(hHalf, *s[1:]).strictly_zero
    assert is_fourfold_defined(hHalf, *s)[0]
    hits = 0
    for summary in (random_summary[0], random_summary_small):
        for c in summary.instances:
            h = build_homology(c.presentation)
            q = classes(h, *c.classes)
            left, right = triple_bracket(h, *q[:3]), triple_bracket(h, *q[1:])
            strict = (left.strictly_zero and right.contains_zero) or (right.strictly_zero and left.contains_zero)
            assert strict == c.half_strict
            if strict:
                hits += 1
                assert is_fourfold_defined(h, *q)[0], c.seed
    assert hits > 0


# -- 7 ---------------------------------------------------------------------------------


@pytest.mark.acceptance(7)
@pytest.mark.parametrize("name", ["A", "A_prime"])
def test_criterion_7_well_definedness(name):
    h = homology(name)
    report = coindet_well_definedness_check(h, *classes(h, *QUAD), trials=20, seed=7)
    assert report.trials >= 20
    assert set(report.items) == {"sum_is_cycle", "boundary_shift", "homologous_inputs"}
    assert report.ok, report.counterexample


# -- 8 ---------------------------------------------------------------------------------

GENS = ("a0", "a1", "a2", "a3", "c")


def product_relations(h):
    """Linear relations among the classes g*g' for generator classes g, g'."""
    cl = dict(zip(GENS, classes(h, *GENS)))
    pairs = list(product(GENS, GENS))
    cols = tuple(h.product_class(cl[a], cl[b]).coords for a, b in pairs)
    return Gf2Matrix(h.dim(2), len(pairs), cols)


def triple_signature(h, M, trio):
    """A basis-free description of a triple bracket via generator products."""
    cl = classes(h, *trio)
    try:
        t = triple_bracket(h, *cl)
    except BracketUndefined:
        return ("undefined",)
    ker = null_space(M)
    pulled = [solve(M, d) for d in t.value.direction.basis]
    if any(p is None for p in pulled):
        return ("direction outside product span",)
    pre = Gf2Subspace.span(M.ncols, [p[0] for p in pulled] + list(ker.basis))
    rep = solve(M, t.value.representative)
    return (t.contains_zero, t.strictly_zero, pre, None if rep is None else pre.reduce(rep[0]))


@pytest.mark.acceptance(8)
def test_criterion_8_homology_dims(hA, hAp):
    """Expected to fail: the two algebras have different homology in degrees 2 and 3.

    a0*a13 + a01*a23 + a02*a3 is a cycle in A but has boundary a0*a3*c in
    A_prime, so rank d on degree 2 chains is 30 versus 31.
    """
    dims = [(n, hA.dim(n), hAp.dim(n)) for n in range(4)]
    z = "a0*a13 + a01*a23 + a02*a3"
    witness = f"d({z}) is {hA.dga.format(hA.dga.differential(hA.dga.parse(z)))} in A and " \
              f"{hAp.dga.format(hAp.dga.differential(hAp.dga.parse(z)))} in A_prime"
    assert all(a == b for _, a, b in dims), f"(degree, dim H(A), dim H(A')) = {dims}; {witness}"


@pytest.mark.acceptance(8)
def test_criterion_8_product_tables(hA, hAp):
    assert null_space(product_relations(hA)) == null_space(product_relations(hAp))


@pytest.mark.acceptance(8)
def test_criterion_8_triple_brackets(hA, hAp):
    MA, MB = product_relations(hA), product_relations(hAp)
    defined = 0
    for trio in product(GENS, repeat=3):
        a, b = triple_signature(hA, MA, trio), triple_signature(hAp, MB, trio)
        assert a == b, trio
        defined += a[0] != "undefined"
    assert defined > 0


@pytest.mark.acceptance(8)
def test_criterion_8_coindeterminacy_verdicts_differ(hA, hAp):
    assert coindeterminacy(hA, *classes(hA, *QUAD)).contains_zero
    assert not coindeterminacy(hAp, *classes(hAp, *QUAD)).contains_zero


# -- 9 ---------------------------------------------------------------------------------


@pytest.mark.acceptance(9)
@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_criterion_9_d_squared_and_leibniz(name):
    A = algebra(fixture(name))
    N = A.p.truncation
    for n in range(N - 1):
        dn, dn1 = A.d_columns(n), A.d_columns(n + 1)
        for col in dn:
            dd = 0
            for j in bits(col):
                dd ^= dn1[j]
            assert dd == 0
    for i in range(N):
        for j in range(i, N - i):
            for u in (A.element([m]) for m in A.basis(i)):
                du = A.differential(u)
                for v in (A.element([m]) for m in A.basis(j)):
                    lhs = A.differential(A.multiply(u, v))
                    assert lhs == A.multiply(du, v) + A.multiply(u, A.differential(v))


@pytest.mark.acceptance(9)
def test_criterion_9_dimension_formula():
    rng = random.Random(9)
    for _ in range(1000):
        n = rng.randint(1, 12)
        s = Gf2Subspace.span(n, [rng.getrandbits(n) for _ in range(rng.randint(0, n))])
        t = Gf2Subspace.span(n, [rng.getrandbits(n) for _ in range(rng.randint(0, n))])
        assert s.dimension + t.dimension == subspace_sum(s, t).dimension + subspace_intersection(s, t).dimension


@pytest.mark.acceptance(9)
@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_criterion_9_round_trip(name):
    p = fixture(name)
    assert parse_presentation(format_presentation(p)) == p

"""Shipped example algebras.

``A`` and ``A_prime`` share generators and differentials except on ``a13``,
where ``A_prime`` adds ``c*a3``.  Their homology rings and threefold
brackets agree while the coindeterminacy of ``<a0, a1, a2, a3>`` separates
them.
"""

from __future__ import annotations

from importlib import resources

from .dga import DgaPresentation, GeneratorDecl, normalize, parse_presentation
from .errors import ContractViolation

FIXTURE_NAMES = ("A", "A_prime", "A_half_strict", "A_alt_grading", "A_prime_alt_grading")

_NAMES = ("a0", "a1", "a2", "a3", "a01", "a12", "a23", "c", "a02", "a13")


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise ContractViolation(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    return resources.files(__package__).joinpath(f"fixtures/{name}.dga").read_text(encoding="utf-8")


def fixture(name: str) -> DgaPresentation:
    return parse_presentation(fixture_text(name))


def _build(name, truncation, degrees, table, names=_NAMES, relations=()):
    idx = {n: i for i, n in enumerate(names)}

    def mono(*factors):
        e = [0] * len(names)
        for f in factors:
            e[idx[f]] += 1
        return tuple(e)

    gens = tuple(GeneratorDecl(n, degrees[n]) for n in names)
    diffs = tuple(normalize(mono(*t) for t in table.get(n, ())) for n in names)
    rels = tuple(mono(*r) for r in relations)
    return DgaPresentation(name, truncation, gens, diffs, rels)


def _table(prime: bool) -> dict:
    table = {
        "a01": [("a0", "a1")],
        "a12": [("a1", "a2")],
        "a23": [("a2", "a3")],
        "a02": [("a0", "a12"), ("a01", "a2")],
        "a13": [("a1", "a23"), ("a12", "a3")],
    }
    if prime:
        table["a13"] = table["a13"] + [("c", "a3")]
    return table


def algebra_A(prime: bool = False) -> DgaPresentation:
    return _build("A_prime" if prime else "A", 5, dict.fromkeys(_NAMES, 1), _table(prime))


def algebra_A_half_strict() -> DgaPresentation:
    names = tuple(n for n in _NAMES if n != "c")
    return _build("A_half_strict", 5, dict.fromkeys(names, 1), _table(False), names,
                  relations=[("a0", "a0"), ("a0", "a2"), ("a0", "a3"), ("a2", "a2")])


def algebra_A_alt_grading(prime: bool = False) -> DgaPresentation:
    degrees = {"a0": 2, "a1": 2, "a2": 2, "a3": 2, "a01": 3, "a12": 3, "a23": 3, "c": 3, "a02": 4, "a13": 4}
    name = "A_prime_alt_grading" if prime else "A_alt_grading"
    return _build(name, 7, degrees, _table(prime))


CONSTRUCTORS = {
    "A": algebra_A,
    "A_prime": lambda: algebra_A(prime=True),
    "A_half_strict": algebra_A_half_strict,
    "A_alt_grading": algebra_A_alt_grading,
    "A_prime_alt_grading": lambda: algebra_A_alt_grading(prime=True),
}

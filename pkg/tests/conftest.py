from __future__ import annotations

from functools import lru_cache

import pytest

from masseyf2.examples import fixture
from masseyf2.homology import HomologyStructure, build_homology

# criterion id -> list of (test name, passed)
ACCEPTANCE: dict[str, list[tuple[str, bool]]] = {}


@lru_cache(maxsize=None)
def homology(name: str) -> HomologyStructure:
    return build_homology(fixture(name))


def classes(h: HomologyStructure, *texts: str):
    return [h.class_of(h.dga.parse(t)) for t in texts]


@pytest.fixture(scope="session")
def hA() -> HomologyStructure:
    return homology("A")


@pytest.fixture(scope="session")
def hAp() -> HomologyStructure:
    return homology("A_prime")


@pytest.fixture(scope="session")
def hHalf() -> HomologyStructure:
    return homology("A_half_strict")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    ACCEPTANCE.setdefault(str(marker.args[0]), []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=lambda c: (len(c), c)):
        results = ACCEPTANCE[crit]
        verdict = "PASS" if all(ok for _, ok in results) else "FAIL"
        tr.write_line(f"criterion {crit}: {verdict}")
        if len(results) > 1:
            for name, ok in results:
                tr.write_line(f"    {'pass' if ok else 'FAIL'}  {name}")

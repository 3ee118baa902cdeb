import json
import os
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from masseyf2.cli import _render, main

GOLDEN = Path(__file__).parent / "golden"
FIXTURES = resources.files("masseyf2") / "fixtures"

CASES = {
    "verify_A": ["verify", "A.dga"],
    "homology_A_1": ["homology", "A.dga", "--max-degree", "1"],
    "homology_A_too_high": ["homology", "A.dga", "--max-degree", "5"],
    "triple_A": ["triple", "A.dga", "a0", "a1", "a2"],
    "triple_A_not_cycle": ["triple", "A.dga", "a01", "a1", "a2"],
    "triple_A_undefined": ["triple", "A.dga", "a0", "a0", "a0"],
    "coindet_A": ["coindet", "A.dga", "a0", "a1", "a2", "a3"],
    "coindet_A_prime": ["coindet", "A_prime.dga", "a0", "a1", "a2", "a3"],
    "fourfold_A": ["fourfold", "A.dga", "a0", "a1", "a2", "a3"],
    "fourfold_A_limit0": ["fourfold", "A.dga", "a0", "a1", "a2", "a3", "--enumerate-limit", "0"],
    "fourfold_A_prime": ["fourfold", "A_prime.dga", "a0", "a1", "a2", "a3"],
    "random_check_small": ["random-check", "--count", "3", "--seed", "7", "--max-gens", "5", "--max-degree", "5"],
}
EXIT = {"homology_A_too_high": 2, "triple_A_not_cycle": 2, "triple_A_undefined": 2}


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


@pytest.fixture(autouse=True)
def in_fixture_dir(monkeypatch):
    monkeypatch.chdir(str(FIXTURES))


@pytest.mark.parametrize("case", CASES)
def test_golden_json(case, capsys):
    code, out = run(capsys, CASES[case] + ["--json"])
    assert code == EXIT.get(case, 0)
    path = GOLDEN / f"{case}.json"
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")


@pytest.mark.parametrize("case", CASES)
def test_text_and_json_carry_the_same_data(case, capsys):
    _, text = run(capsys, CASES[case])
    _, js = run(capsys, CASES[case] + ["--json"])
    lines: list[str] = []
    _render(json.loads(js), 0, lines)
    assert text == "\n".join(lines) + "\n"


def test_refusals_carry_reason_codes(capsys):
    for case, code in EXIT.items():
        got, out = run(capsys, CASES[case] + ["--json"])
        doc = json.loads(out)
        assert got == code and doc["status"] == "refused" and doc["reason"]


def test_non_cycle_shows_differential(capsys):
    _, out = run(capsys, CASES["triple_A_not_cycle"] + ["--json"])
    doc = json.loads(out)
    assert doc["reason"] == "not_a_cycle" and doc["result"]["differential"] == "a0*a1"


def test_verify_d_squared_failure(tmp_path, capsys):
    text = (FIXTURES / "A.dga").read_text()
    bad = tmp_path / "bad.dga"
    bad.write_text(text.replace("d a02 = a0*a12 + a01*a2", "d a02 = a0*a12"))
    code, out = run(capsys, ["verify", str(bad), "--json"])
    doc = json.loads(out)
    assert code == 2
    assert doc["result"]["violations"][0]["witness"] == "a02"


def test_verify_parse_error_has_line(tmp_path, capsys):
    bad = tmp_path / "bad.dga"
    bad.write_text("dga T\ntruncate 3\ngen g 1\nd g = h\n")
    code, out = run(capsys, ["verify", str(bad), "--json"])
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "error"
    assert doc["reason"] == "unknown_name" and "line 4" in doc["message"]


def test_missing_file(capsys):
    code, out = run(capsys, ["verify", "nope.dga"])
    assert code == 1 and "io_error" in out


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["triple", "A.dga", "a0"])
    assert info.value.code == 1


def test_bad_chain_argument(capsys):
    code, out = run(capsys, ["triple", "A.dga", "a0", "a1 +", "a2", "--json"])
    assert code == 1 and json.loads(out)["reason"] == "parse_error"


def test_zero_argument(capsys):
    code, out = run(capsys, ["triple", "A.dga", "0@1", "a1", "a2", "--json"])
    doc = json.loads(out)
    assert code == 0 and doc["result"]["contains_zero"] is True


def test_random_check_zero_count(capsys):
    code, out = run(capsys, ["random-check", "--count", "0", "--json"])
    assert code == 0 and json.loads(out)["result"]["checked"] == 0


def test_random_check_deterministic(capsys):
    argv = ["random-check", "--count", "5", "--seed", "7", "--max-gens", "5", "--json"]
    assert run(capsys, argv) == run(capsys, argv)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "masseyf2", "homology", "A.dga", "--max-degree", "1"],
                         capture_output=True, text=True, cwd=str(FIXTURES))
    assert out.returncode == 0 and "dims:" in out.stdout

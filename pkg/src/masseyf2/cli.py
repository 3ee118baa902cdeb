"""Command-line front end.

Exit codes: 0 ran and passed, 1 usage or parse error, 2 domain refusal
(invalid presentation, undefined bracket, unavailable degree), 3 random-check
found a mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .dga import format_presentation, parse_presentation, validate
from .errors import MasseyError, PresentationError
from .gf2 import Gf2Subspace, bitstring
from .homology import HomologyClass, HomologyStructure, build_homology
from .massey import DEFAULT_ENUMERATION_LIMIT, coindeterminacy, fourfold_bracket, triple_bracket
from .oracle import random_check

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_MISMATCH = 0, 1, 2, 3


@dataclass
class Report:
    command: str
    inputs: dict[str, Any]
    status: str = "ok"
    reason: Optional[str] = None
    message: Optional[str] = None
    result: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "status": self.status}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.message is not None:
            out["message"] = self.message
        out["inputs"] = self.inputs
        out["result"] = self.result
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines: list[str] = []
        _render(self.to_dict(), 0, lines)
        return "\n".join(lines) + "\n"


def _scalar(v: Any) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v)


def _render(obj: Any, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_scalar(v) if not isinstance(v, (dict, list)) else json.dumps(v)}")
    else:
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                _render(item, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(item)}")


# -- payload helpers ----------------------------------------------------------


def _class(h: HomologyStructure, n: int, coords: int) -> dict[str, str]:
    return {"class": h.format_class(h.from_coords(n, coords)), "coords": bitstring(coords, h.dim(n))}


def _basis(h: HomologyStructure, n: int, s: Gf2Subspace) -> list[str]:
    return [h.format_class(h.from_coords(n, b)) for b in s.basis]


def _load(path: str) -> HomologyStructure:
    text = Path(path).read_text(encoding="utf-8")
    return build_homology(parse_presentation(text))


def _classes(h: HomologyStructure, texts: list[str]) -> list[HomologyClass]:
    return [h.class_of(h.dga.parse(t)) for t in texts]


# -- commands -----------------------------------------------------------------


def cmd_verify(args: argparse.Namespace, report: Report) -> int:
    p = parse_presentation(Path(args.file).read_text(encoding="utf-8"))
    r = validate(p)
    report.result = {
        "name": p.name,
        "truncation": p.truncation,
        "generators": len(p.generators),
        "relations": len(p.relations),
        "valid": r.ok,
        "violations": [{"kind": k, "witness": w, "detail": d} for k, w, d in r.violations],
    }
    if not r.ok:
        report.status, report.reason = "refused", "invalid_presentation"
        report.message = f"{r.violations[0][0]} violation at {r.violations[0][1]}"
        return EXIT_REFUSED
    return EXIT_OK


def cmd_homology(args: argparse.Namespace, report: Report) -> int:
    h = _load(args.file)
    top = h.max_degree if args.max_degree is None else args.max_degree
    if top < 0 or top > h.max_degree:
        report.status, report.reason = "refused", "degree_out_of_range"
        report.message = f"max degree must lie in 0..{h.max_degree} (truncation {h.presentation.truncation})"
        return EXIT_REFUSED
    degrees = []
    for n in range(top + 1):
        degrees.append({"degree": n, "dim": h.dim(n), "basis": [h.dga.format(b) for b in h.basis(n)]})
    report.result = {"dims": [d["dim"] for d in degrees], "degrees": degrees}
    return EXIT_OK


def cmd_triple(args: argparse.Namespace, report: Report) -> int:
    h = _load(args.file)
    s = _classes(h, args.classes)
    t = triple_bracket(h, *s)
    A = h.dga
    report.result = {
        "degree": t.degree,
        "representative": _class(h, t.degree, t.value.representative),
        "indeterminacy_basis": _basis(h, t.degree, t.value.direction),
        "indeterminacy_dim": t.value.direction.dimension,
        "contains_zero": t.contains_zero,
        "strictly_zero": t.strictly_zero,
        "witnesses": {"a01": A.format(t.witness[0]), "a12": A.format(t.witness[1])},
    }
    return EXIT_OK


def _coindet_payload(h: HomologyStructure, co) -> dict[str, Any]:
    A = h.dga
    n = co.degree
    w = {}
    for key, val in (("x", co.witness_x), ("y", co.witness_y), ("z", co.witness_z), ("w", co.witness_w)):
        if val is not None:
            w[key] = A.format(val)
    return {
        "degree": n,
        "representative": _class(h, n, co.coset.representative),
        "direction_basis": _basis(h, n, co.coset.direction),
        "left_div_basis": _basis(h, n, co.left_div),
        "right_div_basis": _basis(h, n, co.right_div),
        "contains_zero": co.contains_zero,
        "witnesses": w,
    }


def cmd_coindet(args: argparse.Namespace, report: Report) -> int:
    h = _load(args.file)
    co = coindeterminacy(h, *_classes(h, args.classes))
    report.result = _coindet_payload(h, co)
    return EXIT_OK


def cmd_fourfold(args: argparse.Namespace, report: Report) -> int:
    h = _load(args.file)
    s = _classes(h, args.classes)
    co = coindeterminacy(h, *s)
    report.result = {"defined": co.contains_zero, "coindeterminacy": _coindet_payload(h, co)}
    if not co.contains_zero:
        return EXIT_OK
    f = fourfold_bracket(h, *s, enumeration_limit=args.enumerate_limit)
    n = f.degree
    A = h.dga
    report.result["value"] = {
        "degree": n,
        "representative": _class(h, n, f.representative),
        "direction_basis": _basis(h, n, f.direction),
        "coset_representatives": [_class(h, n, r) for r in sorted(f.coset_representatives)],
        "size": None if f.enumeration_truncated else len(f),
        "free_parameters": f.free_parameters,
        "enumeration_truncated": f.enumeration_truncated,
        "witnesses": dict(zip(("a01", "a12", "a23", "a02", "a13"), (A.format(w) for w in f.witness))),
    }
    return EXIT_OK


def cmd_random_check(args: argparse.Namespace, report: Report) -> int:
    summary = random_check(args.count, args.seed, args.max_gens, args.max_degree)
    yes, no = summary.defined_counts
    report.result = {
        "attempts": summary.attempts,
        "checked": summary.checked,
        "skipped": summary.skipped,
        "defined": yes,
        "undefined": no,
        "half_strict": sum(c.half_strict for c in summary.instances),
        "fourfold_value_sets_compared": sum(c.fourfold_match is not None for c in summary.instances),
        "mismatches": [
            {"seed": c.seed, "classes": list(c.classes), "problems": c.mismatches,
             "presentation": format_presentation(c.presentation)}
            for c in summary.instances if c.mismatches
        ],
    }
    if summary.mismatches:
        report.status, report.reason = "mismatch", "oracle_mismatch"
        return EXIT_MISMATCH
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "homology": cmd_homology,
    "triple": cmd_triple,
    "coindet": cmd_coindet,
    "fourfold": cmd_fourfold,
    "random-check": cmd_random_check,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 so that 2 stays reserved for domain refusals."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="masseyf2", description="Massey products in F2 DGAs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    p = sub.add_parser("verify", help="check d^2 = 0 and relation closure")
    p.add_argument("file")
    common(p)
    p = sub.add_parser("homology", help="homology dimensions and basis representatives")
    p.add_argument("file")
    p.add_argument("--max-degree", type=int, default=None)
    common(p)
    p = sub.add_parser("triple", help="threefold Massey product")
    p.add_argument("file")
    p.add_argument("classes", nargs=3, metavar="CYCLE")
    common(p)
    for name, helptext in (("coindet", "coindeterminacy of the two subbrackets"),
                           ("fourfold", "fourfold bracket definedness and values")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        p.add_argument("classes", nargs=4, metavar="CYCLE")
        if name == "fourfold":
            p.add_argument("--enumerate-limit", type=int, default=DEFAULT_ENUMERATION_LIMIT)
        common(p)
    p = sub.add_parser("random-check", help="compare fast paths with brute force on random DGAs")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-gens", type=int, default=10)
    p.add_argument("--max-degree", type=int, default=5)
    common(p)
    return parser


def _inputs(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in ("command", "json")}


def run(argv: Optional[list[str]] = None) -> tuple[int, Report, bool]:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(args.command, _inputs(args))
    try:
        code = COMMANDS[args.command](args, report)
    except PresentationError as exc:
        report.status, report.reason, report.message = "error", exc.code, str(exc)
        code = EXIT_USAGE
    except OSError as exc:
        report.status, report.reason, report.message = "error", "io_error", str(exc)
        code = EXIT_USAGE
    except MasseyError as exc:
        report.status, report.reason, report.message = "refused", exc.code, str(exc)
        if exc.data:
            report.result = {k: v for k, v in exc.data.items()}
        code = EXIT_REFUSED
    return code, report, args.json


def main(argv: Optional[list[str]] = None) -> int:
    code, report, as_json = run(argv)
    sys.stdout.write(report.to_json() if as_json else report.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())

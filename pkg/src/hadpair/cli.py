"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Optional, Sequence

import numpy as np

from .biunitary import depth2_report, vertex_witness
from .cmatrix import diagonal_masa, matrix_to_json, same_span
from .exceptions import NotDistinctError, VerificationError
from .hadamard import PhasePair, parse_angle
from .invariants import (
    LN3,
    circulant_residual,
    entropy_forms,
    full_report,
    interior_angle,
    relative_commutant,
    sw_check,
    zeta,
)
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_phase_flags(sp: argparse.ArgumentParser) -> None:
    for name in ("alpha1", "alpha2", "beta1", "beta2"):
        sp.add_argument(f"--{name}", type=_angle, default=0.0,
                        help="radians, or p/q meaning (p/q)*pi")


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sp.add_argument("--out", metavar="FILE", help="write output to FILE")


def _add_sampling(sp: argparse.ArgumentParser, default: int) -> None:
    sp.add_argument("--samples", type=int, default=default)
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hadpair", description="Invariants of pairs of index-3 Hadamard subfactors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("report", "full invariant report for one pair"),
        ("angle", "interior and Sano-Watatani angles"),
        ("entropy", "relative entropy h"),
        ("commutant", "relative commutant inside M_3"),
        ("witness", "vertex-model witness and principal graph"),
    ):
        sp = sub.add_parser(name, help=help_text)
        _add_phase_flags(sp)
        _add_common(sp)
    sp = sub.add_parser("verify", help="seeded verification suite")
    _add_sampling(sp, 20)
    _add_common(sp)
    sp = sub.add_parser("batch", help="one JSON report per random pair")
    _add_sampling(sp, 10)
    sp.add_argument("--out", metavar="FILE", help="write output to FILE")
    return parser


def _pair(args) -> PhasePair:
    return PhasePair(args.alpha1, args.alpha2, args.beta1, args.beta2)


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, val in obj.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {val}")
    return lines


def _render(obj: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(obj, indent=2)
    return "\n".join(_text(obj))


def _complex(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def cmd_report(args) -> tuple[dict, int]:
    rep = full_report(_pair(args))
    return rep.to_dict(), EXIT_OK if rep.all_passed else EXIT_FAIL


def cmd_angle(args) -> tuple[dict, int]:
    p = _pair(args)
    ang = interior_angle(p)
    sw = sw_check(p)
    return {
        "zeta": _complex(zeta(p)),
        "cos_closed": ang.cos_closed,
        "cos_basis": ang.cos_basis,
        "angle_sw": sw.angle,
        "s0_square_residual": sw.idempotency_residual,
    }, EXIT_OK if ang.residual <= 1e-9 else EXIT_FAIL


def cmd_entropy(args) -> tuple[dict, int]:
    forms = entropy_forms(_pair(args))
    return {
        "entropy_h": forms.matrix,
        "closed_form": forms.closed,
        "entropy_h_log3": forms.matrix / LN3,
        "H_bounds": [forms.matrix, LN3],
    }, EXIT_OK if forms.residual <= 1e-9 else EXIT_FAIL


def cmd_commutant(args) -> tuple[dict, int]:
    p = _pair(args)
    rc = relative_commutant(p)
    span_res = same_span(rc, diagonal_masa(3))
    circ = circulant_residual(p, rc)
    return {
        "dim": rc.dim,
        "diagonal_span_residual": span_res,
        "circulant_residual": circ,
        "basis": [matrix_to_json(b) for b in rc.basis],
    }, EXIT_OK if span_res <= 1e-8 and circ <= 1e-9 else EXIT_FAIL


def cmd_witness(args) -> tuple[dict, int]:
    wit = vertex_witness(_pair(args))
    graph = depth2_report(wit.perm_part)
    return {
        "factor_check": wit.factor_check,
        "factor_residual": wit.factor_residual,
        "perm_part": wit.perm_part.to_dict(),
        "principal_graph": graph.to_dict(),
        "biunitary": matrix_to_json(wit.biunitary),
    }, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    res = run_suite(args.samples, args.seed)
    return res.to_dict(), EXIT_OK if res.passed else EXIT_FAIL


def _batch_lines(args) -> tuple[list[str], int]:
    rng = np.random.default_rng(args.seed)
    lines, code = [], EXIT_OK
    for i in range(args.samples):
        rep = full_report(PhasePair.random(rng))
        if not rep.all_passed:
            code = EXIT_FAIL
        lines.append(json.dumps({"index": i, **rep.to_dict()}))
    return lines, code


COMMANDS: dict[str, Callable] = {
    "report": cmd_report,
    "angle": cmd_angle,
    "entropy": cmd_entropy,
    "commutant": cmd_commutant,
    "witness": cmd_witness,
    "verify": cmd_verify,
}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 0:
        print("hadpair: error: --samples must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "batch":
            lines, code = _batch_lines(args)
            text = "\n".join(lines)
        else:
            obj, code = COMMANDS[args.command](args)
            text = _render(obj, args.json)
    except NotDistinctError as exc:
        print(f"hadpair: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"hadpair: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: basis inspection, lifting, conversion, affine ops, suites.

Identical inputs and seed produce byte-identical output.  Rationals travel as
exact "p/q" strings; ``--decimal`` renders them for reading, never internally.

Exit codes: 0 success, 1 malformed payload, 2 precondition violation,
3 a falsified law (the report or error carries the counterexample).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import InvariantError, PreconditionError, SchemaError
from .jets import (jet_from_dict, jet_minus, jet_plus, jet_to_dict, sform_from_dict,
                   sform_to_dict)
from .prolong import TangentialOp, reconstruct_jet
from .quasicolimit import spec_for_carrier, strong_minus, strong_plus
from .randgen import trial_rng
from .taylor import taylor_from_dict, taylor_to_dict
from .verify import SUITES, run_suite
from .weil import basis_summary, parse_object

REPRESENTATIONS = ("first", "dpow", "dn")


def _read_payload(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}") from exc


def _render_decimals(tree, digits: int):
    if isinstance(tree, dict):
        return {k: _render_decimals(v, digits) for k, v in tree.items()}
    if isinstance(tree, list):
        return [_render_decimals(v, digits) for v in tree]
    if isinstance(tree, str):
        try:
            value = Fraction(tree)
        except (ValueError, ZeroDivisionError):
            return tree
        return f"{float(value):.{digits}f}"
    return tree


def _emit(payload: dict, args) -> None:
    if getattr(args, "decimal", None):
        payload = _render_decimals(payload, args.decimal)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _require(payload, key):
    if not isinstance(payload, dict) or key not in payload:
        raise SchemaError(f"payload missing {key!r}")
    return payload[key]


def _cmd_basis(args) -> int:
    _emit(basis_summary(parse_object(args.object)), args)
    return 0


def _cmd_prolong(args) -> int:
    payload = _read_payload(args.input)
    jet = jet_from_dict(_require(payload, "jet"))
    gamma = taylor_from_dict(_require(payload, "input"))
    out = TangentialOp(args.rep, jet).apply(gamma)
    _emit({"rep": args.rep, "output": taylor_to_dict(out)}, args)
    return 0


def _cmd_convert(args) -> int:
    payload = _read_payload(args.input)
    rep = _require(payload, "rep")
    if rep not in REPRESENTATIONS:
        raise SchemaError(f"unknown representation {rep!r}")
    jet = jet_from_dict(_require(payload, "jet"))
    op = TangentialOp(rep, jet)
    rng = trial_rng(args.seed, 0)
    recovered = reconstruct_jet(rep, op.apply, jet.p, jet.q, jet.order, jet.x, rng)
    _emit({"rep": args.to, "jet": jet_to_dict(recovered)}, args)
    return 0


def _cmd_affine(args) -> int:
    payload = _read_payload(args.input)
    if args.op == "jet-minus":
        j_plus = jet_from_dict(_require(payload, "plus"))
        j_minus = jet_from_dict(_require(payload, "minus"))
        _emit({"form": sform_to_dict(jet_minus(j_plus, j_minus))}, args)
    elif args.op == "jet-plus":
        form = sform_from_dict(_require(payload, "form"))
        jet = jet_from_dict(_require(payload, "jet"))
        _emit({"jet": jet_to_dict(jet_plus(form, jet))}, args)
    elif args.op == "strong-minus":
        g_plus = taylor_from_dict(_require(payload, "plus"))
        g_minus = taylor_from_dict(_require(payload, "minus"))
        spec = spec_for_carrier(g_plus.obj)
        _emit({"tangent": taylor_to_dict(strong_minus(spec, g_plus, g_minus))}, args)
    else:  # strong-plus
        t = taylor_from_dict(_require(payload, "tangent"))
        gamma = taylor_from_dict(_require(payload, "element"))
        spec = spec_for_carrier(gamma.obj)
        _emit({"element": taylor_to_dict(strong_plus(spec, t, gamma))}, args)
    return 0


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, args.trials, args.seed)
    _emit(report.to_dict(), args)
    return 0 if report.all_passed else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetweil",
        description="Exact truncated-polynomial arithmetic and jet lifting")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", default="-", help="JSON payload path or - for stdin")
        p.add_argument("--output", default="-", help="output path or - for stdout")
        p.add_argument("--seed", type=int, default=0, help="PRNG seed")
        p.add_argument("--decimal", type=int, default=0, metavar="K",
                       help="render rationals as K-digit decimals (display only)")

    p_basis = sub.add_parser("basis", help="monomial basis and counts of an object")
    p_basis.add_argument("--object", required=True,
                         help='object expression, e.g. "Dsym(2,2)" or "Wedge(Dpow(2),D)"')
    common(p_basis)
    p_basis.set_defaults(fn=_cmd_basis)

    p_prolong = sub.add_parser("prolong", help="apply a jet lift to an input element")
    p_prolong.add_argument("--rep", required=True, choices=REPRESENTATIONS)
    common(p_prolong)
    p_prolong.set_defaults(fn=_cmd_prolong)

    p_convert = sub.add_parser("convert",
                               help="re-express an operator in another representation")
    p_convert.add_argument("--to", required=True, choices=REPRESENTATIONS)
    common(p_convert)
    p_convert.set_defaults(fn=_cmd_convert)

    p_affine = sub.add_parser("affine", help="difference and translation operations")
    p_affine.add_argument("--op", required=True,
                          choices=("jet-minus", "jet-plus", "strong-minus",
                                   "strong-plus"))
    common(p_affine)
    p_affine.set_defaults(fn=_cmd_affine)

    p_verify = sub.add_parser("verify", help="run a named randomized law suite")
    p_verify.add_argument("--suite", required=True, choices=sorted(SUITES))
    p_verify.add_argument("--trials", type=int, default=50)
    common(p_verify)
    p_verify.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        _emit({"error": {"kind": "schema", "message": str(exc)}}, args)
        return 1
    except PreconditionError as exc:
        _emit({"error": {"kind": "precondition", "message": str(exc)}}, args)
        return 2
    except InvariantError as exc:
        body = {"kind": "invariant", "message": str(exc)}
        if exc.payload is not None:
            body["counterexample"] = exc.payload
        _emit({"error": body}, args)
        return 3


if __name__ == "__main__":
    sys.exit(main())

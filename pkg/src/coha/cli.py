"""Command-line surface: loaders, dispatch, deterministic JSON output.

Exit codes: 0 all good, 1 failed checks, 2 validation errors.  Errors are
machine-readable JSON on stderr.  The truncation order defaults to 8 and
can be overridden by --order or the COHA_ORDER environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .checks import run_checks
from .coalgebra import coproduct
from .config import DEFAULT_ORDER
from .double import commutator_EF
from .extended import phi_k
from .fgl import FormalGroupLaw, additive, connective_k, series_law
from .parser import ParseError, SymmetryError, parse_element, parse_expression
from .pairing import PairingError, pair_full
from .quiver import Quiver
from .series import AT_INFINITY, AT_ZERO, expand_at
from .shuffle import ProductNotRegular, ShuffleElement
from .symbols import series_var
from .yangian import LoopfreeError


class CliError(Exception):
    pass


def load_quiver(path: str, default_weights: str | None = None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        raise CliError(f"cannot read quiver file: {ex}")
    if "vertices" not in doc or not isinstance(doc["vertices"], list):
        raise CliError("quiver file needs a 'vertices' list")
    arrows = doc.get("arrows", [])
    weights = doc.get("weights")
    if weights is None:
        weights = default_weights or "generic"
    if weights not in ("generic", "symmetric-hbar"):
        raise CliError(f"unknown weights {weights!r}")
    try:
        quiver = Quiver(doc["vertices"], arrows, weights=weights)
    except ValueError as ex:
        raise CliError(str(ex))
    if not quiver.check_weight_compatibility():
        raise CliError("weight convention fails the compatibility assumption")
    law = _load_law(doc.get("fgl", "additive"))
    return quiver, law


def _load_law(spec) -> FormalGroupLaw:
    if spec == "additive":
        return additive()
    if spec == "connective-k":
        return connective_k()
    if isinstance(spec, dict) and "series" in spec:
        try:
            return series_law(spec["series"], int(spec.get("order", DEFAULT_ORDER)))
        except (ValueError, TypeError) as ex:
            raise CliError(f"bad series law: {ex}")
    raise CliError(f"unknown fgl specification {spec!r}")


def parse_grade(text: str, quiver: Quiver):
    parts = text.split(",")
    if len(parts) != len(quiver.vertices):
        raise CliError(
            f"grade needs {len(quiver.vertices)} comma-separated entries")
    try:
        return quiver.dim([int(p) for p in parts])
    except ValueError as ex:
        raise CliError(f"bad grade: {ex}")


def element_json(elem: ShuffleElement, quiver: Quiver):
    out = []
    for v in elem.grades():
        num, den = elem.comps[v].render_pair()
        out.append({"grade": {vx: n for vx, n in zip(quiver.vertices, v.vec)},
                    "num": num, "den": den})
    return out


def rf_json(f):
    num, den = f.render_pair()
    return {"num": num, "den": den}


def build_arg_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", help="path to a quiver JSON file")
    common.add_argument("--order", type=int,
                        default=int(os.environ.get("COHA_ORDER", DEFAULT_ORDER)),
                        help="series truncation order (default 8; env COHA_ORDER)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for property-test sampling")
    common.add_argument("--out", help="write the JSON result to this path")
    common.add_argument("--threads", type=int, default=1,
                        help="data-parallel shuffle-term reduction (same output)")

    ap = argparse.ArgumentParser(
        prog="coha",
        description="Exact engine for quiver shuffle algebras: products, "
                    "coproducts, kernel ratios, residue pairings and "
                    "relation checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("star", parents=[common],
                       help="star product of two elements")
    p.add_argument("expr1")
    p.add_argument("grade1")
    p.add_argument("expr2")
    p.add_argument("grade2")

    p = sub.add_parser("coprod", parents=[common],
                       help="comultiplication of an element")
    p.add_argument("expr")
    p.add_argument("grade")

    p = sub.add_parser("phi", parents=[common],
                       help="conjugation kernel ratio phi_k(z, v)")
    p.add_argument("vertex")
    p.add_argument("grade")

    p = sub.add_parser("pair", parents=[common],
                       help="residue pairing of two equal-grade elements")
    p.add_argument("expr1")
    p.add_argument("grade1")
    p.add_argument("expr2")
    p.add_argument("grade2")

    p = sub.add_parser("commutator", parents=[common],
                       help="E/F commutator against its closed form")
    p.add_argument("vertex1")
    p.add_argument("vertex2")

    p = sub.add_parser("series", parents=[common],
                       help="expand an expression in a series variable")
    p.add_argument("expr")
    p.add_argument("--var", default="u")
    p.add_argument("--at", choices=["zero", "infinity"], default="infinity")

    p = sub.add_parser("check", parents=[common],
                       help="run a relation-check suite")
    p.add_argument("suite", choices=["assoc", "bialgebra", "cocycle", "counit",
                                     "pairing", "yangian", "serre", "fgl-twist",
                                     "all"])
    return ap


def _emit(payload, out_path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(message, code=2):
    sys.stderr.write(json.dumps({"error": message}) + "\n")
    return code


def main(argv=None) -> int:
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    try:
        default_weights = "symmetric-hbar" if args.command == "check" and \
            getattr(args, "suite", "") in ("yangian", "serre") else None
        if args.quiver:
            quiver, law = load_quiver(args.quiver, default_weights)
        else:
            quiver, law = Quiver(["1"], [], weights=default_weights or "generic"), \
                additive()

        if args.command == "star":
            g1 = parse_grade(args.grade1, quiver)
            g2 = parse_grade(args.grade2, quiver)
            f = parse_element(args.expr1, g1, quiver, law)
            g = parse_element(args.expr2, g2, quiver, law)
            if args.threads > 1:
                from .shuffle import star_component
                out = {}
                for v1, c1 in f.comps.items():
                    for v2, c2 in g.comps.items():
                        out[v1 + v2] = star_component(c1, v1, c2, v2, quiver, law,
                                                      threads=args.threads)
                prod = ShuffleElement(quiver, law, out, validate=False)
            else:
                prod = f.star(g)
            _emit({"components": element_json(prod, quiver)}, args.out)
            return 0

        if args.command == "coprod":
            g1 = parse_grade(args.grade, quiver)
            elem = parse_element(args.expr, g1, quiver, law)
            _emit({"components": coproduct(elem).render_json()}, args.out)
            return 0

        if args.command == "phi":
            g1 = parse_grade(args.grade, quiver)
            if str(args.vertex) not in quiver.index:
                return _error(f"unknown vertex {args.vertex!r}")
            value = phi_k(quiver, law, args.vertex, g1, series_var("z"))
            _emit({"phi": rf_json(value), "vertex": str(args.vertex),
                   "grade": list(g1.vec)}, args.out)
            return 0

        if args.command == "pair":
            g1 = parse_grade(args.grade1, quiver)
            g2 = parse_grade(args.grade2, quiver)
            f = parse_element(args.expr1, g1, quiver, law)
            g = parse_element(args.expr2, g2, quiver, law)
            value = pair_full(f, g)
            _emit({"value": rf_json(value), "model": "collapsed"}, args.out)
            return 0

        if args.command == "commutator":
            ident = commutator_EF(quiver, args.vertex1, args.vertex2, args.order)
            ok = ident.exact_equal() and ident.series_equal()
            _emit({"relation": ident.label, "lhs": rf_json(ident.lhs),
                   "rhs": rf_json(ident.rhs), "order": ident.order,
                   "status": "pass" if ok else "fail"}, args.out)
            return 0 if ok else 1

        if args.command == "series":
            f = parse_expression(args.expr)
            var = series_var(args.var)
            orient = AT_ZERO if args.at == "zero" else AT_INFINITY
            ser = expand_at(f, var, orient, args.order)
            coeffs = {str(e): rf_json(c) for e, c in sorted(ser.coeffs.items())}
            _emit({"var": args.var, "at": args.at, "order": args.order,
                   "coefficients": coeffs}, args.out)
            return 0

        if args.command == "check":
            reports = run_checks(args.suite, quiver, law, args.order, args.seed)
            _emit(reports, args.out)
            return 0 if all(r["status"] == "pass" for r in reports) else 1

    except (CliError, ParseError, SymmetryError) as ex:
        return _error(str(ex))
    except LoopfreeError as ex:
        return _error(str(ex))
    except (ProductNotRegular, PairingError, ZeroDivisionError) as ex:
        return _error(str(ex))
    return _error("no command")


if __name__ == "__main__":
    sys.exit(main())

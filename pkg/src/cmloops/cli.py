"""Command-line front end.

JSON goes to stdout and a one-line summary to stderr. Exit codes: 0 all
checks passed, 1 a mathematical property was violated, 2 input or usage
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .associators import check_identities
from .config import ENV_BOUND
from .constructions import build, load, save, to_json
from .core import LoopInputError, PreconditionError, TheoremViolation, exponent, require_cml
from .series import series
from .subloops import all_subloops, centre, is_associative_subloop, is_normal, p_components
from .suite import overall_status, run_theorems
from .symbolic import SymbolicCML, classify

EXIT = {"pass": 0, "violation": 1, "input_error": 2}


def _cml(args):
    L = load(args.file)
    require_cml(L)
    return L


def cmd_verify(args):
    L = load(args.file, strict=False)
    rep = L.verification
    payload = {"name": L.name, "order": L.order, **rep.to_dict()}
    summary = "CML verified" if rep.ok else f"{rep.failed_check} fails at {rep.first_failure}"
    return ("pass" if rep.ok else "violation"), payload, summary


def cmd_identities(args):
    L = load(args.file)
    rep = check_identities(L)
    summary = "all identities hold" if rep.ok else f"violated: {', '.join(rep.failed_identities())}"
    return ("pass" if rep.ok else "violation"), rep.to_dict(), summary


def cmd_series(args):
    rep = series(_cml(args), args.kind)
    return "pass", rep.to_dict(), rep.render()


def cmd_subloops(args):
    L = _cml(args)
    rows = []
    for H in all_subloops(L, args.bound):
        assoc = is_associative_subloop(L, H)
        normal = is_normal(L, H)
        if args.normal_only and not normal:
            continue
        if args.nonassociative_only and assoc:
            continue
        rows.append({"elements": H.to_list(), "size": H.size, "normal": normal, "associative": assoc})
    return "pass", {"count": len(rows), "subloops": rows}, f"{len(rows)} subloops"


def cmd_decompose(args):
    L = _cml(args)
    comps = p_components(L)
    payload = {
        "order": L.order,
        "exponent": exponent(L),
        "centre": centre(L).to_list(),
        "p_components": {str(p): c.to_list() for p, c in comps.items()},
    }
    sizes = ", ".join(f"{p}: {c.size}" for p, c in comps.items())
    return "pass", payload, f"p-components {sizes}"


def cmd_theorems(args):
    L = load(args.file)
    results = run_theorems(L, args.bound)
    status = overall_status(results)
    bad = [k for k, v in results.items() if v["status"] == "violation"]
    summary = "all checks pass" if not bad else f"violations: {', '.join(bad)}"
    return status, results, summary


def cmd_make(args):
    L = build(args.construction)
    if args.output:
        save(L, args.output)
        return "pass", {"name": L.name, "order": L.order, "output": args.output}, f"wrote {args.output}"
    return "pass", to_json(L), f"built {L.name} of order {L.order}"


def cmd_classify_symbolic(args):
    K = _cml(argparse.Namespace(file=args.k))
    rep = classify(SymbolicCML(args.d, K), args.bound)
    return "pass", rep.to_dict(), f"prop_2_17={rep.prop_2_17} cor_2_7={rep.cor_2_7}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS,
                        help=f"override the subloop enumeration bound (also ${ENV_BOUND})")

    parser = argparse.ArgumentParser(prog="cmloops", parents=[common],
                                     description="Finite commutative Moufang loop toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check loop and CML axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", parents=[common], help="check the associator identities")
    p.add_argument("file")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("series", parents=[common], help="lower central, derived or upper central series")
    p.add_argument("file")
    p.add_argument("--kind", choices=["lower", "derived", "upper"], required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("subloops", parents=[common], help="enumerate subloops")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--normal-only", action="store_true")
    g.add_argument("--nonassociative-only", action="store_true")
    p.set_defaults(func=cmd_subloops)

    p = sub.add_parser("decompose", parents=[common], help="split into p-components")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("theorems", parents=[common], help="run the full property suite")
    p.add_argument("file")
    p.set_defaults(func=cmd_theorems)

    p = sub.add_parser("make", parents=[common], help="build a catalog loop")
    p.add_argument("--construction", required=True,
                   help="cml81 | cyclic:M | elem3:K | trivial | product:SPEC,SPEC")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_make)

    p = sub.add_parser("classify-symbolic", parents=[common], help="classify D x K symbolically")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", required=True, metavar="FILE")
    p.set_defaults(func=cmd_classify_symbolic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if not hasattr(args, "bound"):
        env = os.environ.get(ENV_BOUND)
        args.bound = int(env) if env else None
    try:
        status, payload, summary = args.func(args)
    except (LoopInputError, PreconditionError, ValueError) as exc:
        status, payload, summary = "input_error", {"error": str(exc)}, f"input error: {exc}"
    except TheoremViolation as exc:
        status = "violation"
        payload = {"error": str(exc), "witness": exc.witness}
        summary = f"violation: {exc}"
    out = {"command": args.command, "status": status, "payload": payload}
    sys.stdout.write(json.dumps(out, sort_keys=True, indent=1, default=_json_default) + "\n")
    sys.stderr.write(f"{args.command}: {summary}\n")
    return EXIT[status]


def _json_default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "to_list"):
        return obj.to_list()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


if __name__ == "__main__":
    sys.exit(main())

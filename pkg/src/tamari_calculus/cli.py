"""Command-line interface.

Exit status: 0 success or true, 1 false / underivable / mismatch, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import calculus as calc
from . import checks, counting, plotting, tamari
from . import lambda_terms as lam
from .syntax import (
    ParseError,
    Sequent,
    formula_to_json,
    frontier,
    parse_formula,
    parse_sequent,
    print_formula,
    print_sequent,
    with_frontier,
)


class UsageError(Exception):
    pass


def _emit(out, text):
    out.write(text if text.endswith("\n") else text + "\n")


def _json(out, obj):
    _emit(out, json.dumps(obj, indent=2))


def cmd_leq(args, out):
    a, b = parse_formula(args.lower), parse_formula(args.upper)
    d = calc.decide_focused(Sequent((a,), b))
    if args.format == "json":
        _json(out, {"leq": d is not None})
    else:
        _emit(out, "true" if d else "false")
    return 0 if d else 1


def cmd_derive(args, out):
    s = parse_sequent(args.sequent)
    d = calc.decide_focused(s)
    if d is None:
        if args.format == "json":
            _json(out, None)
        else:
            _emit(out, f"underivable: {print_sequent(s)}")
        return 1
    if args.format == "json":
        _json(out, calc.derivation_to_json(d))
    else:
        _emit(out, calc.format_derivation(d))
    return 0


def cmd_focus(args, out):
    src = sys.stdin.read() if args.file in (None, "-") else open(args.file).read()
    try:
        d = calc.derivation_from_json(json.loads(src))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot read derivation: {e}") from None
    errors = calc.derivation_errors(d)
    if errors:
        raise UsageError("invalid derivation: " + "; ".join(errors[:3]))
    f = calc.focus(d)
    if args.format == "text":
        _emit(out, calc.format_derivation(f))
    else:
        _json(out, calc.derivation_to_json(f))
    return 0


def cmd_count(args, out):
    rows = counting.count_table(args.to, args.brute_limit)
    ok = all(r["match"] for r in rows)
    if args.format == "json":
        _, r = counting.solve_series(args.to)
        _json(out, {"rows": rows, "R": [list(p) for p in r.by_z_degree]})
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if v is None else v) for k, v in row.items()})
        _emit(out, buf.getvalue())
    else:
        cols = ["n", "series", "closed", "bruteforce", "focused", "match"]
        table = [cols] + [["-" if r[c] is None else str(r[c]) for c in cols] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
        for row in table:
            _emit(out, "  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return 0 if ok else 1


def cmd_hasse(args, out):
    poset = tamari.build_poset(args.n, args.limit)
    if args.format == "csv":
        _emit(out, poset.to_csv())
    elif args.format == "json":
        _json(out, {"n": poset.n, "elements": [print_formula(f) for f in poset.elements],
                    "covers": [list(c) for c in poset.covers]})
    else:
        _emit(out, poset.to_dot())
    return 0


def cmd_lambda_enumerate(args, out):
    terms = lam.enumerate_terms(args.n, closed=args.closed, planar=args.planar,
                                indecomposable=args.indecomposable, normal=args.normal,
                                limit=args.limit)
    if args.format == "json":
        _json(out, [lam.term_to_json(t) for t in terms])
    else:
        for t in terms:
            _emit(out, lam.print_term(t))
    return 0


def cmd_lambda_interval(args, out):
    m = lam.parse_term(args.term)
    a = lam.analyze(m)
    if not (a.closed and a.linear and a.indecomposable and a.planar):
        raise UsageError("term must be closed, linear, indecomposable and planar")
    lo, hi = lam.term_to_interval(m)
    if args.format == "json":
        _json(out, {"binding_tree": formula_to_json(lo), "apptree": formula_to_json(hi),
                    "beta_normal": a.beta_normal})
    else:
        _emit(out, print_sequent(Sequent((lo,), hi)))
    return 0


def cmd_lambda_from_interval(args, out):
    a, b = parse_formula(args.lower), parse_formula(args.upper)
    if frontier(a) != frontier(b) and len(frontier(a)) == len(frontier(b)):
        # labels are placeholders; only the shapes matter here
        b = with_frontier(b, frontier(a))
    try:
        m = lam.interval_to_term(a, b)
    except lam.NotAnInterval as e:
        _emit(out, f"not an interval: {print_formula(a)} |- {print_formula(b)}")
        return 1
    if args.format == "json":
        _json(out, lam.term_to_json(m))
    else:
        _emit(out, lam.print_term(m))
    return 0


def cmd_check(args, out):
    fn, default_n = checks.SUITES[args.suite]
    n = default_n if args.n is None else args.n
    result = fn(n)
    if args.format == "json":
        _json(out, {"name": result.name, "passed": result.passed, "checked": result.checked,
                    "failures": result.failures})
    else:
        _emit(out, result.line())
    return 0 if result.passed else 1


def cmd_report(args, out):
    words = []
    for text in args.term or ():
        words.append(lam.binddiag(lam.parse_term(text)))
    paths = plotting.write_report(args.out, upto=args.to, hasse_n=args.hasse,
                                  brute_limit=args.brute_limit, words=words)
    for p in paths:
        _emit(out, str(p))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "dot", "csv"], default=argparse.SUPPRESS)
    common.add_argument("--limit", type=int, default=argparse.SUPPRESS,
                        help="override the size limit of exhaustive operations")
    common.add_argument("--seed-free", action="store_true", default=argparse.SUPPRESS,
                        help="accepted for compatibility; every operation is deterministic")

    p = argparse.ArgumentParser(prog="tamari", parents=[common],
                                description="Sequent calculus for the Tamari order.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("leq", parents=[common], help="decide A <= B")
    s.add_argument("lower")
    s.add_argument("upper")
    s.set_defaults(func=cmd_leq)

    s = sub.add_parser("derive", parents=[common], help="print the focused derivation of a sequent")
    s.add_argument("sequent", help="e.g. '(p*(q*r))*s |- p*(q*(r*s))'")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("focus", parents=[common], help="focus a derivation given as JSON")
    s.add_argument("file", nargs="?", help="JSON file, or - for stdin")
    s.set_defaults(func=cmd_focus)

    s = sub.add_parser("count", parents=[common], help="interval counts")
    s.add_argument("--to", type=int, default=10)
    s.add_argument("--brute-limit", type=int, default=6)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("hasse", parents=[common], help="Hasse diagram of Y_n")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_hasse)

    s = sub.add_parser("lambda", parents=[common], help="planar lambda terms")
    lsub = s.add_subparsers(dest="lambda_command", required=True)
    e = lsub.add_parser("enumerate", parents=[common])
    e.add_argument("n", type=int)
    for flag in ("closed", "planar", "indecomposable", "normal"):
        e.add_argument(f"--{flag}", action="store_true")
    e.set_defaults(func=cmd_lambda_enumerate)
    e = lsub.add_parser("interval", parents=[common])
    e.add_argument("term")
    e.set_defaults(func=cmd_lambda_interval)
    e = lsub.add_parser("from-interval", parents=[common])
    e.add_argument("lower")
    e.add_argument("upper")
    e.set_defaults(func=cmd_lambda_from_interval)

    s = sub.add_parser("check", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=sorted(checks.SUITES))
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("report", parents=[common], help="write CSV tables and figures")
    s.add_argument("--out", required=True)
    s.add_argument("--to", type=int, default=10)
    s.add_argument("--hasse", type=int, default=3)
    s.add_argument("--brute-limit", type=int, default=6)
    s.add_argument("--term", action="append", help="also draw this term's binding diagram")
    s.set_defaults(func=cmd_report)
    return p


_FORMAT_DEFAULTS = {"hasse": "dot", "focus": "json"}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if not hasattr(args, "format"):
        args.format = _FORMAT_DEFAULTS.get(args.command, "text")
    if not hasattr(args, "limit"):
        args.limit = None
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))
    try:
        return args.func(args, out)
    except (ParseError, UsageError, calc.DerivationError, lam.TermError, tamari.LimitExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

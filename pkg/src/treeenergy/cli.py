"""Command-line interface: ``treeenergy {energy,compare,table1,verify,enumerate}``.

Exit codes: 0 success, 1 computational failure or indecisive verdict,
2 usage error.  Floats are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import comparator as cmp
from .comparator import fmt
from .energy import energy_coulson, energy_eigen
from .polynomials import matching_polynomial
from .quadrature import QuadratureConfig, QuadratureError
from .trees import (
    EdgeListError,
    TreeError,
    build_path,
    build_Ta,
    build_Tb,
    build_Tc,
    enumerate_constrained_trees,
    read_edgelist,
    write_edgelist,
)
from .verify import SUITES, DEFAULT_THEOREM_CAP, rank_trees, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _span(text: str, name: str) -> range:
    """``A:B[:step]``, inclusive of B."""
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise UsageError(f"{name}: expected A:B[:step], got {text!r}") from None
    if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] <= 0) or parts[1] < parts[0]:
        raise UsageError(f"{name}: expected A:B[:step] with A <= B and step > 0, got {text!r}")
    step = parts[2] if len(parts) == 3 else 1
    return range(parts[0], parts[1] + 1, step)


def _cfg(args) -> QuadratureConfig:
    if getattr(args, "tol", None) is not None:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        return QuadratureConfig(args.tol)
    return QuadratureConfig.from_env()


def _csv_out(rows, header, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


# ---------------------------------------------------------------------------

def _select_tree(args):
    chosen = [args.family is not None, args.path is not None, args.edgelist is not None]
    if sum(chosen) != 1:
        raise UsageError("choose exactly one of --family, --path, --edgelist")
    try:
        if args.path is not None:
            return f"P{args.path}", build_path(args.path)
        if args.edgelist is not None:
            with open(args.edgelist) as fh:
                return args.edgelist, read_edgelist(fh)
        if args.delta is None:
            raise UsageError("--family needs --delta")
        if args.family == "tc":
            if args.n is None:
                raise UsageError("--family tc needs --n")
            return f"Tc({args.delta},{args.n})", build_Tc(args.delta, args.n)
        if args.t is None:
            raise UsageError(f"--family {args.family} needs --t")
        build = build_Ta if args.family == "ta" else build_Tb
        return f"{args.family.capitalize()}({args.delta},{args.t})", build(args.delta, args.t)
    except EdgeListError as e:
        raise UsageError(f"{args.edgelist}: {e}") from None
    except TreeError as e:
        raise UsageError(str(e)) from None
    except OSError as e:
        raise UsageError(f"cannot read {args.edgelist}: {e.strerror}") from None


def cmd_energy(args, out) -> int:
    label, tree = _select_tree(args)
    cfg = _cfg(args)
    methods = ["coulson", "eigen"] if args.method == "both" else [args.method]
    results = []
    for m in methods:
        if m == "coulson":
            results.append(energy_coulson(matching_polynomial(tree), cfg))
        else:
            results.append(energy_eigen(tree))
    gap = abs(results[0].value - results[1].value) if len(results) == 2 else None
    if args.format == "json":
        doc = {"tree": label, "n": tree.n, "results": [r.to_dict() for r in results]}
        if gap is not None:
            doc["cross_method_gap"] = gap
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    elif args.format == "csv":
        _csv_out([[label, r.method, fmt(r.value), fmt(r.abs_error_estimate), r.evaluations]
                  for r in results], ["tree", "method", "value", "abs_error", "evaluations"], out)
    else:
        for r in results:
            out.write(f"{label} {r.method} {fmt(r.value)} (+/- {fmt(r.abs_error_estimate)})\n")
        if gap is not None:
            out.write(f"{label} |coulson-eigen| {fmt(gap)}\n")
    return EXIT_OK


def cmd_compare(args, out) -> int:
    if args.delta < 3:
        raise UsageError(f"--delta must be >= 3 (Ta and Tb coincide below), got {args.delta}")
    if (args.t is None) == (args.t_range is None):
        raise UsageError("give exactly one of --t and --t-range")
    ts = [args.t] if args.t is not None else list(_span(args.t_range, "--t-range"))
    if min(ts) < 3:
        raise UsageError("t must be >= 3")
    verdicts = cmp.verdict_sweep([(args.delta, t) for t in ts], _cfg(args),
                                 cross_check=not args.no_cross_check, workers=args.workers)
    if args.format == "json":
        out.write(json.dumps([v.to_dict() for v in verdicts], sort_keys=True) + "\n")
    elif args.format == "csv":
        _csv_out([v.csv_row() for v in verdicts], cmp.VERDICT_CSV_COLUMNS, out)
    else:
        for v in verdicts:
            mark = "" if v.decisive else " INDECISIVE"
            out.write(f"delta={v.delta} t={v.t} {v.winner} margin={fmt(v.margin)} "
                      f"error={fmt(v.margin_error)}{mark}\n")
    return EXIT_OK if all(v.decisive for v in verdicts) else EXIT_FAIL


def cmd_table1(args, out) -> int:
    deltas = _span(args.delta_range, "--delta-range")
    if deltas.start < 3:
        raise UsageError("--delta-range must start at 3 or above")
    cfg = _cfg(args)
    certs = [cmp.table1_entry(d, cfg) for d in deltas]
    if args.check:
        ref = cmp.table1_reference()
        missing = [c.delta for c in certs if c.delta not in ref]
        if missing:
            raise UsageError(f"no published value for delta {missing}")
        rows = [(c.delta, c.integral_value, ref[c.delta], abs(c.integral_value - ref[c.delta]))
                for c in certs]
        if args.format == "json":
            out.write(json.dumps([dict(zip(("delta", "f_value", "f_paper", "abs_diff"), r))
                                  for r in rows], sort_keys=True) + "\n")
        else:
            _csv_out([[d, fmt(f), fmt(p), fmt(e)] for d, f, p, e in rows],
                     ["delta", "f_value", "f_paper", "abs_diff"], out)
        return EXIT_OK if all(r[3] <= 5e-5 for r in rows) else EXIT_FAIL
    if args.format == "json":
        out.write(json.dumps([c.to_dict() for c in certs], sort_keys=True) + "\n")
    else:
        _csv_out([c.csv_row() for c in certs], cmp.BOUND_CSV_COLUMNS, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    kw = {}
    if args.cap is not None:
        if args.suite != "theorem11":
            raise UsageError("--cap applies only to --suite theorem11")
        kw["cap"] = args.cap
    rep = run_suite(args.suite, **kw)
    if args.format == "json":
        out.write(rep.to_json() + "\n")
    else:
        for case, exp, got in rep.failures:
            out.write(f"FAIL {case}: expected {exp}, got {got}\n")
        out.write(f"{rep.suite_name}: {rep.cases_run} cases, {len(rep.failures)} failures\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_enumerate(args, out) -> int:
    try:
        trees = sorted(enumerate_constrained_trees(args.n, args.delta), key=lambda t: t.canonical)
    except TreeError as e:
        raise UsageError(str(e)) from None
    if args.rank:
        pairs = [(e, t) for e, t in rank_trees(trees)]
    else:
        pairs = [(None, t) for t in trees]
    if args.format == "json":
        doc = [{"n": t.n, "edges": [list(e) for e in t.edges], **({"energy": e} if e is not None else {})}
               for e, t in pairs]
        out.write(json.dumps(doc, sort_keys=True) + "\n")
        return EXIT_OK
    for i, (e, t) in enumerate(pairs):
        head = f"# tree {i} n={t.n}" + (f" energy={fmt(e)}" if e is not None else "")
        out.write(head + "\n" + write_edgelist(t) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treeenergy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt_kw = dict(choices=["plain", "csv", "json"], default="plain")

    e = sub.add_parser("energy", help="energy of one tree")
    e.add_argument("--family", choices=["ta", "tb", "tc"])
    e.add_argument("--delta", type=int)
    e.add_argument("--t", type=int)
    e.add_argument("--n", type=int, help="order for --family tc")
    e.add_argument("--path", type=int)
    e.add_argument("--edgelist")
    e.add_argument("--method", choices=["coulson", "eigen", "both"], default="coulson")
    e.add_argument("--tol", type=float)
    e.add_argument("--format", **fmt_kw)

    c = sub.add_parser("compare", help="Ta vs Tb verdicts")
    c.add_argument("--delta", type=int, required=True)
    c.add_argument("--t", type=int)
    c.add_argument("--t-range", dest="t_range")
    c.add_argument("--tol", type=float)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--no-cross-check", action="store_true",
                   help="skip the full-tree energy cross-check")
    c.add_argument("--format", **fmt_kw)

    t = sub.add_parser("table1", help="the f(delta) bound integrals")
    t.add_argument("--delta-range", dest="delta_range", default="8:67")
    t.add_argument("--check", action="store_true", help="compare with the published column")
    t.add_argument("--tol", type=float)
    t.add_argument("--format", choices=["csv", "json"], default="csv")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    v.add_argument("--cap", type=int, help=f"theorem11 order cap (default {DEFAULT_THEOREM_CAP}; 16 is slow)")
    v.add_argument("--format", choices=["plain", "json"], default="plain")

    n = sub.add_parser("enumerate", help="trees with exactly two vertices of max degree")
    n.add_argument("--n", type=int, required=True)
    n.add_argument("--delta", type=int, required=True)
    n.add_argument("--rank", action="store_true", help="sort by energy, descending")
    n.add_argument("--format", choices=["plain", "json"], default="plain")
    return p


COMMANDS = {"energy": cmd_energy, "compare": cmd_compare, "table1": cmd_table1,
            "verify": cmd_verify, "enumerate": cmd_enumerate}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        sys.stderr.write(f"treeenergy {args.command}: {e}\n")
        return EXIT_USAGE
    except (QuadratureError, cmp.CrossCheckError, ArithmeticError, ValueError) as e:
        sys.stderr.write(f"treeenergy {args.command}: {e}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

import argparse
import json
import os
import sys
import warnings

# Ensure we can import from the root workspace
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../../')))
from proflow import __version__
from proflow.src.closed_forms import CLOSED_KINDS, FlowKind, classical_flow_eval
from proflow.src.elliptic_curves import CurveE, lambda_at_infinity, point_to_json, torsion_table
from proflow.src.errors import ProflowError
from proflow.src.exact_arith import to_canonical_text
from proflow.src.expressions import KINDS, vector_field
from proflow.src.finite_fields import (
    cardinality_checks, enumerate_summary, genus0_point_count, table3_lines,
)
from proflow.src.plotting import SPAN, plot_sign_grid, plot_vector_field
from proflow.src.series_engine import fn_rows, flow_series, table1_rows
from proflow.src.special_functions import (
    Pi_const, hyper_W, kummer_solution, pi3, pi3_gamma, sm_cm, sp_cp,
)
from proflow.src.symbolic_identities import run_identities
from proflow.verify import suite

DEBUG = False

# Suppress numpy floating-point warnings near removable singularities
warnings.filterwarnings("ignore", category=RuntimeWarning)

SPECIAL_FNS = ("sm", "cm", "sp", "cp", "W", "W1", "Winf")


def fmt_complex(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def fmt_cnum(value):
    if value.inf:
        return "inf"
    return f"{fmt_complex(value.value)} err {value.err:.3g}"


def _curve_arg(c):
    return c.real if c.imag == 0 else c


# --- tables ---

def torsion_lines(c):
    E = CurveE(_curve_arg(c))
    lines = [f"# {E}, cbrt(c) = {fmt_complex(E.cbrt_c)}", "name order point"]
    for name, order, P in torsion_table(E):
        if P.is_finite():
            x, y = P.affine()
            where = f"({fmt_complex(x)}, {fmt_complex(y)})"
        else:
            where = "(" + " : ".join(fmt_complex(v) for v in P.coords) + ")"
        lines.append(f"{name} {order} {where}")
    for name, P in zip(("O", "Q3", "2Q3"), lambda_at_infinity(E)):
        lines.append(f"Lambda({name}) {P}")
    return lines


def cmd_tables(args):
    if args.table == "w":
        lines = table1_rows(args.max or 15)
    elif args.table == "f":
        lines = fn_rows(args.max or 6)
    elif args.table == "skew":
        lines = suite.skew_text().splitlines()
    elif args.table == "torsion":
        lines = torsion_lines(args.c)
    else:
        lines = table3_lines(args.p)
    for line in lines:
        print(line)
    return 0


# --- series ---

def cmd_series(args):
    series = flow_series(vector_field(args.kind, args.N), not args.second, args.depth)
    coord = "v" if args.second else "u"
    for i in range(1, series.depth + 1):
        print(f"{coord}{i}(x,y) = {to_canonical_text(series.layer(i))}")
    return 0


# --- specialfn ---

def special_value(fn, u):
    if fn in ("sm", "cm"):
        return sm_cm(u)[fn == "cm"]
    if fn in ("sp", "cp"):
        return sp_cp(u)[fn == "cp"]
    branch = {"W": "0", "W1": "1", "Winf": "inf"}[fn]
    return hyper_W(u) if branch == "0" else kummer_solution(branch, u)


def cmd_specialfn(args):
    if args.action == "constants":
        for name, value in (("pi3", pi3()), ("Pi", Pi_const()), ("pi3_gamma", pi3_gamma())):
            print(f"{name} = {value.re:.12f}")
        return 0
    u = complex(args.re, args.im)
    print(f"{args.fn}({fmt_complex(u)}) = {fmt_cnum(special_value(args.fn, u))}")
    return 0


# --- flow ---

def cmd_flow(args):
    if args.action == "eval":
        kind = FlowKind.parse(args.kind, args.N)
        value = classical_flow_eval(kind, args.x, args.y)
        if not value.defined:
            print(f"[!] {kind} is undefined at ({fmt_complex(args.x)}, {fmt_complex(args.y)})", flush=True)
            return 1
        print(f"u = {fmt_cnum(value.u)}")
        print(f"v = {fmt_cnum(value.v)}")
        return 0
    return cmd_plot_sign(args)


# --- verify ---

def cmd_verify(args):
    if args.bless:
        suite.bless()
    suites = suite.SUITES if args.suite == "all" else (args.suite,)
    results = suite.run_suites(suites, args.seed, args.points)
    report = suite.build_report(results, args.seed, args.points)
    if args.report:
        suite.write_report(report, args.report)
    else:
        print(json.dumps(report, indent=2))
    if report["pass"]:
        print(f"[+] All {len(results)} checks passed.", flush=True)
        return 0
    print("[!] Verification failed.", flush=True)
    return 1


# --- curve ---

def cmd_curve(args):
    if args.action == "torsion":
        if args.json:
            E = CurveE(_curve_arg(args.c))
            rows = [{"name": name, "order": order, "point": point_to_json(P)} for name, order, P in torsion_table(E)]
            print(json.dumps(rows, indent=2))
            return 0
        for line in torsion_lines(args.c):
            print(line)
        return 0
    results = suite.run_curve_suite(args.seed, (_curve_arg(args.c),))
    for r in results:
        status = "ok" if r.passed else "FAIL"
        print(f"[{'+' if r.passed else '!'}] {r.flow} {r.check}: {status} residual {r.max_residual}", flush=True)
    return 0 if all(r.passed for r in results) else 1


# --- identities ---

def cmd_identities(args):
    rows = run_identities(args.seed, verbose=DEBUG)
    entries = []
    ok = True
    for name, verdict, terms, worst in rows:
        expected = name != "quaq-plain"
        ok = ok and verdict == expected
        entries.append({"identity": name, "verdict": verdict, "expected": expected,
                        "certificate_terms": terms,
                        "max_spot_residual": None if worst is None else float(f"{worst:.12g}")})
        print(f"[{'+' if verdict == expected else '!'}] {name}: verdict {verdict}, "
              f"certificate terms {terms}", flush=True)
    if args.all:
        for r in suite.structural_identity_checks():
            ok = ok and r.passed
            entries.append({"identity": f"{r.flow}:{r.check}", "verdict": r.passed, "expected": True,
                            "certificate_terms": None, "max_spot_residual": None})
            print(f"[{'+' if r.passed else '!'}] {r.flow} {r.check}: {r.passed}", flush=True)
    if args.report:
        report = {"schema": suite.SCHEMA_VERSION, "tool-version": __version__, "seed": args.seed,
                  "entries": entries, "pass": ok}
        suite.write_report(report, args.report)
    return 0 if ok else 1


# --- ff ---

def cmd_ff(args):
    if args.action == "table":
        for line in table3_lines(args.p):
            print(line)
        return 0
    if args.action == "enum1d":
        summary = enumerate_summary(args.p)
        if args.json:
            print(json.dumps(summary, ensure_ascii=False, indent=2))
        else:
            print(f"p = {summary['p']}: {summary['count']} flows ({summary['nonsingular']} nonsingular), "
                  f"{len(summary['degenerate'])} degenerate PrTE tables")
        return 0
    if args.action == "cardinality":
        rows = cardinality_checks(args.p)
        for row in rows:
            print(f"{row['flow']} on {row['space']}: {row['cardinality']} points "
                  f"(expected {row['expected']}), bijective {row['bijective']}")
        return 0 if all(r["bijective"] and r["cardinality"] == r["expected"] for r in rows) else 1
    print(f"genus0 p = {args.p}: {genus0_point_count(args.p)} affine points")
    return 0


# --- plot ---

def _report_written(paths):
    for path in paths:
        print(f"[>] Wrote {path}", flush=True)
    return 0


def cmd_plot_sign(args):
    paths = plot_sign_grid(args.kind, args.res, args.out, args.svg, tuple(args.range), args.N)
    return _report_written(paths)


def cmd_plot(args):
    if args.action == "vector-field":
        paths = plot_vector_field(args.kind, args.n, args.out, args.svg, tuple(args.range), args.N,
                                  orbit_level=args.orbit)
        return _report_written(paths)
    return cmd_plot_sign(args)


# --- Parser ---

def _grid_flags(p, default_out, kinds):
    p.add_argument("--kind", default="Lambda", choices=kinds)
    p.add_argument("--N", type=int, default=None, help="Level for phi_N")
    p.add_argument("--range", type=float, nargs=2, default=list(SPAN), metavar=("LO", "HI"))
    p.add_argument("--out", default=default_out)
    p.add_argument("--svg", default=None, help="Also render an SVG to this path")


def build_parser():
    parser = argparse.ArgumentParser(prog="proflow", description="Projective Flow Lab")
    parser.add_argument("--version", action="version", version=f"proflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="Emit printed tables")
    p.add_argument("table", choices=("w", "f", "skew", "torsion", "ff"))
    p.add_argument("--max", type=int, default=None)
    p.add_argument("--c", type=complex, default=1 + 0j)
    p.add_argument("--p", type=int, default=5)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("series", help="Homogeneous layers of a flow series")
    p.add_argument("--kind", default="Lambda", choices=KINDS)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--second", action="store_true", help="Expand the second coordinate")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("specialfn", help="Dixonian and hypergeometric functions")
    p.add_argument("action", choices=("eval", "constants"))
    p.add_argument("--fn", default="sm", choices=SPECIAL_FNS)
    p.add_argument("--re", type=float, default=0.0)
    p.add_argument("--im", type=float, default=0.0)
    p.set_defaults(func=cmd_specialfn)

    p = sub.add_parser("flow", help="Evaluate a closed-form flow")
    p.add_argument("action", choices=("eval", "grid"))
    _grid_flags(p, "sign.csv", CLOSED_KINDS)
    p.add_argument("--x", type=complex, default=0j)
    p.add_argument("--y", type=complex, default=0j)
    p.add_argument("--res", type=int, default=200)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("verify", help="Run verification suites")
    p.add_argument("suite", choices=("all",) + suite.SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--report", default=None)
    p.add_argument("--bless", action="store_true", help="Regenerate golden files first")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curve", help="The curves xy(x - y) = c")
    p.add_argument("action", choices=("torsion", "verify"))
    p.add_argument("--c", type=complex, default=1 + 0j)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("identities", help="Quotient-ring identities")
    p.add_argument("action", choices=("run",))
    p.add_argument("--all", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("ff", help="Flows over finite fields")
    p.add_argument("action", choices=("table", "enum1d", "cardinality", "genus0"))
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ff)

    p = sub.add_parser("plot", help="Vector-field and sign-region data")
    p.add_argument("action", choices=("vector-field", "sign-grid"))
    _grid_flags(p, "plot.csv", KINDS)
    p.add_argument("--n", type=int, default=40, help="Arrows per side")
    p.add_argument("--res", type=int, default=200, help="Sign-grid cells per side")
    p.add_argument("--orbit", type=float, default=None, help="Overlay the orbit xy(x - y) = ORBIT")
    p.set_defaults(func=cmd_plot)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "plot" and args.action == "sign-grid" and args.kind not in CLOSED_KINDS:
            parser.error(f"sign-grid needs a closed-form kind, got '{args.kind}'")
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except ProflowError as exc:
        print(f"[!] {exc}", flush=True)
        return 1
    except OSError as exc:
        print(f"[!] I/O failure: {exc}", flush=True)
        return 1


if __name__ == "__main__":
    sys.exit(run())

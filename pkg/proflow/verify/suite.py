# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Ensure we can import from the root workspace
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../../')))
from proflow import __version__
from proflow.src.closed_forms import c0_vanishing, curve_point, lambda_eval
from proflow.src.elliptic_curves import (
    CurveE, c12_relations, ec_add, projective_gap, random_point, torsion_orders_check,
    translation_q3_check,
)
from proflow.src.errors import IdentityMismatchError, PoleError, ProflowError, UndefinedEvaluationError
from proflow.src.expressions import XY, X, Y, vector_field
from proflow.src.finite_fields import (
    cardinality_checks, complete_phi_p, enumerate_summary, iteration_audit, table3_lines,
)
from proflow.src.series_engine import (
    GOLDEN_DEPTH, fn_rows, period_series_check, series_cube_identity, skew_csv_rows,
    standard_orbit_checks, symmetric_family_dimension, table1_rows,
)
from proflow.src.special_functions import (
    OMEGA, PI3, addition_check_sm, addition_check_sp, cm_addition_residual, cp_addition_residual,
    pi3, Pi_const, pq_relation_check, printed_series_check, sm_cm, sp_cp,
)
from proflow.src.symbolic_identities import (
    T_quasi_flow_check, a4_rep, bc_pairs_enumerate, e_quasi_data, pelican_field, permutation_rep,
    phi_n_quasi_data, quasi_flow_pre_check, rational_flow_criterion, run_identities,
    sigma4_prime_field_check, sigma_rep, superflow_invariance, superflow_Q1,
)
from proflow.src.verifier import (
    FLOWS, SAMPLE_LIMIT, boundary_residual, iteration_residual, orbit_invariance, pde_residual,
    prte_residual, sample_points, vector_field_agreement,
)

DEBUG = False
SCHEMA_VERSION = 2
THREADS = max(1, int(os.environ.get("PROFLOW_THREADS", os.cpu_count() or 1)))
GOLDEN_DIR = Path(__file__).resolve().parent.parent / "golden"

# --- Tolerances ---
TOL_PRTE = 1e-8
TOL_BOUNDARY = 1e-4
TOL_VF = 1e-4
TOL_PDE = 1e-5
TOL_ORBIT = 1e-8
TOL_ITERATION = 1e-8
TOL_SPECIAL = 1e-10
TOL_CONST = 1e-11
TOL_CURVE = 1e-7
TOL_TRANSLATION = 1e-8
TOL_C0 = 1e-8
ADDITION_BOUND = 5.0
NEAR_CURVE_X = (-2.0, -0.5, 0.5)
NEAR_CURVE_SHIFT = 1 + 1e-6
DERIVATIVE_POINTS = 20
ITERATION_FLOWS = ("Lambda", "exp", "tan", "e", "t")
CURVES = (1, 2 + 1j)

PI3_PRINTED = 5.299916250856
PI_PRINTED = 5.513701576710
BC_PRINTED = {(-2, -1), (-5, -1), (-1, -2), (-5, -2), (-2, -5),
              (-1, -5), (-1, -3), (-3, -3), (-3, -1), (-2, -2)}


@dataclass(frozen=True)
class CheckResult:
    suite: str
    flow: str
    check: str
    points: int
    max_residual: float
    tolerance: float
    passed: bool

    def to_json(self):
        residual = None if self.max_residual is None else float(f"{self.max_residual:.12g}")
        return {
            "suite": self.suite,
            "flow": self.flow,
            "check": self.check,
            "points": self.points,
            "max_residual": residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _residual_check(suite, flow, check, residuals, tol):
    worst = max(residuals) if residuals else None
    passed = bool(residuals) and worst <= tol
    return CheckResult(suite, flow, check, len(residuals), worst, tol, passed)


def _boolean_check(suite, flow, check, ok):
    return CheckResult(suite, flow, check, 1, None, None, bool(ok))


def _recorded(suite, flow, check, points, value):
    return CheckResult(suite, flow, check, points, value, None, True)


def _debug(line):
    if DEBUG:
        print(f"[DEBUG] {line}", flush=True)


# --- Flows ---

def _collect(measure, points):
    """Apply ``measure`` to each point, skipping points an intermediate cannot reach."""
    out = []
    for point in points:
        try:
            out.append(measure(*point))
        except (UndefinedEvaluationError, PoleError):
            _debug(f"skipped {point}")
        except IdentityMismatchError as exc:
            print(f"[!] {exc}", flush=True)
            out.append(math.inf)
    return out


def _iteration_bounded(flow, x, y, n):
    """True when phi^k(x) for k <= n and phi(nx) stay within SAMPLE_LIMIT."""
    chain = [(x, y)]
    try:
        for _ in range(n):
            value = flow(*chain[-1])
            if not value.defined:
                return False
            chain.append((value.u.value, value.v.value))
        target = flow(n * x, n * y)
    except PoleError:
        return False
    if not target.defined:
        return False
    chain.append((target.u.value, target.v.value))
    return all(max(abs(a), abs(b)) <= SAMPLE_LIMIT for a, b in chain[1:])


def flow_checks(name, flow, seed, count):
    """Every numeric check of one catalogued flow on ``count`` sampled points."""
    rng = np.random.default_rng([seed, sorted(FLOWS).index(name)])
    points = sample_points(flow, rng, count, real=not flow.unramified)
    near = points[:DERIVATIVE_POINTS]
    results = [
        _residual_check("flows", name, "prte", _collect(
            lambda x, y, z: prte_residual(flow, x, y, z).re, points), TOL_PRTE),
        _residual_check("flows", name, "boundary", _collect(
            lambda x, y, z: boundary_residual(flow, x, y).re, near), TOL_BOUNDARY),
    ]
    if flow.vf is not None:
        first = lambda a, b: flow(a, b).u.value
        results.append(_residual_check("flows", name, "vector_field", _collect(
            lambda x, y, z: vector_field_agreement(flow, x, y).re, near), TOL_VF))
        results.append(_residual_check("flows", name, "pde", _collect(
            lambda x, y, z: pde_residual(first, x, y, flow.vf).re, near), TOL_PDE))
    if flow.orbit is not None:
        results.append(_residual_check("flows", name, "orbit", _collect(
            lambda x, y, z: orbit_invariance(flow, flow.orbit, x, y, z).re, points), TOL_ORBIT))
    if name in ITERATION_FLOWS:
        for n in (2, 3):
            bounded = [q for q in points if _iteration_bounded(flow, q[0], q[1], n)][:DERIVATIVE_POINTS]
            results.append(_residual_check("flows", name, f"iteration_{n}", _collect(
                lambda x, y, z, n=n: iteration_residual(flow, x, y, n).re, bounded), TOL_ITERATION))
    for r in results:
        _debug(f"{name}/{r.check}: {r.max_residual} over {r.points}")
    return results


def run_flow_suite(seed, count, names=None):
    names = sorted(FLOWS) if names is None else list(names)
    with ThreadPoolExecutor(max_workers=THREADS) as pool:
        batches = list(pool.map(lambda n: flow_checks(n, FLOWS[n], seed, count), names))
    return [r for batch in batches for r in batch]


# --- Series and golden files ---

def golden_text(name):
    return (GOLDEN_DIR / name).read_text(encoding="utf-8")


def table1_text():
    return "\n".join(table1_rows(15)) + "\n"


def skew_text():
    lines = ["index,numerator,denominator"]
    lines += [f"{i},{num},{den}" for i, num, den in skew_csv_rows(GOLDEN_DEPTH)]
    return "\n".join(lines) + "\n"


def table3_text():
    return "\n".join(table3_lines(5)) + "\n"


GOLDEN_EMITTERS = {
    "table1.txt": table1_text,
    "skew.csv": skew_text,
    "table3.txt": table3_text,
}


def bless():
    """Regenerate every golden file from the current code."""
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for name, emit in GOLDEN_EMITTERS.items():
        (GOLDEN_DIR / name).write_text(emit(), encoding="utf-8")
        print(f"[>] Wrote {GOLDEN_DIR / name}", flush=True)


def run_series_suite():
    results = [
        _boolean_check("series", "Lambda", "table1_golden", table1_text() == golden_text("table1.txt")),
        _boolean_check("series", "Lambda", "skew_golden", skew_text() == golden_text("skew.csv")),
        _boolean_check("series", "Lambda", "cube_identity", series_cube_identity(GOLDEN_DEPTH)),
        _boolean_check("series", "Lambda", "period_identities", period_series_check(12)),
        _boolean_check("series", "Lambda", "fn_stabilized", len(fn_rows(6)) == 6),
    ]
    for kind, pde_ok, orbit_ok in standard_orbit_checks(10):
        results.append(_boolean_check("series", kind, "pde_layers", pde_ok))
        results.append(_boolean_check("series", kind, "orbit_layers", orbit_ok))
    results.append(_boolean_check("series", "pq", "pq_relation", pq_relation_check(8)))
    for n in range(1, 7):
        results.append(_recorded("series", f"w{n}", "symmetric_family_dimension", symmetric_family_dimension(n), None))
    return results


# --- Special functions ---

def _block_points(rng, count):
    """u in three adjacent period parallelograms, away from the poles."""
    points = []
    while len(points) < count:
        s, t = rng.uniform(0, 3), rng.uniform(0, 1)
        u = PI3 * (s + t * complex(-0.5, 3 ** 0.5 / 2))
        if not sm_cm(u)[0].inf and abs(sm_cm(u)[0].value) < 1e3:
            points.append(u)
    return points


def _bounded(u):
    """sm, cm, sp and cp all finite and at most ADDITION_BOUND in modulus at u."""
    try:
        values = (*sm_cm(u), *sp_cp(u))
    except PoleError:
        return False
    return all(not x.inf and abs(x.value) <= ADDITION_BOUND for x in values)


def _addition_pairs(rng, count):
    pairs = []
    while len(pairs) < count:
        u, v = _block_points(rng, 2)
        if _bounded(u) and _bounded(v) and _bounded(u + v):
            pairs.append((u, v))
    return pairs


def _near_curve_size(curve):
    """Largest finite |lambda| just off a curve where it blows up."""
    sizes = []
    for x in NEAR_CURVE_X:
        a, b = curve_point(curve, x)
        try:
            value = lambda_eval(a * NEAR_CURVE_SHIFT, b)
        except PoleError:
            continue
        if not value.inf:
            sizes.append(abs(value.value))
    return max(sizes, default=None)


def run_specialfn_suite(seed, count):
    rng = np.random.default_rng([seed, 101])
    us = _block_points(rng, count)
    pairs = _addition_pairs(rng, count)

    def cube(u):
        s, c = sm_cm(u)
        return abs(s.value**3 + c.value**3 - 1)

    def sixth(u):
        S, C = sp_cp(u)
        return abs(S.value * C.value * (S.value - C.value) - 1) / (1 + abs(S.value) ** 3)

    def period(u, step):
        base = sm_cm(u)[0].value
        shifted = sm_cm(u + step)[0].value
        return abs(base - shifted) / (1 + abs(base))

    def pair(fn):
        out = []
        for u, v in pairs:
            try:
                out.append(fn(u, v).re)
            except PoleError:
                _debug(f"degenerate addition denominator at {u}, {v}")
        return out

    return [
        _residual_check("specialfn", "sm/cm", "fermat_cubic", [cube(u) for u in us], TOL_SPECIAL),
        _residual_check("specialfn", "sp/cp", "sixth_relation", [sixth(u) for u in us], TOL_SPECIAL),
        _residual_check("specialfn", "sm", "periodicity", [period(u, PI3) for u in us], TOL_SPECIAL),
        _residual_check("specialfn", "sm", "periodicity_omega", [period(u, PI3 * OMEGA) for u in us], TOL_SPECIAL),
        _residual_check("specialfn", "sm", "addition", pair(addition_check_sm), TOL_SPECIAL),
        _residual_check("specialfn", "cm", "addition", pair(cm_addition_residual), TOL_SPECIAL),
        _residual_check("specialfn", "sp", "addition", pair(addition_check_sp), TOL_SPECIAL),
        _residual_check("specialfn", "cp", "addition", pair(cp_addition_residual), TOL_SPECIAL),
        _residual_check("specialfn", "pi3", "constant", [abs(pi3().re - PI3_PRINTED)], TOL_CONST),
        _residual_check("specialfn", "Pi", "constant", [abs(Pi_const().re - PI_PRINTED)], TOL_CONST),
        _residual_check("specialfn", "C0", "vanishing",
                        [c0_vanishing(x) for x in (-2.0, -0.5, 0.5, 0.8)], TOL_C0),
        _boolean_check("specialfn", "sm/cm", "printed_series", printed_series_check()),
        _recorded("specialfn", "C1", "lambda_near", len(NEAR_CURVE_X), _near_curve_size("C1")),
        _recorded("specialfn", "Cinf", "lambda_near", len(NEAR_CURVE_X), _near_curve_size("Cinf")),
    ]


# --- Elliptic curves ---

def run_curve_suite(seed, curves=CURVES):
    results = []
    for index, c in enumerate(curves):
        rng = np.random.default_rng([seed, 200 + index])
        E = CurveE(c)
        label = f"E({c})"
        results.append(_boolean_check("curve", label, "torsion_orders", torsion_orders_check(E)))
        results.append(_boolean_check("curve", label, "c12_relations", c12_relations(E)))
        assoc = []
        for _ in range(30):
            P, Q, R = (random_point(E, rng) for _ in range(3))
            lhs = ec_add(E, ec_add(E, P, Q), R)
            rhs = ec_add(E, P, ec_add(E, Q, R))
            assoc.append(projective_gap(lhs, rhs))
        results.append(_residual_check("curve", label, "associativity", assoc, TOL_CURVE))
        shifts = []
        while len(shifts) < 20:
            try:
                shifts.append(translation_q3_check(E, random_point(E, rng)))
            except PoleError:
                continue
        results.append(_residual_check("curve", label, "lambda_q3_translation", shifts, TOL_TRANSLATION))
    return results


# --- Quotient rings, superflows, arithmetic ---

def structural_identity_checks():
    """Superflow invariance, quasi-flow data, rational levels and the BC scan."""
    results = []
    results.append(_boolean_check("identities", "Lambda", "six_fold", superflow_invariance(
        [vector_field("Lambda").w, vector_field("Lambda").r], sigma_rep())))
    results.append(_boolean_check("identities", "Q1", "permutation_invariance",
                                  superflow_invariance(superflow_Q1(3), permutation_rep(3))))
    results.append(_boolean_check("identities", "pelican", "a4_invariance",
                                  superflow_invariance(pelican_field(), a4_rep())))
    results.append(_boolean_check("identities", "sigma4'", "invariance", all(sigma4_prime_field_check())))
    U, U_hat, _ = phi_n_quasi_data(3)
    results.append(_boolean_check("identities", "phi_3", "quasi_flow", all(
        quasi_flow_pre_check(u, vector_field("phi_N", 3), X * Y**2, XY.one) for u in (U, U_hat))))
    results.append(_boolean_check("identities", "e", "quasi_flow",
                                  quasi_flow_pre_check(e_quasi_data(), vector_field("e"), X + Y, XY.one)))
    results.append(_boolean_check("identities", "T", "quasi_flow", T_quasi_flow_check()))
    levels = [rational_flow_criterion(vector_field("phi_N", N)) for N in range(2, 7)]
    results.append(_boolean_check("identities", "phi_N", "rational_level", levels == list(range(2, 7))))
    results.append(_boolean_check("identities", "BC", "ten_pairs", set(bc_pairs_enumerate()) == BC_PRINTED))
    return results


def run_identity_suite(seed):
    results = []
    for name, verdict, terms, worst in run_identities(seed, verbose=DEBUG):
        expected = name != "quaq-plain"
        results.append(CheckResult("identities", name, "exact_verdict", terms, worst, None,
                                   verdict == expected))
    return results + structural_identity_checks()


# --- Finite fields ---

def run_ff_suite():
    results = []
    for p in (2, 3, 5):
        summary = enumerate_summary(p)
        results.append(CheckResult("ff", f"p={p}", "1d_flow_count", summary["count"], None, None,
                                   summary["count"] == p + 2 and summary["unclassified"] == 0))
        results.append(_recorded("ff", f"p={p}", "degenerate_prte_tables", None, len(summary["degenerate"])))
    results.append(_boolean_check("ff", "phi_5", "table3_golden", table3_text() == golden_text("table3.txt")))
    results.append(_boolean_check("ff", "phi_5", "iteration_audit", not iteration_audit(complete_phi_p(5).table, 5)))
    for p in (3, 5):
        for row in cardinality_checks(p):
            results.append(CheckResult("ff", f"{row['flow']}@{p}", "bijection", row["cardinality"], None, None,
                                       row["bijective"] and row["cardinality"] == row["expected"]))
    return results


# --- Report ---

SUITES = ("flows", "series", "specialfn", "curve", "identities", "ff")


def run_suites(suites, seed, count):
    results = []
    for suite in suites:
        print(f"[*] Running {suite} suite...", flush=True)
        try:
            if suite == "flows":
                batch = run_flow_suite(seed, count)
            elif suite == "series":
                batch = run_series_suite()
            elif suite == "specialfn":
                batch = run_specialfn_suite(seed, count)
            elif suite == "curve":
                batch = run_curve_suite(seed)
            elif suite == "identities":
                batch = run_identity_suite(seed)
            elif suite == "ff":
                batch = run_ff_suite()
            else:
                raise ProflowError(f"unknown suite '{suite}'")
        except ProflowError as exc:
            print(f"[!] {suite} suite aborted: {exc}", flush=True)
            batch = [_boolean_check(suite, "-", "aborted", False)]
        failed = [r for r in batch if not r.passed]
        for r in failed:
            print(f"[!] FAIL {r.suite}/{r.flow}/{r.check}: residual {r.max_residual} (tol {r.tolerance})", flush=True)
        results.extend(batch)
    return results


def build_report(results, seed, count):
    return {
        "schema": SCHEMA_VERSION,
        "tool-version": __version__,
        "seed": seed,
        "points": count,
        "entries": [r.to_json() for r in results],
        "pass": all(r.passed for r in results),
    }


def write_report(report, path):
    path = Path(path)
    path.write_text(json.dumps(report, indent=2, sort_keys=False) + "\n")
    print(f"[>] Report written to {path}", flush=True)
    return path


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="Run every verification suite.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--points", type=int, default=100)
    parser.add_argument("--report", default="proflow_report.json")
    parser.add_argument("--bless", action="store_true", help="Regenerate golden files first")
    args = parser.parse_args()

    if args.bless:
        bless()
    results = run_suites(SUITES, args.seed, args.points)
    report = build_report(results, args.seed, args.points)
    write_report(report, args.report)
    if report["pass"]:
        print(f"[+] All {len(results)} checks passed.", flush=True)
        sys.exit(0)
    print("[!] Verification failed.", flush=True)
    sys.exit(1)

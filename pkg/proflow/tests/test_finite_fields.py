# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest
import sys
import os
from pathlib import Path

# Ensure we can import from the root workspace
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../../')))
from proflow.src.errors import CompletionError, DomainError
from proflow.src.finite_fields import (
    INF, REFERENCE_POINTS, SPHERE_INFINITY, CompletedPoint, _derive, cardinality_checks, classify_1d_flow,
    complete_phi_p, completed_plane, degenerate_1d_flows, enumerate_1d_flows, enumerate_summary, field_points,
    flow_on_finite_space, genus0_point_count, is_bijection, is_invertible_flow, iteration_audit, mobius, pf_add,
    pf_div, pf_mul, pf_neg, pf_sub, phi_p_direct, phi_p_eval, prte_survivors, regular_1d_flows, satisfies_prte,
    table3_lines,
)

GOLDEN = Path(__file__).resolve().parent.parent / "golden"


class TestFiniteFields(unittest.TestCase):
    # 1. Partial arithmetic
    def test_001_add(self): self.assertEqual(pf_add(3, 4, 5), 2)
    def test_002_add_inf(self): self.assertIs(pf_add(3, INF, 5), INF)
    def test_003_inf_plus_inf(self): self.assertIsNone(pf_add(INF, INF, 5))
    def test_004_neg_inf(self): self.assertIs(pf_neg(INF, 5), INF)
    def test_005_sub(self): self.assertEqual(pf_sub(1, 3, 5), 3)
    def test_006_zero_times_inf(self): self.assertIsNone(pf_mul(0, INF, 5))
    def test_007_times_inf(self): self.assertIs(pf_mul(2, INF, 5), INF)
    def test_008_div(self): self.assertEqual(pf_div(1, 2, 5), 3)
    def test_009_div_by_zero(self): self.assertIs(pf_div(3, 0, 5), INF)
    def test_010_zero_over_zero(self): self.assertIsNone(pf_div(0, 0, 5))
    def test_011_inf_over_inf(self): self.assertIsNone(pf_div(INF, INF, 5))
    def test_012_over_inf(self): self.assertEqual(pf_div(2, INF, 5), 0)
    def test_013_inf_over(self): self.assertIs(pf_div(INF, 3, 5), INF)
    def test_014_undefined_propagates(self): self.assertIsNone(pf_add(pf_div(0, 0, 5), 1, 5))

    # 2. One-dimensional flows
    def test_015_mobius_identity(self):
        self.assertTrue(all(mobius(0, x, 5) == x for x in field_points(5)))

    def test_016_mobius_pole(self): self.assertIs(mobius(1, 4, 5), INF)
    def test_017_mobius_at_inf(self): self.assertEqual(mobius(2, INF, 5), 3)

    def test_018_regular_satisfy(self):
        for label, f in regular_1d_flows(5).items():
            self.assertTrue(satisfies_prte(f, 5), label)

    def test_019_constant_fails(self):
        self.assertFalse(satisfies_prte({x: 1 for x in field_points(5)}, 5))

    def test_020_flow_counts(self):
        for p, count in ((2, 4), (3, 5), (5, 7)):
            self.assertEqual(len(enumerate_1d_flows(p)), count, f"p = {p}")

    def test_021_all_found_satisfy(self):
        self.assertTrue(all(satisfies_prte(f, 3) for f in enumerate_1d_flows(3)))

    def test_022_degenerate_example(self):
        f = {x: 0 for x in range(3)}
        f[INF] = INF
        self.assertTrue(satisfies_prte(f, 3))
        self.assertFalse(is_invertible_flow(f, 3))
        self.assertEqual(classify_1d_flow(f, 3), "unclassified")
        self.assertNotIn(f, enumerate_1d_flows(3))
        self.assertIn(f, degenerate_1d_flows(3))
        self.assertIn({"0": "0", "1": "0", "2": "0", "∞": "∞"}, enumerate_summary(3)["degenerate"])

    def test_023_classify(self):
        self.assertEqual(classify_1d_flow({x: mobius(2, x, 5) for x in field_points(5)}, 5), "mobius(2)")

    def test_024_nonsingular(self): self.assertEqual(enumerate_summary(3)["nonsingular"], 3)

    def test_024a_every_flow_classified(self):
        for p in (2, 3, 5):
            summary = enumerate_summary(p)
            self.assertEqual(summary["unclassified"], 0, f"p = {p}")
            self.assertEqual(sorted(summary["labels"]), sorted(regular_1d_flows(p)), f"p = {p}")

    def test_024b_survivors_partition(self):
        for p in (2, 3, 5):
            self.assertEqual(len(enumerate_1d_flows(p)) + len(degenerate_1d_flows(p)), len(prte_survivors(p)))

    def test_024c_inverse_is_negated_conjugate(self):
        f = {x: mobius(3, x, 5) for x in field_points(5)}
        self.assertTrue(is_invertible_flow(f, 5))
        self.assertTrue(is_invertible_flow({x: INF for x in field_points(5)}, 5))
        swapped = dict(f)
        swapped[0], swapped[1] = f[1], f[0]
        self.assertFalse(is_invertible_flow(swapped, 5))

    def test_025_search_limit(self):
        with self.assertRaises(DomainError):
            enumerate_1d_flows(11)

    def test_026_not_prime(self):
        with self.assertRaises(DomainError):
            enumerate_1d_flows(4)

    # 3. Completed points
    def test_027_str(self): self.assertEqual(str(CompletedPoint(0, INF)), "0•∞")
    def test_028_scale(self): self.assertEqual(CompletedPoint(3, INF).scale(2, 5), CompletedPoint(1, INF))
    def test_029_scale_infinity(self): self.assertEqual(SPHERE_INFINITY.scale(3, 5), SPHERE_INFINITY)

    def test_030_scale_by_p(self):
        with self.assertRaises(DomainError):
            CompletedPoint(1, 2).scale(5, 5)

    # 4. The completed phi_p
    def test_031_table3_golden(self):
        golden = (GOLDEN / "table3.txt").read_text(encoding="utf-8").splitlines()
        self.assertEqual(table3_lines(5), golden)

    def test_032_torus_bijection(self):
        table = complete_phi_p(5).table
        self.assertEqual(len(table), 36)
        self.assertTrue(is_bijection(table))

    def test_033_torus_audit(self):
        for p in (5, 13):
            self.assertEqual(iteration_audit(complete_phi_p(p).table, p), [], f"p = {p}")

    def test_034_derivations_logged(self):
        for p in (5, 13):
            done = complete_phi_p(p)
            direct = sum(phi_p_direct(p, x, y) is not None for x in range(p) for y in range(p))
            self.assertEqual(len(done.named), len(REFERENCE_POINTS), f"p = {p}")
            self.assertEqual(len(done.derived), (p + 1) ** 2 - direct - len(REFERENCE_POINTS), f"p = {p}")

    def test_035_sphere(self):
        done = complete_phi_p(3)
        self.assertEqual(len(done.table), 10)
        self.assertTrue(is_bijection(done.table))
        self.assertEqual(done.table[CompletedPoint(2, 2)], SPHERE_INFINITY)
        self.assertEqual(done.table[SPHERE_INFINITY], CompletedPoint(1, 1))

    def test_036_sphere_audit(self):
        for p in (3, 7):
            self.assertEqual(iteration_audit(complete_phi_p(p).table, p), [], f"p = {p}")

    def test_037_even_prime(self):
        with self.assertRaises(DomainError):
            complete_phi_p(2)

    def test_038_eval_direct(self): self.assertEqual(phi_p_eval(5, 0, 0), CompletedPoint(0, 0))
    def test_039_eval_completed(self): self.assertEqual(phi_p_eval(5, 0, 1), CompletedPoint(1, INF))
    def test_040_eval_corner(self): self.assertEqual(phi_p_eval(5, 4, 4), SPHERE_INFINITY)
    def test_041_eval_infinity(self): self.assertEqual(phi_p_eval(5, INF, INF), CompletedPoint(1, 1))

    # 5. Printed bijections
    def test_042_cardinalities(self):
        for p in (3, 5, 7, 11, 13):
            for row in cardinality_checks(p):
                self.assertEqual(row["cardinality"], row["expected"], f"{row}")
                self.assertTrue(row["bijective"], f"{row}")

    def test_043_space_names(self):
        spaces = {row["flow"]: row["space"] for row in cardinality_checks(5)}
        self.assertEqual(spaces["phi_p"], "torus")
        self.assertEqual({row["flow"]: row["space"] for row in cardinality_checks(7)}["phi_p"], "sphere")

    def test_044_cardinality_range(self):
        for p in (2, 17):
            with self.assertRaises(DomainError):
                cardinality_checks(p)

    def test_045_unknown_flow(self):
        with self.assertRaises(DomainError):
            flow_on_finite_space("cubic", 5)

    def test_046_genus0(self): self.assertEqual([genus0_point_count(p) for p in (5, 7, 11)], [2, 6, 10])

    # 6. Completion by derivation
    def test_047_named_cells(self):
        named = set(complete_phi_p(5).named)
        self.assertEqual(named, {"phi(0•1) = 1•∞", "phi(0•2) = ∞•1", "phi(1•3) = 0•∞",
                                 "phi(3•1) = ∞•0", "phi(4•4) = ∞•∞"})

    def test_048_defined_cells_alone_derive_nothing(self):
        table = {P: phi_p_direct(5, P.a, P.b) for P in completed_plane(5) if P.is_finite()}
        table = {P: v for P, v in table.items() if v is not None}
        derived = []
        _derive(table, 5, completed_plane(5), derived)
        self.assertEqual(derived, [])

    def test_049_conflict_raises(self):
        table = dict(complete_phi_p(5).table)
        table[CompletedPoint(3, 1)] = CompletedPoint(0, INF)
        with self.assertRaises(CompletionError):
            _derive(table, 5, completed_plane(5), [])


if __name__ == "__main__":
    unittest.main()

# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest
import sys
import os

import numpy as np

# Ensure we can import from the root workspace
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../../')))
from proflow.src.closed_forms import point_on_level
from proflow.src.elliptic_curves import (
    O, Q3, TWO_Q3, CurveE, ProjPoint, add_forms_agree, c12_relations, ec_add, ec_double, ec_mul,
    ec_neg, ec_sub, flow_point, lambda_at_infinity, lambda_preserves_curve, order3_map_check,
    point_order, projective_gap, random_point, same_point, torsion_orders_check, torsion_point,
    torsion_table, translation_q3_check, weierstrass_inverse, weierstrass_map, weierstrass_residual,
)
from proflow.src.errors import DomainError, OffCurveError, PoleError

CURVES = (1, 2 + 1j, -3)


class TestEllipticCurves(unittest.TestCase):
    def assertSamePoint(self, P, Q, tol=1e-8, what=""):
        gap = projective_gap(P, Q)
        self.assertLessEqual(gap, tol, f"{what}: {P} vs {Q} (gap {gap:.3g})")

    def random_points(self, E, count, seed=11):
        rng = np.random.default_rng(seed)
        return [random_point(E, rng) for _ in range(count)]

    def small_level_point(self):
        E = CurveE(0.1)
        return E, E.point(0.8, point_on_level(0.8, 0.1, -1))

    # 1. Points and curves
    def test_001_zero_point(self):
        with self.assertRaises(DomainError):
            ProjPoint.of(0, 0, 0)

    def test_002_singular_curve(self):
        with self.assertRaises(DomainError):
            CurveE(0)

    def test_003_wrong_root(self):
        with self.assertRaises(DomainError):
            CurveE(1, cbrt_c=2)

    def test_004_off_curve(self):
        with self.assertRaises(OffCurveError):
            CurveE(1).point(1, 1)

    def test_005_off_curve_is_domain(self): self.assertTrue(issubclass(OffCurveError, DomainError))

    def test_006_affine_at_infinity(self):
        with self.assertRaises(PoleError):
            O.affine()

    def test_007_json(self):
        P = self.random_points(CurveE(2 + 1j), 1)[0]
        self.assertSamePoint(ProjPoint.from_json(P.to_json()), P, 0, "json")

    def test_008_scaling(self): self.assertTrue(same_point(ProjPoint.of(2, 4, 6), ProjPoint.of(1, 2, 3)))
    def test_009_base_points(self):
        E = CurveE(1)
        self.assertTrue(all(E.on_curve(P) for P in (O, Q3, TWO_Q3)))

    # 2. Group law
    def test_010_neutral(self):
        E = CurveE(1)
        for P in self.random_points(E, 3):
            self.assertSamePoint(ec_add(E, P, O), P, what="P + O")
            self.assertSamePoint(ec_add(E, O, P), P, what="O + P")

    def test_011_inverse(self):
        E = CurveE(2 + 1j)
        for P in self.random_points(E, 3):
            self.assertSamePoint(ec_add(E, P, ec_neg(P)), O, what="P - P")

    def test_012_commutative(self):
        E = CurveE(-3)
        P, Q = self.random_points(E, 2)
        self.assertSamePoint(ec_add(E, P, Q), ec_add(E, Q, P), what="P + Q")

    def test_013_associative(self):
        for c in CURVES:
            E = CurveE(c)
            P, Q, R = self.random_points(E, 3, seed=5)
            left = ec_add(E, ec_add(E, P, Q), R)
            right = ec_add(E, P, ec_add(E, Q, R))
            self.assertSamePoint(left, right, 1e-6, f"c = {c}")

    def test_014_sum_on_curve(self):
        E = CurveE(2 + 1j)
        P, Q = self.random_points(E, 2)
        self.assertTrue(E.on_curve(ec_add(E, P, Q)))

    def test_015_double(self):
        E = CurveE(1)
        P = self.random_points(E, 1)[0]
        self.assertSamePoint(ec_double(E, P), ec_sub(E, ec_mul(E, 3, P), P), 1e-6, "2P")

    def test_016_raw_form(self):
        E = CurveE(1)
        P, Q = self.random_points(E, 2, seed=7)
        self.assertTrue(add_forms_agree(E, P, Q))

    def test_017_order3_map(self):
        E = CurveE(2 + 1j)
        for P in self.random_points(E, 3):
            self.assertLess(order3_map_check(E, P), 1e-9, f"P = {P}")

    def test_018_q3_order(self): self.assertEqual(point_order(CurveE(1), Q3), 3)
    def test_019_triple_q3(self): self.assertSamePoint(ec_mul(CurveE(1), 3, Q3), O, what="3 Q3")

    # 3. Weierstrass form
    def test_020_weierstrass_on_curve(self):
        E = CurveE(2 + 1j)
        for P in self.random_points(E, 3) + [Q3, TWO_Q3]:
            self.assertLess(weierstrass_residual(E, weierstrass_map(E, P)), 1e-8, f"P = {P}")

    def test_021_weierstrass_inverse(self):
        E = CurveE(-3)
        P = self.random_points(E, 1)[0]
        self.assertSamePoint(weierstrass_inverse(E, weierstrass_map(E, P)), P, 1e-12, "inverse")

    # 4. Torsion
    def test_022_orders(self):
        for c in CURVES:
            self.assertTrue(torsion_orders_check(CurveE(c)), f"c = {c}")

    def test_023_table(self):
        names = [name for name, _, _ in torsion_table(CurveE(1))]
        self.assertEqual(names, ["O", "Q2", "Q3", "2Q3", "Q6", "5Q6"])

    def test_024_table_on_curve(self):
        E = CurveE(2 + 1j)
        self.assertTrue(all(E.on_curve(P) for _, _, P in torsion_table(E)))

    def test_025_q6_five_times(self):
        E = CurveE(1)
        self.assertSamePoint(ec_mul(E, 5, torsion_point(E, "Q6")), torsion_point(E, "5Q6"), 1e-6, "5 Q6")

    def test_026_double_q6(self):
        E = CurveE(1)
        self.assertSamePoint(ec_double(E, torsion_point(E, "Q6")), Q3, 1e-9, "2 Q6")

    def test_027_unknown_torsion(self):
        with self.assertRaises(DomainError):
            torsion_point(CurveE(1), "Q4")

    def test_028_c12(self):
        for c in (1, 2 + 1j):
            self.assertTrue(c12_relations(CurveE(c)), f"c = {c}")

    def test_029_c12_rejects_off_curve(self):
        self.assertFalse(c12_relations(CurveE(1), q6w=ProjPoint.of(1, 1, 1)))

    # 5. The flow on E(c)
    def test_030_flow_preserves_curve(self):
        E, P = self.small_level_point()
        self.assertLess(lambda_preserves_curve(E, P), 1e-8)

    def test_031_translation_q3(self):
        E, P = self.small_level_point()
        self.assertLess(translation_q3_check(E, P), 1e-7)

    def test_032_flow_point_finite(self): self.assertTrue(flow_point(*self.small_level_point()).is_finite())

    def test_033_at_infinity_on_curve(self):
        for c in (1, 2 + 1j):
            E = CurveE(c)
            for P in lambda_at_infinity(E):
                self.assertTrue(E.on_curve(P), f"c = {c}: {P}")


if __name__ == "__main__":
    unittest.main()

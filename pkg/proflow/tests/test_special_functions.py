# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest
import sys
import os

from sympy import QQ

# Ensure we can import from the root workspace
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../../')))
from proflow.src.errors import DomainError, PoleError
from proflow.src.special_functions import (
    CNum, OMEGA, PI3, PI_CONST, S3_ACTIONS, W_integral, W_mpmath, W_range_check,
    addition_check_sm, addition_check_sp, cm, cm_addition_residual, cp_addition_residual,
    derivative, dixon_coefficients, dixon_hyper_relation, hyper_W, kummer_ode_residual,
    kummer_solution, lattice_coord, pi3, pi3_gamma, Pi_const, pq_relation_check, pq_series,
    printed_series_check, q_point, s3_action, sm, sm_cm, sp_cp,
)


class TestSpecialFunctions(unittest.TestCase):
    def assertClose(self, a, b, tol, what=""):
        a, b = complex(a), complex(b)
        self.assertLessEqual(abs(a - b), tol, f"{what}: {a} vs {b}")

    # 1. CNum
    def test_001_negative_err(self):
        with self.assertRaises(DomainError):
            CNum(1.0, 0.0, -1.0)

    def test_002_of_infinite(self): self.assertTrue(CNum.of(complex("inf")).inf)
    def test_003_divide_by_zero(self): self.assertTrue((CNum(1.0) / CNum(0.0)).inf)
    def test_004_divide_by_infinity(self): self.assertEqual((CNum(2.0) / CNum.infinity()).value, 0)

    def test_005_inf_over_inf(self):
        with self.assertRaises(DomainError):
            CNum.infinity() / CNum.infinity()

    def test_006_error_propagates(self): self.assertGreater((CNum(1.0, 0.0, 1e-3) * 2).err, 1e-3)
    def test_007_str(self): self.assertEqual(str(CNum(1.0)), "1+0i +/- 0")
    def test_008_str_inf(self): self.assertEqual(str(CNum.infinity()), "inf")

    # 2. Constants
    def test_009_pi3(self): self.assertClose(pi3().re, 5.299916250856, 1e-11, "pi3")
    def test_010_Pi(self): self.assertClose(Pi_const().re, 5.513701576710, 1e-11, "Pi")
    def test_011_pi3_gamma(self): self.assertClose(pi3_gamma().re, pi3().re, 1e-12, "gamma form")
    def test_012_pi3_sixth(self): self.assertClose(pi3().re**6 / 27, 820.824437079556, 1e-8, "pi3^6/27")
    def test_013_module_constants(self): self.assertClose(PI_CONST, PI3**3 / 27, 1e-15, "Pi")

    # 3. W and the Kummer solutions
    def test_014_W_zero(self): self.assertEqual(hyper_W(0).value, 1)

    def test_015_W_pole(self):
        with self.assertRaises(PoleError):
            hyper_W(1)

    def test_016_pfaff(self):
        x = -2.0
        self.assertClose(hyper_W(x).value, hyper_W(x / (x - 1)).value / (1 - x), 1e-12, "Pfaff")

    def test_017_W_mpmath(self):
        for x in (-5.0, -1.0, 0.5, 0.9, 0.5 + 0.5j, 3 + 1j, 0.95 + 0.1j):
            self.assertClose(hyper_W(x).value, W_mpmath(x).value, 1e-11, f"W({x})")

    def test_018_W_integral(self):
        for x in (-5.0, -1.0, 0.9):
            self.assertClose(hyper_W(x).value, W_integral(x).value, 1e-9, f"integral W({x})")

    def test_019_W_integral_domain(self):
        with self.assertRaises(DomainError):
            W_integral(1.5)

    def test_020_ode(self): self.assertLess(kummer_ode_residual("0", 0.5), 1e-6)

    def test_021_ode_branches(self):
        for which in ("0", "1", "inf"):
            r = kummer_ode_residual(which, 0.3 + 0.4j)
            self.assertLess(r, 1e-6, f"W_{which} ODE residual {r}")

    def test_022_W1_at_one(self): self.assertClose(kummer_solution("1", 1).value, -1, 1e-15, "W1(1)")
    def test_023_Winf_at_infinity(self): self.assertEqual(kummer_solution("inf", CNum.infinity()).value, 0)
    def test_024_Winf_large(self): self.assertLess(abs(kummer_solution("inf", 1e6).value), 2e-6)

    def test_025_W0_domain(self):
        with self.assertRaises(DomainError):
            kummer_solution("0", 2.0)

    def test_026_W1_domain(self):
        with self.assertRaises(DomainError):
            kummer_solution("1", -1.0)

    def test_027_unknown_branch(self):
        with self.assertRaises(DomainError):
            kummer_solution("2", 0.5)

    def test_028_s3_swap(self):
        f = lambda z: hyper_W(z).value
        self.assertClose(s3_action(f, "(0inf)", -3), kummer_solution("inf", -3).value, 1e-10, "(0inf)")

    def test_029_s3_elements(self): self.assertEqual(len(S3_ACTIONS), 4)

    def test_030_s3_unknown(self):
        with self.assertRaises(DomainError):
            s3_action(lambda z: z, "(012)", 0.5)

    def test_031_range(self):
        monotone, low, high = W_range_check()
        self.assertTrue(monotone, "W^3 x (1 - x) is not increasing")
        self.assertLess(abs(low + PI_CONST), 0.05, f"low end {low}")
        self.assertLess(abs(high - PI_CONST), 0.05, f"high end {high}")

    # 4. sm and cm
    def test_032_origin(self):
        s, c = sm_cm(0)
        self.assertEqual((s.value, c.value), (0, 1))

    def test_033_printed_series(self): self.assertTrue(printed_series_check())
    def test_034_taylor_head(self): self.assertEqual(dixon_coefficients()[0][4], QQ(-4, 24))
    def test_035_cm_zero(self): self.assertClose(cm(PI3 / 3).value, 0, 1e-12, "cm(pi3/3)")

    def test_036_special_values(self):
        for (a, b), expected in (((1, 0), 1), ((0, 1), OMEGA), ((2, 2), OMEGA**2)):
            self.assertClose(sm(q_point(a, b)).value, expected, 1e-10, f"sm(q_{a}{b})")

    def test_037_pole(self): self.assertTrue(sm(q_point(2, 0)).inf)

    def test_038_fermat_cubic(self):
        for u in (0.7 + 0.3j, 2.5 + 1j, -4.1 + 2.2j):
            s, c = sm_cm(u)
            residual = abs(s.value**3 + c.value**3 - 1) / (1 + abs(s.value)**3)
            self.assertLess(residual, 1e-10, f"u = {u}")

    def test_039_periods(self):
        u = 0.4 + 0.25j
        self.assertClose(sm(u + PI3).value, sm(u).value, 1e-10, "real period")
        self.assertClose(sm(u + PI3 * OMEGA).value, sm(u).value, 1e-10, "complex period")

    def test_040_negation(self):
        u = 0.35 - 0.2j
        s, c = sm_cm(u)
        self.assertClose(sm(-u).value + s.value / c.value, 0, 1e-10, "sm(-u)")
        self.assertClose(cm(-u).value * c.value, 1, 1e-10, "cm(-u) cm(u)")

    def test_041_derivatives(self):
        u = 0.4 + 0.2j
        s, c = sm_cm(u)
        self.assertClose(derivative(lambda t: sm(t).value, u), c.value**2, 1e-8, "sm'")
        self.assertClose(derivative(lambda t: cm(t).value, u), -s.value**2, 1e-8, "cm'")

    def test_042_lattice_reduced(self):
        coord = lattice_coord(3 * PI3 + 0.2 - 2 * PI3 * OMEGA)
        self.assertTrue(0 <= coord.s < 1 and 0 <= coord.t < 1, f"{coord}")

    # 5. sp and cp
    def test_043_sixth_relation(self):
        S, C = sp_cp(0.5)
        self.assertClose(S.value * C.value * (S.value - C.value), 1, 1e-12, "sp cp (sp - cp)")

    def test_044_sp_even(self):
        z = 0.4 + 0.1j
        self.assertClose(sp_cp(-z)[0].value, sp_cp(z)[0].value, 1e-12, "sp(-z)")

    def test_045_sp_derivative(self):
        S, C = sp_cp(0.6)
        d = derivative(lambda t: sp_cp(t)[0].value, 0.6)
        self.assertClose(d, -S.value**2 + 2 * S.value * C.value, 1e-6, "sp'")

    # 6. Addition laws
    def test_046_addition_origin(self): self.assertLess(addition_check_sm(0, 0).re, 1e-15)
    def test_047_addition_real(self): self.assertLess(addition_check_sm(0.3, 0.5).re, 1e-10)
    def test_048_addition_complex(self): self.assertLess(addition_check_sm(0.2 + 0.1j, -0.4).re, 1e-10)
    def test_049_cm_addition(self): self.assertLess(cm_addition_residual(0.3, 0.5).re, 1e-10)
    def test_050_sp_addition(self): self.assertLess(addition_check_sp(0.3, 0.5).re, 1e-10)
    def test_051_cp_addition(self): self.assertLess(cp_addition_residual(0.2 + 0.1j, 0.6).re, 1e-10)

    def test_052_addition_at_pole(self):
        with self.assertRaises(PoleError):
            addition_check_sm(q_point(2, 0), 0.1)

    # 7. Hypergeometric parametrization
    def test_053_relation_origin(self): self.assertEqual(dixon_hyper_relation(0)[0], 0)

    def test_054_relation(self):
        for x in (-1.0, 0.5):
            self.assertLess(max(dixon_hyper_relation(x)), 1e-9, f"x = {x}")

    def test_055_relation_domain(self):
        with self.assertRaises(DomainError):
            dixon_hyper_relation(1.0)

    # 8. Level-4 pair
    def test_056_p_u7(self): self.assertEqual(pq_series(2)[1][7], QQ(1, 5))
    def test_057_q_u7(self): self.assertEqual(pq_series(2)[0][7], QQ(17, 75))
    def test_058_only_3_mod_4(self): self.assertTrue(all(m % 4 == 3 for m in pq_series(6)[1]))
    def test_059_relation(self): self.assertTrue(pq_relation_check(8))

    def test_060_pq_rejects_zero(self):
        with self.assertRaises(DomainError):
            pq_series(0)


if __name__ == "__main__":
    unittest.main()

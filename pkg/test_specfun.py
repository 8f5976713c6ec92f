"""
Unit tests for the special-function kernel

Values are checked against mpmath at 30 digits and against the classical
reductions (half-order Bessel functions, the duplication formula, the
defining integral of Dawson's function).
"""

import math
import unittest

import mpmath
import numpy as np

import specfun
from specfun import DomainError


def rel(a, b):
    return abs(float(a) - float(b)) / abs(float(b))


class TestGammaBeta(unittest.TestCase):
    """Gamma and beta functions."""

    def setUp(self):
        mpmath.mp.dps = 30

    def test_gamma_half(self):
        self.assertLess(rel(specfun.gamma(0.5).value, math.sqrt(math.pi)), 1e-14)

    def test_gamma_against_mpmath(self):
        for x in (0.3, 1.7, 4.25, -0.5):
            self.assertLess(rel(specfun.gamma(x).value, mpmath.gamma(x)), 1e-13, x)

    def test_gamma_pole(self):
        with self.assertRaises(DomainError):
            specfun.gamma(-2.0)
        with self.assertRaises(DomainError):
            specfun.gamma(0.0)

    def test_duplication_formula(self):
        # Gamma(2x) = 2^(2x-1) Gamma(x) Gamma(x + 1/2) / sqrt(pi)
        for x in (0.3, 0.8, 1.7):
            lhs = specfun.gamma(2 * x).value
            rhs = 2 ** (2 * x - 1) * specfun.gamma(x).value * specfun.gamma(x + 0.5).value / math.sqrt(math.pi)
            self.assertLess(rel(lhs, rhs), 1e-12)

    def test_beta(self):
        value = specfun.beta(0.25, 0.375)
        self.assertLess(rel(value.value, mpmath.beta(0.25, 0.375)), 1e-13)
        self.assertGreater(value.abs_err_bound, 0.0)

    def test_beta_domain(self):
        with self.assertRaises(DomainError):
            specfun.beta(-0.5, 1.0)


class TestBessel(unittest.TestCase):
    """Bessel J, I, K and their products."""

    def setUp(self):
        mpmath.mp.dps = 30

    def test_half_order_j(self):
        for x in (0.7, 3.2, 10.0):
            self.assertLess(rel(specfun.bessel_j(0.5, x).value,
                                math.sqrt(2 / (math.pi * x)) * math.sin(x)), 1e-12)
            self.assertLess(rel(specfun.bessel_j(-0.5, x).value,
                                math.sqrt(2 / (math.pi * x)) * math.cos(x)), 1e-12)

    def test_half_order_k(self):
        for x in (0.2, 1.0, 7.5):
            expected = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
            self.assertLess(rel(specfun.bessel_k(0.5, x).value, expected), 1e-12)
            self.assertLess(rel(specfun.bessel_k(-0.5, x).value, expected), 1e-12)

    def test_against_mpmath(self):
        self.assertLess(rel(specfun.bessel_j(0.3, 2.4).value, mpmath.besselj(0.3, 2.4)), 1e-12)
        self.assertLess(rel(specfun.bessel_i(1.5, 0.8).value, mpmath.besseli(1.5, 0.8)), 1e-12)
        self.assertLess(rel(specfun.bessel_k(0.3, 2.0).value, mpmath.besselk(0.3, 2.0)), 1e-12)

    def test_ik_product(self):
        for nu, x in ((0.25, 3.0), (-0.25, 0.5), (0.0, 40.0)):
            expected = mpmath.besseli(nu, x) * mpmath.besselk(nu, x)
            self.assertLess(rel(specfun.bessel_ik_product(nu, x).value, expected), 1e-12)

    def test_ik_product_kernel_large_argument(self):
        # I K ~ 1/(2x)
        x = np.array([1e9, 1e12])
        np.testing.assert_allclose(specfun.ik_product_kernel(0.5, x), 0.5 / x, rtol=1e-8)

    def test_j_at_zero(self):
        self.assertEqual(specfun.bessel_j(0.0, 0.0).value, 1.0)
        self.assertEqual(specfun.bessel_j(1.0, 0.0).value, 0.0)
        with self.assertRaises(DomainError):
            specfun.bessel_j(-0.5, 0.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            specfun.bessel_k(0.5, -1.0)
        with self.assertRaises(DomainError):
            specfun.bessel_j(-1.5, 1.0)
        with self.assertRaises(DomainError):
            specfun.bessel_i(0.0, math.nan)

    def test_zeros(self):
        for nu in (0.0, 1.0, 0.25):
            zeros = specfun.bessel_j_zeros(nu, 5)
            for k, root in enumerate(zeros, start=1):
                self.assertLess(rel(root, mpmath.besseljzero(nu, k)), 1e-12)

    def test_negative_integer_order(self):
        # J_-n = (-1)^n J_n
        self.assertEqual(specfun.j_leading_order(-1.0), 1.0)
        self.assertEqual(specfun.j_leading_order(-0.5), -0.5)
        self.assertEqual(specfun.j_leading_order(2.0), 2.0)
        self.assertEqual(specfun.bessel_j(-1.0, 0.0).value, 0.0)
        self.assertAlmostEqual(specfun.bessel_j(-1.0, 1.3).value, -specfun.bessel_j(1.0, 1.3).value, places=15)
        np.testing.assert_allclose(specfun.bessel_j_zeros(-1.0, 4), specfun.bessel_j_zeros(1.0, 4), rtol=1e-14)

    def test_half_order_zeros(self):
        np.testing.assert_allclose(specfun.bessel_j_zeros(0.5, 3), np.pi * np.array([1, 2, 3]))
        np.testing.assert_allclose(specfun.bessel_j_zeros(-0.5, 3), np.pi * np.array([0.5, 1.5, 2.5]))

    def test_j_kernel_asymptotic_branch(self):
        x = 1.5e8
        value = float(specfun.j_kernel(0.3, np.array([x]))[0])
        self.assertAlmostEqual(value, float(mpmath.besselj(0.3, x)), delta=1e-11)


class TestStruveDawsonErf(unittest.TestCase):

    def setUp(self):
        mpmath.mp.dps = 30

    def test_struve(self):
        self.assertLess(rel(specfun.struve_l0(1.0).value, mpmath.struvel(0, 1)), 1e-12)

    def test_i0_minus_l0(self):
        for x in (1.0, 5.0, 20.0):
            expected = mpmath.besseli(0, x) - mpmath.struvel(0, x)
            self.assertLess(rel(specfun.i0_minus_l0(x).value, expected), 1e-12, x)

    def test_i0_minus_l0_beyond_switch(self):
        # the integral representation takes over above x = 8
        for x in (8.5, 12.0, 50.0):
            with mpmath.workdps(60):
                expected = mpmath.besseli(0, x) - mpmath.struvel(0, x)
            self.assertLess(rel(specfun.i0_minus_l0(x).value, expected), 1e-11, x)

    def test_i0_minus_l0_positive_decreasing(self):
        grid = [0.0, 0.5, 1.0, 2.0, 5.0, 7.9, 8.0, 8.1, 12.0, 30.0, 100.0]
        values = [specfun.i0_minus_l0(x).value for x in grid]
        self.assertEqual(values[0], 1.0)
        self.assertTrue(all(v > 0.0 for v in values))
        self.assertTrue(all(b < a for a, b in zip(values, values[1:])), values)

    def test_dawson_definition(self):
        for x in (0.5, 2.0):
            expected = mpmath.exp(-x * x) * mpmath.quad(lambda t: mpmath.exp(t * t), [0, x])
            self.assertLess(rel(specfun.dawson(x).value, expected), 1e-12)

    def test_erf(self):
        for x in (0.1, 1.3):
            self.assertLess(rel(specfun.erf(x).value, mpmath.erf(x)), 1e-14)


class TestExponentialIntegrals(unittest.TestCase):

    def setUp(self):
        mpmath.mp.dps = 30

    def test_e1_against_ei(self):
        for x in (0.5, 3.0):
            self.assertLess(rel(specfun.expint_e1(x).value, -specfun.expint_ei(-x).value), 1e-13)

    def test_scaled_e1(self):
        for x in (0.3, 5.0, 50.0, 1e9):
            expected = mpmath.exp(x) * mpmath.e1(x)
            self.assertLess(rel(specfun.expint_e1_scaled(x).value, expected), 1e-12, x)

    def test_scaled_e1_kernel_is_finite_everywhere(self):
        values = specfun.e1_scaled_kernel(np.array([1e-300, 1.0, 1e200, np.inf]))
        self.assertTrue(np.all(np.isfinite(values)))
        self.assertEqual(values[-1], 0.0)

    def test_schlomilch(self):
        self.assertLess(rel(specfun.schlomilch_en(2, 1.5).value, mpmath.expint(2, 1.5)), 1e-12)
        self.assertLess(rel(specfun.schlomilch_en(1, 0.7).value, specfun.expint_e1(0.7).value), 1e-14)
        self.assertLess(rel(specfun.schlomilch_en(0, 2.0).value, math.exp(-2.0) / 2.0), 1e-15)

    def test_domain(self):
        with self.assertRaises(DomainError):
            specfun.expint_e1(0.0)
        with self.assertRaises(DomainError):
            specfun.expint_ei(0.0)
        with self.assertRaises(DomainError):
            specfun.schlomilch_en(1.5, 1.0)


class TestSpecialValue(unittest.TestCase):

    def test_float_and_relative_bound(self):
        v = specfun.SpecialValue(2.0, 1e-15)
        self.assertEqual(float(v), 2.0)
        self.assertAlmostEqual(v.rel_err_bound, 5e-16)
        self.assertEqual(v.to_dict(), {"value": 2.0, "abs_err_bound": 1e-15})


if __name__ == "__main__":
    unittest.main()

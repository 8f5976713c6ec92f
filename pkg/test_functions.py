"""
Unit tests for Function1D metadata and the function algebra
"""

import math
import unittest

import numpy as np

import corpus
from functions import (
    REGULAR,
    Decay,
    DecayKind,
    Function1D,
    Kernel,
    KernelKind,
    Singularity,
    combine,
    compose_sqrt,
    compose_square,
    product,
    scale,
    times_power,
    weakest,
)


class TestDecay(unittest.TestCase):

    def test_power(self):
        self.assertEqual(Decay.gaussian().power, math.inf)
        self.assertEqual(Decay.algebraic(2.5).power, 2.5)
        self.assertEqual(Decay.oscillatory().power, 0.0)

    def test_times_power(self):
        self.assertEqual(Decay.algebraic(3.0).times_power(1.0), Decay.algebraic(2.0))
        self.assertEqual(Decay.exponential().times_power(5.0), Decay.exponential())

    def test_weakest(self):
        self.assertEqual(weakest(Decay.gaussian(), Decay.algebraic(2.0)).kind, DecayKind.ALGEBRAIC)
        self.assertEqual(weakest(Decay.algebraic(3.0), Decay.algebraic(1.5)).exponent, 1.5)
        self.assertEqual(weakest(Decay.exponential(), Decay.gaussian()).kind, DecayKind.EXPONENTIAL)

    def test_validation(self):
        with self.assertRaises(ValueError):
            Decay.algebraic(math.inf)
        with self.assertRaises(ValueError):
            Decay.oscillatory(-1.0)


class TestSingularity(unittest.TestCase):

    def test_shifted(self):
        self.assertEqual(Singularity(0.5).shifted(1.0), REGULAR)
        self.assertEqual(Singularity(0.5).shifted(-0.25).exponent, 0.75)
        self.assertTrue(Singularity(0.99).integrable)
        self.assertFalse(Singularity(1.0).integrable)

    def test_vanishing_endpoint(self):
        # a zero of order 2 absorbs x^-1
        self.assertEqual(Singularity(-2.0).shifted(-1.0), REGULAR)


class TestKernel(unittest.TestCase):

    def test_zeros(self):
        np.testing.assert_allclose(Kernel(KernelKind.SIN).zeros(3), [math.pi, 2 * math.pi, 3 * math.pi])
        np.testing.assert_allclose(Kernel(KernelKind.COS).zeros(2), [math.pi / 2, 3 * math.pi / 2])
        zeros = Kernel(KernelKind.BESSEL_J, 0.0).zeros(3)
        np.testing.assert_allclose(Kernel(KernelKind.BESSEL_J, 0.0)(zeros), 0.0, atol=1e-13)

    def test_metadata(self):
        self.assertEqual(Kernel(KernelKind.SIN).order_at_zero, 1.0)
        self.assertEqual(Kernel(KernelKind.BESSEL_J, -0.5).order_at_zero, -0.5)
        self.assertEqual(Kernel(KernelKind.BESSEL_J, -1.0).order_at_zero, 1.0)
        self.assertEqual(Kernel(KernelKind.BESSEL_J, 1.0).decay, 0.5)
        self.assertEqual(Kernel(KernelKind.BESSEL_J, 1.0).describe(), "J_1")


class TestAlgebra(unittest.TestCase):
    """Metadata propagation through the helpers."""

    def setUp(self):
        self.power = corpus.get("power", mu=0.5)  # x^-1.5
        self.sinc = corpus.get("sinc_z", z=2.0)

    def test_times_power(self):
        f = times_power(self.power, 1.0)
        self.assertAlmostEqual(f.scalar(4.0), 0.5)
        self.assertEqual(f.decay, Decay.algebraic(0.5))
        self.assertEqual(f.singularity.exponent, 0.5)

    def test_times_power_keeps_oscillation(self):
        f = times_power(self.sinc, 1.0)
        self.assertIsNotNone(f.oscillation)
        self.assertAlmostEqual(f.scalar(0.3), math.sin(0.6))
        self.assertAlmostEqual(f.oscillation.envelope.scalar(0.3), 1.0)

    def test_scale(self):
        f = scale(corpus.get("exp"), -2.0)
        self.assertAlmostEqual(f.scalar(0.0), -2.0)

    def test_compose(self):
        g = compose_sqrt(corpus.get("gauss"))
        self.assertEqual(g.decay.kind, DecayKind.EXPONENTIAL)
        self.assertAlmostEqual(g.scalar(2.0), math.exp(-2.0))
        h = compose_square(corpus.get("rational", z=1.0))
        self.assertEqual(h.decay, Decay.algebraic(4.0))

    def test_combine(self):
        f = combine([(1.0, corpus.get("gauss")), (-2.0, corpus.get("rational", z=1.0))])
        self.assertAlmostEqual(f.scalar(1.0), math.exp(-1.0) - 1.0)
        self.assertEqual(f.decay, Decay.algebraic(2.0))

    def test_combine_rejects_mixed_oscillations(self):
        with self.assertRaises(ValueError):
            combine([(1.0, corpus.get("sin_z", z=1.0)), (1.0, corpus.get("sin_z", z=2.0))])
        with self.assertRaises(ValueError):
            combine([])

    def test_call_broadcasts_and_scalar(self):
        one = corpus.get("one")
        self.assertEqual(one(np.zeros((2, 3))).shape, (2, 3))
        self.assertEqual(one.scalar(5.0), 1.0)


class TestProduct(unittest.TestCase):

    def test_product_skips_masked_points(self):
        seen = []

        def g_eval(x):
            seen.extend(np.atleast_1d(x).tolist())
            return np.ones_like(x)

        f = Function1D(eval=lambda x: np.where(x > 1.0, 0.0, x), decay=Decay.gaussian())
        g = Function1D(eval=g_eval, decay=Decay.algebraic(2.0))
        p = product(f, g, Decay.gaussian())
        values = p(np.array([0.5, 2.0, 3.0]))
        np.testing.assert_allclose(values, [0.5, 0.0, 0.0])
        self.assertEqual(seen, [0.5])

    def test_product_singularity_default(self):
        f = Function1D(eval=lambda x: x ** -0.25, decay=Decay.gaussian(), singularity=Singularity(0.25))
        p = product(f, f, Decay.gaussian())
        self.assertEqual(p.singularity.exponent, 0.5)


class TestCorpus(unittest.TestCase):

    def test_registry(self):
        self.assertIn("gauss_balanced", corpus.names())
        self.assertIn("x^", corpus.describe("power"))
        with self.assertRaises(corpus.UnknownFunctionError):
            corpus.get("nope")
        with self.assertRaises(corpus.UnknownFunctionError):
            corpus.describe("nope")

    def test_balanced_gaussian_at_origin(self):
        f = corpus.get("gauss_balanced")
        self.assertAlmostEqual(f.scalar(0.0), -1.0)

    def test_bad_parameter(self):
        with self.assertRaises(ValueError):
            corpus.get("sin_z", z=-1.0)

    def test_oscillating_metadata(self):
        f = corpus.get("bessel_j", nu=-0.5, z=2.0)
        self.assertEqual(f.singularity.exponent, 0.5)
        self.assertEqual(f.oscillation.freq, 2.0)
        self.assertEqual(f.decay.kind, DecayKind.OSCILLATORY)

    def test_negative_integer_order_is_regular(self):
        self.assertEqual(corpus.get("bessel_j", nu=-1.0).singularity, REGULAR)
        self.assertEqual(corpus.get("bessel_j_over_x", nu=-1.0).singularity, REGULAR)
        self.assertEqual(corpus.get("bessel_j_over_x", nu=0.0).singularity.exponent, 1.0)


if __name__ == "__main__":
    unittest.main()

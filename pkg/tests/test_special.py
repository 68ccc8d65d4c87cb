"""
Tests for the special module.
"""

import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from relbackflow.exceptions import DomainError
from relbackflow.special import airy_ai, bessel_j0
from tests.oracles import (
    AI_0,
    AI_FIRST_ZERO,
    J0_FIRST_ZERO,
    airy_ai_series,
    bisect_zero,
    j0_series,
    sample_points,
)

STEP = 1e-3


class TestBesselJ0(unittest.TestCase):
    """Test cases for J0."""

    def test_examples(self):
        """Test J0 at its origin, first zero and x = 1."""
        self.assertEqual(bessel_j0(0.0), 1.0)
        self.assertLess(abs(bessel_j0(J0_FIRST_ZERO)), 1e-9)
        self.assertAlmostEqual(bessel_j0(1.0), 0.7651976866, delta=1e-9)

    def test_matches_series_oracle(self):
        """Test 25 points on [-15, 15] against the power series."""
        for x in sample_points(-15.0, 15.0):
            self.assertAlmostEqual(bessel_j0(x), j0_series(x), delta=1e-10, msg=f"x={x}")

    def test_first_zero_from_oracle(self):
        """Test that bisection on the oracle finds the committed first zero."""
        root = bisect_zero(j0_series, 2.0, 3.0)
        self.assertAlmostEqual(root, J0_FIRST_ZERO, delta=1e-10)

    def test_array_input(self):
        """Test vectorized evaluation."""
        values = bessel_j0(np.array([0.0, 1.0]))
        self.assertIsInstance(values, np.ndarray)
        self.assertEqual(values[0], 1.0)

    def test_rejects_non_finite(self):
        """Test DomainError for nan and inf."""
        for value in (float("nan"), float("inf"), np.array([1.0, np.nan])):
            with self.assertRaises(DomainError):
                bessel_j0(value)

    @given(st.floats(min_value=0.5, max_value=15.0))
    @settings(max_examples=200, deadline=None)
    def test_bessel_equation(self, x):
        """Test x y'' + y' + x y = 0 with central differences."""
        plus, mid, minus = bessel_j0(x + STEP), bessel_j0(x), bessel_j0(x - STEP)
        second = (plus - 2.0 * mid + minus) / STEP ** 2
        first = (plus - minus) / (2.0 * STEP)
        self.assertLess(abs(x * second + first + x * mid), 1e-5)


    @given(st.floats(min_value=-1e3, max_value=1e3))
    @settings(max_examples=200, deadline=None)
    def test_bounded_and_even(self, x):
        """Test |J0(x)| <= 1 and J0(-x) = J0(x)."""
        value = bessel_j0(x)
        self.assertLessEqual(abs(value), 1.0)
        self.assertAlmostEqual(bessel_j0(-x), value, places=15)

    @given(st.floats(min_value=20.0, max_value=50.0))
    @settings(max_examples=200, deadline=None)
    def test_large_argument_envelope(self, x):
        """Test the leading Hankel term with its first correction as error envelope."""
        leading = math.sqrt(2.0 / (math.pi * x)) * math.cos(x - math.pi / 4.0)
        error = abs(bessel_j0(x) - leading)
        self.assertLessEqual(error, 0.11 * x ** -1.5)
        if x >= 30.0:
            self.assertLessEqual(error, 0.02 / x)


class TestAiryAi(unittest.TestCase):
    """Test cases for Ai."""

    def test_examples(self):
        """Test Ai at the origin, its decay and first zero."""
        self.assertAlmostEqual(airy_ai(0.0), 0.3550280539, delta=1e-9)
        self.assertGreater(airy_ai(5.0), 0.0)
        self.assertLess(airy_ai(5.0), airy_ai(4.0))
        self.assertLess(abs(airy_ai(-2.338107410)), 1e-7)

    def test_matches_series_oracle(self):
        """Test 25 points on [-5, 5] against the Maclaurin series."""
        self.assertAlmostEqual(airy_ai_series(0.0), AI_0, places=15)
        for x in sample_points(-5.0, 5.0):
            self.assertAlmostEqual(airy_ai(x), airy_ai_series(x), delta=1e-10, msg=f"x={x}")

    def test_first_zero_from_oracle(self):
        """Test that bisection on the oracle finds the committed first zero."""
        root = bisect_zero(airy_ai_series, -3.0, -2.0)
        self.assertAlmostEqual(root, AI_FIRST_ZERO, delta=1e-9)

    def test_rejects_non_finite(self):
        """Test DomainError for nan and inf."""
        with self.assertRaises(DomainError):
            airy_ai(float("nan"))
        with self.assertRaises(DomainError):
            airy_ai(-float("inf"))

    @given(st.floats(min_value=-10.0, max_value=5.0))
    @settings(max_examples=200, deadline=None)
    def test_airy_equation(self, x):
        """Test y'' = x y with central differences."""
        second = (airy_ai(x + STEP) - 2.0 * airy_ai(x) + airy_ai(x - STEP)) / STEP ** 2
        self.assertLess(abs(second - x * airy_ai(x)), 1e-5)

    @given(st.floats(min_value=-30.0, max_value=10.0))
    @settings(max_examples=300, deadline=None)
    def test_bounded_on_validated_range(self, x):
        """Test finiteness, the global maximum and the decay and oscillation envelopes."""
        value = airy_ai(x)
        self.assertTrue(math.isfinite(value))
        self.assertLessEqual(abs(value), 0.5357)
        if x > 0.0:
            zeta = 2.0 / 3.0 * x ** 1.5
            self.assertGreater(value, 0.0)
            self.assertLessEqual(value, math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x ** 0.25))
        elif x < -1.0:
            self.assertLessEqual(abs(value), 1.1 / (math.sqrt(math.pi) * (-x) ** 0.25))


if __name__ == "__main__":
    unittest.main()

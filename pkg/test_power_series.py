#!/usr/bin/env python3
"""
Truncated formal power series: products, composition and the degenerate
exponential/logarithm series used as coefficient-extraction oracles.
"""

import unittest
from fractions import Fraction
from math import comb

from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.core.arith import lambda_falling
from app.core.exceptions import NonzeroConstantTerm, OrderMismatch
from app.services.power_series import (
    FormalPowerSeries,
    egf_coefficient,
    ps_compose,
    ps_degen_exp,
    ps_degen_log,
    ps_mul,
    ps_power,
    ps_reciprocal_linear,
    series_to_csv,
)

F = Fraction
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)
LAMBDAS = [F(0), F(1, 2), F(-1, 2), F(1, 3), F(-1, 3), F(1), F(2)]


def series(coeffs, order):
    return FormalPowerSeries.from_coeffs(coeffs, order)


def random_series(order, zero_constant=False):
    coeffs = st.lists(rationals, min_size=order + 1, max_size=order + 1)
    if zero_constant:
        coeffs = coeffs.map(lambda c: [F(0)] + c[1:])
    return coeffs.map(lambda c: series(c, order))


class ProductTest(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(ps_mul(series([1, 1], 2), series([1, -1], 2)), series([1, 0, -1], 2))
        t = FormalPowerSeries.variable(2)
        self.assertEqual(ps_mul(t, t), series([0, 0, 1], 2))
        f = series([F(1, 2), 3, -1], 2)
        self.assertEqual(ps_mul(f, FormalPowerSeries.constant(1, 2)), f)

    def test_order_mismatch(self):
        with self.assertRaises(OrderMismatch):
            ps_mul(series([1], 2), series([1], 3))
        with self.assertRaises(OrderMismatch):
            series([1], 2) + series([1], 3)

    def test_power_matches_repeated_product(self):
        f = series([1, F(1, 2), -2], 6)
        expected = FormalPowerSeries.constant(1, 6)
        for _ in range(5):
            expected = ps_mul(expected, f)
        self.assertEqual(ps_power(f, 5), expected)

    def test_reciprocal_linear(self):
        # (c - t) · 1/(c - t) = 1
        c = F(3, 2)
        self.assertEqual(ps_mul(series([c, -1], 8), ps_reciprocal_linear(c, 8)), FormalPowerSeries.constant(1, 8))

    @given(random_series(8), random_series(8), random_series(8))
    @hypothesis_settings(max_examples=25, deadline=None)
    def test_product_is_commutative_and_associative(self, f, g, h):
        self.assertEqual(ps_mul(f, g), ps_mul(g, f))
        self.assertEqual(ps_mul(ps_mul(f, g), h), ps_mul(f, ps_mul(g, h)))


class CompositionTest(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(ps_compose(series([1, 1], 2), series([0, 0, 1], 2)), series([1, 0, 1], 2))
        f = series([2, F(-1, 3), 5, 7], 3)
        self.assertEqual(ps_compose(f, FormalPowerSeries.variable(3)), f)
        exp_series = ps_degen_exp(1, 0, 3)
        self.assertEqual(ps_compose(exp_series, series([0, 2], 3)), series([1, 2, 2, F(4, 3)], 3))

    def test_nonzero_constant_term(self):
        with self.assertRaises(NonzeroConstantTerm):
            ps_compose(series([1, 1], 2), series([1, 1], 2))

    @given(random_series(8), random_series(8, zero_constant=True), random_series(8, zero_constant=True))
    @hypothesis_settings(max_examples=15, deadline=None)
    def test_composition_is_associative(self, f, g, h):
        self.assertEqual(ps_compose(ps_compose(f, g), h), ps_compose(f, ps_compose(g, h)))


class DegenerateSeriesTest(unittest.TestCase):
    def test_degen_exp_examples(self):
        self.assertEqual(ps_degen_exp(1, F(1, 2), 3), series([1, 1, F(1, 4), 0], 3))
        self.assertEqual(ps_degen_exp(0, F(1, 3), 4), FormalPowerSeries.constant(1, 4))
        self.assertEqual(ps_degen_exp(1, 0, 2), series([1, 1, F(1, 2)], 2))

    def test_degen_log_examples(self):
        self.assertEqual(ps_degen_log(F(1, 2), 2), series([0, 1, F(-1, 4)], 2))
        self.assertEqual(ps_degen_log(1, 3), FormalPowerSeries.variable(3))
        self.assertEqual(ps_degen_log(0, 3), series([0, 1, F(-1, 2), F(1, 3)], 3))

    def test_exp_and_log_are_compositional_inverses(self):
        order = 12
        one_plus_t = series([1, 1], order)
        t = FormalPowerSeries.variable(order)
        for lam in LAMBDAS:
            with self.subTest(lam=lam):
                exp_series = ps_degen_exp(1, lam, order)
                log_series = ps_degen_log(lam, order)
                self.assertEqual(ps_compose(exp_series, log_series), one_plus_t)
                self.assertEqual(ps_compose(log_series, exp_series.shift_constant(-1)), t)

    @given(rationals, rationals, rationals)
    @hypothesis_settings(max_examples=30)
    def test_binomial_type(self, x, y, lam):
        for n in range(9):
            expansion = sum(
                comb(n, k) * lambda_falling(x, k, lam) * lambda_falling(y, n - k, lam) for k in range(n + 1)
            )
            self.assertEqual(lambda_falling(x + y, n, lam), expansion)

    def test_egf_coefficient(self):
        self.assertEqual(egf_coefficient(ps_degen_exp(F(5, 2), F(1, 3), 4), 4), lambda_falling(F(5, 2), 4, F(1, 3)))

    def test_csv_dump(self):
        lines = series_to_csv(ps_degen_exp(1, F(1, 2), 3)).splitlines()
        self.assertEqual(lines, ["n,coefficient", "0,1", "1,1", "2,1/4", "3,0"])


if __name__ == "__main__":
    unittest.main()

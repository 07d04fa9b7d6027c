#!/usr/bin/env python3
"""
Degenerate Poisson laws: parameter classification, exact pmf/cdf values,
certified tails and the seeded inverse-CDF sampler.
"""

import json
import unittest
from fractions import Fraction

import numpy as np
from scipy import stats

from app.core.exceptions import DomainError, NonPositiveAlpha, SamplerOverflow, UnsupportedRegime
from app.core.interval import Interval
from app.schemas import PoissonRegime, TruncationBudget
from app.services.distribution_service import (
    cdf,
    classify_params,
    draw_array,
    pmf_deg,
    pmf_table,
    pmf_values,
    pmf_zt,
    sample,
    tail_mass,
    uniform_keys,
)
from app.services.export_service import ExportService

F = Fraction
HALF = classify_params(F(1, 2), 1)
NEG_HALF = classify_params(F(-1, 2), 1)


class ClassificationTest(unittest.TestCase):
    def test_finite_support(self):
        self.assertEqual(HALF.regime, PoissonRegime.FINITE_SUPPORT)
        self.assertEqual(HALF.support_max, 2)

    def test_infinite_support(self):
        self.assertEqual(NEG_HALF.regime, PoissonRegime.INFINITE_SUPPORT)
        self.assertIsNone(NEG_HALF.support_max)

    def test_unsupported(self):
        for lam, alpha in [("-1/2", 3), ("-1/2", 2), ("2/3", 1), (0, 1), ("-2/5", 1)]:
            with self.assertRaises(UnsupportedRegime, msg=f"{lam}, {alpha}"):
                classify_params(lam, alpha)

    def test_non_positive_alpha(self):
        for alpha in [0, -1]:
            with self.assertRaises(NonPositiveAlpha):
                classify_params(F(1, 2), alpha)


class ExactLawTest(unittest.TestCase):
    def test_pmf_examples(self):
        self.assertEqual([pmf_deg(i, HALF) for i in range(4)], [F(4, 9), F(4, 9), F(1, 9), 0])
        self.assertEqual(pmf_deg(2, NEG_HALF), F(3, 16))

    def test_zero_truncated_pmf(self):
        self.assertEqual([pmf_zt(k, HALF) for k in range(1, 4)], [F(4, 5), F(1, 5), 0])
        with self.assertRaises(DomainError):
            pmf_zt(0, HALF)
        with self.assertRaises(DomainError):
            pmf_deg(-1, HALF)

    def test_cdf(self):
        self.assertEqual(cdf(1, HALF), F(8, 9))
        self.assertEqual(cdf(2, HALF), 1)
        self.assertEqual(cdf(7, HALF), 1)
        self.assertEqual(cdf(2, NEG_HALF), F(11, 16))
        self.assertEqual(cdf(1, HALF, truncated=True), F(4, 5))
        with self.assertRaises(DomainError):
            cdf(0, HALF, truncated=True)

    def test_finite_support_normalises(self):
        for lam in [F(1), F(1, 2), F(1, 3), F(1, 4), F(1, 5)]:
            for alpha in [F(1, 2), F(1), F(3, 2), F(2)]:
                p = classify_params(lam, alpha)
                with self.subTest(lam=lam, alpha=alpha):
                    self.assertEqual(sum(v for _, v in pmf_values(p)), 1)
                    self.assertEqual(sum(v for _, v in pmf_values(p, truncated=True)), 1)
                    for k in range(1, p.support_max + 1):
                        # pmf_zt(k)(e - 1) = pmf(k) e
                        self.assertEqual(pmf_zt(k, p) * (p.normalizer - 1), pmf_deg(k, p) * p.normalizer)

    def test_infinite_support_closed_form(self):
        # (i + 1) / 2^(i + 2) at λ = -1/2, α = 1
        for i in range(31):
            self.assertEqual(pmf_deg(i, NEG_HALF), F(i + 1, 2 ** (i + 2)))

    def test_pmf_table(self):
        rows = pmf_table(3, HALF)
        self.assertEqual(rows[2], (2, F(1, 9), F(1)))
        self.assertEqual(rows[3], (3, F(0), F(1)))
        truncated = pmf_table(2, HALF, truncated=True)
        self.assertEqual([row[0] for row in truncated], [1, 2])

    def test_pmf_csv(self):
        lines = ExportService.pmf_table(pmf_table(3, HALF)).splitlines()
        self.assertEqual(lines, ["i,pmf,cdf", "0,4/9,4/9", "1,4/9,8/9", "2,1/9,1", "3,0,1"])


class TailMassTest(unittest.TestCase):
    def test_finite_tail_is_exact(self):
        self.assertEqual(tail_mass(1, HALF), F(1, 9))
        self.assertEqual(tail_mass(2, HALF), 0)

    def test_infinite_tail_is_certified(self):
        budget = TruncationBudget(max_terms=5000, tail_bound_target=F(1, 10 ** 35))
        for i in [0, 3, 10]:
            with self.subTest(i=i):
                tail = tail_mass(i, NEG_HALF, budget=budget)
                self.assertIsInstance(tail, Interval)
                self.assertTrue(tail.contains(1 - cdf(i, NEG_HALF)))
                self.assertTrue(tail.contains(F(i + 3, 2 ** (i + 2))))


class SamplerTest(unittest.TestCase):
    def test_uniform_keys_are_odd(self):
        keys = uniform_keys(3, 1000)
        self.assertTrue(np.all(keys % 2 == 1))
        self.assertTrue(np.all(keys < 2 ** 54))

    def test_streams_do_not_collide(self):
        keys = {
            "job 0, n 64": uniform_keys(0, 64, (0, 64)),
            "job 1, n 0": uniform_keys(0, 64, (1, 0)),
            "seed 1, stream 0": uniform_keys(1, 64, 0),
            "seed 0, stream 1": uniform_keys(0, 64, 1),
        }
        rows = {name: tuple(values.tolist()) for name, values in keys.items()}
        self.assertEqual(len(set(rows.values())), len(rows))
        self.assertTrue(np.array_equal(uniform_keys(5, 10, 3), uniform_keys(5, 10, (3,))))

    def test_determinism(self):
        first = sample(NEG_HALF, seed=7, count=500)
        second = sample(NEG_HALF, seed=7, count=500)
        self.assertEqual(first.draws, second.draws)
        other = sample(NEG_HALF, seed=7, count=500, stream=1)
        self.assertNotEqual(first.draws, other.draws)

    def test_finite_support_draws(self):
        draws = draw_array(HALF, seed=1, count=10_000)
        self.assertTrue(set(np.unique(draws).tolist()) <= {0, 1, 2})
        truncated = draw_array(HALF, seed=1, count=100_000, truncated=True)
        self.assertTrue(set(np.unique(truncated).tolist()) <= {1, 2})
        self.assertLess(abs(float(np.mean(truncated == 1)) - 0.8), 0.01)

    def test_chi_square(self):
        for lam, alpha in [(F(1, 2), F(1)), (F(1, 3), F(3, 2))]:
            p = classify_params(lam, alpha)
            with self.subTest(lam=lam, alpha=alpha):
                draws = draw_array(p, seed=2024, count=100_000)
                observed = np.bincount(draws, minlength=p.support_max + 1)
                expected = np.array([float(v) * 100_000 for _, v in pmf_values(p)])
                _, p_value = stats.chisquare(observed, expected)
                self.assertGreater(p_value, 1e-3)

    def test_infinite_support_mean(self):
        draws = draw_array(NEG_HALF, seed=42, count=1_000_000)
        self.assertLess(abs(float(draws.mean()) - 2.0), 0.006)

    def test_overflow(self):
        with self.assertRaises(SamplerOverflow):
            draw_array(NEG_HALF, seed=5, count=1000, max_support=2)

    def test_export_footer(self):
        batch = sample(NEG_HALF, seed=7, count=5)
        lines = ExportService.sample_batch(batch).splitlines()
        self.assertEqual(len(lines), 6)
        footer = json.loads(lines[-1])
        self.assertEqual(footer["seed"], 7)
        self.assertEqual(footer["params"]["lambda"], "-1/2")
        self.assertEqual(footer["params"]["regime"], "infinite-support")


if __name__ == "__main__":
    unittest.main()

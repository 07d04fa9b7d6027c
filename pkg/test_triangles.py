#!/usr/bin/env python3
"""
Number triangles: recurrence tables against generating-function oracles,
basis conversion, orthogonality and brute-force classical counts.
"""

import itertools
import unittest
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from app.core.exceptions import TriangleIndexError
from app.schemas import TriangleKind
from app.services.triangle_service import (
    TriangleService,
    basis_conversion_check,
    lah,
    lah_closed_form,
    oracle_table,
    orthogonality_check,
    stirling1_classical,
    stirling1_deg,
    stirling2_deg,
)

F = Fraction
ORACLE_LAMBDAS = [F(0), F(1, 2), F(-1, 2), F(1, 3), F(-1, 3), F(1)]


def set_partitions_by_blocks(n):
    """Counts of set partitions of {0..n-1} by number of blocks, via restricted growth strings"""
    counts = [0] * (n + 1)
    if n == 0:
        counts[0] = 1
        return counts

    def extend(prefix, blocks):
        if len(prefix) == n:
            counts[blocks] += 1
            return
        for b in range(blocks + 1):
            extend(prefix + [b], max(blocks, b + 1))

    extend([0], 1)
    return counts


def permutations_by_cycles(n):
    counts = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        seen, cycles = set(), 0
        for start in range(n):
            if start not in seen:
                cycles += 1
                j = start
                while j not in seen:
                    seen.add(j)
                    j = perm[j]
        counts[cycles] += 1
    return counts


class TriangleValuesTest(unittest.TestCase):
    def test_stirling1_deg(self):
        self.assertEqual(stirling1_deg(2, 1, F(1, 2)), F(-1, 2))
        self.assertEqual(stirling1_deg(3, 2, 0), -3)
        for n in range(8):
            self.assertEqual(stirling1_deg(n, n, F(2, 7)), 1)

    def test_stirling2_deg(self):
        self.assertEqual(stirling2_deg(2, 1, F(1, 2)), F(1, 2))
        self.assertEqual(stirling2_deg(3, 1, F(1, 2)), 0)
        self.assertEqual(stirling2_deg(3, 1, 0), 1)

    def test_classical_stirling1(self):
        self.assertEqual(stirling1_classical(2, 1), -1)
        self.assertEqual(stirling1_classical(2, 1, signed=False), 1)
        self.assertEqual(stirling1_classical(4, 2, signed=False), 11)

    def test_lah(self):
        self.assertEqual(lah(3, 2), 6)
        self.assertEqual(lah(4, 2), 36)
        for n in range(8):
            self.assertEqual(lah(n, n), 1)

    def test_first_column_vanishes(self):
        for kind in TriangleKind:
            table = TriangleService.get_table(kind, F(1, 3))
            self.assertEqual(table.entry(0, 0), 1)
            for n in range(1, 10):
                self.assertEqual(table.entry(n, 0), 0)

    def test_out_of_range_index(self):
        with self.assertRaises(TriangleIndexError):
            stirling1_deg(2, 3, F(1, 2))
        with self.assertRaises(IndexError):
            lah(-1, 0)

    def test_tables_are_keyed_by_lambda(self):
        a = TriangleService.get_table(TriangleKind.STIRLING2_DEG, F(1, 2))
        b = TriangleService.get_table(TriangleKind.STIRLING2_DEG, F(1, 3))
        self.assertIsNot(a, b)
        self.assertIs(a, TriangleService.get_table(TriangleKind.STIRLING2_DEG, "2/4"))

    def test_concurrent_growth(self):
        TriangleService.clear_cache()
        with ThreadPoolExecutor(max_workers=8) as pool:
            rows = list(pool.map(lambda _: TriangleService.get_table(TriangleKind.STIRLING1_DEG, F(-2, 5)).row(40), range(16)))
        self.assertTrue(all(row == rows[0] for row in rows))

    def test_csv(self):
        rows = TriangleService.rows(TriangleKind.STIRLING1_DEG, F(1, 2), 2)
        lines = TriangleService.to_csv(rows).splitlines()
        self.assertEqual(lines[0], "n,k,value")
        self.assertIn("2,1,-1/2", lines)


class TriangleOracleTest(unittest.TestCase):
    def test_recurrence_matches_generating_functions(self):
        n_max = 12
        for kind in (TriangleKind.STIRLING1_DEG, TriangleKind.STIRLING2_DEG):
            for lam in ORACLE_LAMBDAS:
                with self.subTest(kind=kind, lam=lam):
                    table = TriangleService.get_table(kind, lam)
                    oracle = oracle_table(kind, lam, n_max)
                    for n in range(n_max + 1):
                        self.assertEqual(list(table.row(n)), oracle[n])
        for kind in (TriangleKind.STIRLING1_CLASSICAL, TriangleKind.LAH):
            table = TriangleService.get_table(kind)
            oracle = oracle_table(kind, 0, n_max)
            for n in range(n_max + 1):
                self.assertEqual(list(table.row(n)), oracle[n])

    def test_basis_conversion(self):
        for lam in ORACLE_LAMBDAS:
            self.assertEqual(basis_conversion_check(10, lam), (True, None))

    def test_orthogonality(self):
        for lam in [F(0), F(1, 2), F(-1, 3), F(1), F(2)]:
            with self.subTest(lam=lam):
                self.assertEqual(orthogonality_check(20, lam), (True, None))
        self.assertEqual(orthogonality_check(0, F(5, 3)), (True, None))

    def test_lah_closed_form(self):
        for n in range(13):
            for k in range(n + 1):
                self.assertEqual(lah(n, k), lah_closed_form(n, k))


class ClassicalLimitTest(unittest.TestCase):
    def test_second_kind_counts_set_partitions(self):
        for n in range(9):
            counts = set_partitions_by_blocks(n)
            for k in range(n + 1):
                self.assertEqual(stirling2_deg(n, k, 0), counts[k])

    def test_first_kind_counts_cycles(self):
        for n in range(9):
            counts = permutations_by_cycles(n)
            for k in range(n + 1):
                self.assertEqual(stirling1_classical(n, k, signed=False), counts[k])
                self.assertEqual(stirling1_deg(n, k, 0), stirling1_classical(n, k))


if __name__ == "__main__":
    unittest.main()

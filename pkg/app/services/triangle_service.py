"""
Number triangles: degenerate Stirling numbers of both kinds, classical
Stirling numbers of the first kind and Lah numbers.

Tables are grown by local recurrences and memoised per (kind, λ). Each table
has its own lock; rows are append-only, so already computed rows can be read
without it. Generating-function oracles rebuild the same entries by
coefficient extraction for cross-checking.
"""

import csv
import io
import json
import logging
import threading
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple, Union

from app.core.exceptions import TriangleIndexError
from app.core.rational_io import format_float, format_rational, to_exact
from app.schemas import TriangleKind
from app.services.power_series import (
    FormalPowerSeries,
    egf_coefficient,
    ps_degen_exp,
    ps_degen_log,
    ps_mul,
    ps_power,
    ps_reciprocal_linear,
)

logger = logging.getLogger(__name__)

_LAMBDA_FREE = (TriangleKind.STIRLING1_CLASSICAL, TriangleKind.LAH)


class TriangleTable:
    """Lazily grown triangular array rows[n][k], 0 <= k <= n"""

    def __init__(self, kind: TriangleKind, lam: Fraction):
        self.kind = kind
        self.lam = Fraction(0) if kind in _LAMBDA_FREE else lam
        self.rows: List[Tuple[Fraction, ...]] = [(Fraction(1),)]
        self._lock = threading.Lock()

    def _coefficient(self, n: int, k: int) -> Fraction:
        """Multiplier of T(n, k) in T(n+1, k) = T(n, k-1) + c(n, k) T(n, k)"""
        if self.kind == TriangleKind.STIRLING1_DEG:
            return k * self.lam - n
        if self.kind == TriangleKind.STIRLING2_DEG:
            return k - n * self.lam
        if self.kind == TriangleKind.STIRLING1_CLASSICAL:
            return Fraction(-n)
        return Fraction(n + k)

    def ensure(self, n: int) -> None:
        if n < len(self.rows):
            return
        with self._lock:
            while len(self.rows) <= n:
                m = len(self.rows) - 1
                prev = self.rows[m]
                row = [Fraction(0)] * (m + 2)
                for k in range(1, m + 2):
                    below = prev[k] if k <= m else Fraction(0)
                    row[k] = prev[k - 1] + self._coefficient(m, k) * below
                self.rows.append(tuple(row))
            logger.debug(f"Grew {self.kind.value} table (λ={self.lam}) to row {n}")

    def entry(self, n: int, k: int) -> Fraction:
        if n < 0 or k < 0 or k > n:
            raise TriangleIndexError(f"{self.kind.value}({n}, {k}) requires 0 <= k <= n")
        self.ensure(n)
        return self.rows[n][k]

    def row(self, n: int) -> Tuple[Fraction, ...]:
        if n < 0:
            raise TriangleIndexError(f"row index must be nonnegative, got {n}")
        self.ensure(n)
        return self.rows[n]


class TriangleService:
    _tables: Dict[Tuple[TriangleKind, Fraction], TriangleTable] = {}
    _registry_lock = threading.Lock()

    @staticmethod
    def get_table(kind: TriangleKind, lam: Union[Fraction, int, str] = 0) -> TriangleTable:
        """Shared table for (kind, λ); distinct λ never share a table"""
        lam = Fraction(0) if kind in _LAMBDA_FREE else to_exact(lam)
        key = (kind, lam)
        table = TriangleService._tables.get(key)
        if table is None:
            with TriangleService._registry_lock:
                table = TriangleService._tables.setdefault(key, TriangleTable(kind, lam))
        return table

    @staticmethod
    def clear_cache() -> None:
        with TriangleService._registry_lock:
            TriangleService._tables.clear()

    @staticmethod
    def rows(kind: TriangleKind, lam: Union[Fraction, int, str], n_max: int, unsigned: bool = False) -> List[Tuple[int, int, Fraction]]:
        """Triangle rows 0..n_max as (n, k, value)"""
        table = TriangleService.get_table(kind, lam)
        out = []
        for n in range(n_max + 1):
            for k, value in enumerate(table.row(n)):
                out.append((n, k, abs(value) if unsigned else value))
        return out

    @staticmethod
    def to_csv(rows: List[Tuple[int, int, Fraction]], show_float: bool = False) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["n", "k", "value"] + (["float"] if show_float else []))
        for n, k, value in rows:
            writer.writerow([n, k, format_rational(value)] + ([format_float(value)] if show_float else []))
        return buffer.getvalue()

    @staticmethod
    def to_json(kind: str, lam: Fraction, rows: List[Tuple[int, int, Fraction]]) -> str:
        data = {
            "kind": kind,
            "lambda": format_rational(lam),
            "rows": [{"n": n, "k": k, "value": format_rational(v)} for n, k, v in rows],
        }
        return json.dumps(data, indent=2)


def stirling1_deg(n: int, k: int, lam: Union[Fraction, int, str]) -> Fraction:
    """S_{1,λ}(n, k): (x)_n = sum_l S_{1,λ}(n, l)(x)_{l,λ}"""
    return TriangleService.get_table(TriangleKind.STIRLING1_DEG, lam).entry(n, k)


def stirling2_deg(n: int, k: int, lam: Union[Fraction, int, str]) -> Fraction:
    """S_{2,λ}(n, k): (x)_{n,λ} = sum_l S_{2,λ}(n, l)(x)_l"""
    return TriangleService.get_table(TriangleKind.STIRLING2_DEG, lam).entry(n, k)


def stirling1_classical(n: int, k: int, signed: bool = True) -> Fraction:
    value = TriangleService.get_table(TriangleKind.STIRLING1_CLASSICAL).entry(n, k)
    return value if signed else abs(value)


def lah(n: int, k: int) -> Fraction:
    """L(n, k): coefficient of t^n/n! in (t/(1-t))^k/k!"""
    return TriangleService.get_table(TriangleKind.LAH).entry(n, k)


def orthogonality_check(n_max: int, lam: Union[Fraction, int, str]) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """
    Both products S1·S2 and S2·S1 equal the identity up to n_max.

    Returns:
        (True, None) on success, else (False, first violating (n, k))
    """
    for n in range(n_max + 1):
        deviation, k = orthogonality_row_deviation(n, lam)
        if deviation != 0:
            logger.warning(f"Orthogonality fails at (n={n}, k={k}) for λ={lam}")
            return False, (n, k)
    return True, None


def orthogonality_row_deviation(n: int, lam: Union[Fraction, int, str]) -> Tuple[Fraction, Optional[int]]:
    """Largest |(S1·S2 - I)(n, k)| or |(S2·S1 - I)(n, k)| over k, with its first k"""
    s1 = TriangleService.get_table(TriangleKind.STIRLING1_DEG, lam)
    s2 = TriangleService.get_table(TriangleKind.STIRLING2_DEG, lam)
    worst, worst_k = Fraction(0), None
    for k in range(n + 1):
        delta = 1 if n == k else 0
        forward = sum((s1.entry(n, l) * s2.entry(l, k) for l in range(k, n + 1)), Fraction(0))
        backward = sum((s2.entry(n, l) * s1.entry(l, k) for l in range(k, n + 1)), Fraction(0))
        deviation = max(abs(forward - delta), abs(backward - delta))
        if deviation > worst:
            worst, worst_k = deviation, k
    return worst, worst_k


def oracle_table(kind: TriangleKind, lam: Union[Fraction, int, str], n_max: int) -> List[List[Fraction]]:
    """
    Triangle built by coefficient extraction from its generating function:
    (log_λ(1+t))^k/k!, (e_λ(t)-1)^k/k!, (log(1+t))^k/k! or (t/(1-t))^k/k!.
    """
    lam = to_exact(lam)
    if kind == TriangleKind.STIRLING1_DEG:
        inner = ps_degen_log(lam, n_max)
    elif kind == TriangleKind.STIRLING2_DEG:
        inner = ps_degen_exp(1, lam, n_max).shift_constant(-1)
    elif kind == TriangleKind.STIRLING1_CLASSICAL:
        inner = ps_degen_log(0, n_max)
    else:
        t = FormalPowerSeries.variable(n_max)
        inner = ps_mul(t, ps_reciprocal_linear(1, n_max))
    table = [[Fraction(0)] * (n + 1) for n in range(n_max + 1)]
    for k in range(n_max + 1):
        power = ps_power(inner, k).scale(Fraction(1, factorial(k)))
        for n in range(k, n_max + 1):
            table[n][k] = egf_coefficient(power, n)
    return table


def lah_closed_form(n: int, k: int) -> Fraction:
    """C(n-1, k-1) n!/k! with L(0, 0) = 1"""
    if n == 0 and k == 0:
        return Fraction(1)
    if k == 0:
        return Fraction(0)
    return Fraction(comb(n - 1, k - 1) * factorial(n), factorial(k))


def _polynomial(coeff_fn, n: int, lam: Fraction) -> List[Fraction]:
    """Coefficients in x of a degree-n factorial-type polynomial"""
    x = FormalPowerSeries.variable(n)
    poly = FormalPowerSeries.constant(1, n)
    for j in range(n):
        poly = ps_mul(poly, x.shift_constant(-coeff_fn(j, lam)))
    return list(poly.coeffs)


def falling_polynomial(n: int) -> List[Fraction]:
    """Coefficients of (x)_n"""
    return _polynomial(lambda j, lam: Fraction(j), n, Fraction(0))


def lambda_falling_polynomial(n: int, lam: Fraction) -> List[Fraction]:
    """Coefficients of (x)_{n,λ}"""
    return _polynomial(lambda j, lam: j * lam, n, lam)


def basis_conversion_check(n_max: int, lam: Union[Fraction, int, str]) -> Tuple[bool, Optional[int]]:
    """
    Expand sum_l S_{1,λ}(n,l)(x)_{l,λ} and sum_l S_{2,λ}(n,l)(x)_l as
    polynomials in x and compare with (x)_n and (x)_{n,λ} coefficientwise.
    """
    lam = to_exact(lam)
    for n in range(n_max + 1):
        first = [Fraction(0)] * (n + 1)
        second = [Fraction(0)] * (n + 1)
        for l in range(n + 1):
            for i, c in enumerate(lambda_falling_polynomial(l, lam)):
                first[i] += stirling1_deg(n, l, lam) * c
            for i, c in enumerate(falling_polynomial(l)):
                second[i] += stirling2_deg(n, l, lam) * c
        if first != falling_polynomial(n) or second != lambda_falling_polynomial(n, lam):
            logger.warning(f"Basis conversion fails at n={n} for λ={lam}")
            return False, n
    return True, None


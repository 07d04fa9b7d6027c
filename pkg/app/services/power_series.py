"""
Truncated formal power series over exact rationals.

A FormalPowerSeries of order N holds c_0..c_N and stands for
sum c_n t^n + O(t^(N+1)). Orders are never coerced silently: combining
series of different orders raises OrderMismatch, and re-truncation is an
explicit call.
"""

import csv
import io
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Tuple, Union

from app.core.arith import lambda_falling
from app.core.exceptions import NonzeroConstantTerm, OrderMismatch
from app.core.rational_io import format_rational, to_exact

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FormalPowerSeries:
    order: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"order must be nonnegative, got {self.order}")
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"order {self.order} needs {self.order + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Union[Fraction, int]], order: int) -> "FormalPowerSeries":
        """Pad with zeros or cut to the requested order"""
        values = [to_exact(c) for c in coeffs][: order + 1]
        values += [Fraction(0)] * (order + 1 - len(values))
        return cls(order, tuple(values))

    @classmethod
    def constant(cls, value: Union[Fraction, int], order: int) -> "FormalPowerSeries":
        return cls.from_coeffs([value], order)

    @classmethod
    def variable(cls, order: int) -> "FormalPowerSeries":
        """The series t"""
        return cls.from_coeffs([0, 1], order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def truncate(self, order: int) -> "FormalPowerSeries":
        if order > self.order:
            raise OrderMismatch(f"cannot extend a series of order {self.order} to {order}")
        return FormalPowerSeries(order, self.coeffs[: order + 1])

    def __add__(self, other: "FormalPowerSeries") -> "FormalPowerSeries":
        _require_same_order(self, other)
        return FormalPowerSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FormalPowerSeries") -> "FormalPowerSeries":
        _require_same_order(self, other)
        return FormalPowerSeries(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FormalPowerSeries":
        return self.scale(-1)

    def __mul__(self, other: "FormalPowerSeries") -> "FormalPowerSeries":
        return ps_mul(self, other)

    def scale(self, factor: Union[Fraction, int]) -> "FormalPowerSeries":
        factor = to_exact(factor)
        return FormalPowerSeries(self.order, tuple(c * factor for c in self.coeffs))

    def shift_constant(self, delta: Union[Fraction, int]) -> "FormalPowerSeries":
        """Add delta to the constant term"""
        coeffs = list(self.coeffs)
        coeffs[0] += to_exact(delta)
        return FormalPowerSeries(self.order, tuple(coeffs))


def _require_same_order(f: FormalPowerSeries, g: FormalPowerSeries) -> None:
    if f.order != g.order:
        raise OrderMismatch(f"series orders differ: {f.order} vs {g.order}")


def ps_mul(f: FormalPowerSeries, g: FormalPowerSeries) -> FormalPowerSeries:
    """Cauchy product truncated at the shared order"""
    _require_same_order(f, g)
    n_max = f.order
    out = [Fraction(0)] * (n_max + 1)
    for i, a in enumerate(f.coeffs):
        if a == 0:
            continue
        for j in range(n_max - i + 1):
            b = g.coeffs[j]
            if b:
                out[i + j] += a * b
    return FormalPowerSeries(n_max, tuple(out))


def ps_power(f: FormalPowerSeries, k: int) -> FormalPowerSeries:
    """f^k by repeated squaring on the truncated series"""
    if k < 0:
        raise ValueError(f"exponent must be nonnegative, got {k}")
    result = FormalPowerSeries.constant(1, f.order)
    base = f
    while k:
        if k & 1:
            result = ps_mul(result, base)
        k >>= 1
        if k:
            base = ps_mul(base, base)
    return result


def ps_compose(f: FormalPowerSeries, g: FormalPowerSeries) -> FormalPowerSeries:
    """
    f(g(t)) truncated at the shared order.

    Raises:
        NonzeroConstantTerm: g has a nonzero constant term
        OrderMismatch: orders differ
    """
    _require_same_order(f, g)
    if g.coeffs[0] != 0:
        raise NonzeroConstantTerm(f"inner series has constant term {g.coeffs[0]}")
    # Horner: (((f_N g + f_{N-1}) g + ...) g + f_0
    result = FormalPowerSeries.constant(f.coeffs[-1], f.order)
    for c in reversed(f.coeffs[:-1]):
        result = ps_mul(result, g).shift_constant(c)
    return result


def ps_degen_exp(x: Union[Fraction, int], lam: Union[Fraction, int], order: int) -> FormalPowerSeries:
    """e_λ^x(t): coefficient of t^n is (x)_{n,λ}/n!"""
    x, lam = to_exact(x), to_exact(lam)
    coeffs = []
    term = Fraction(1)
    for n in range(order + 1):
        if n:
            # (x)_{n,λ}/n! from (x)_{n-1,λ}/(n-1)!
            term = term * (x - (n - 1) * lam) / n
        coeffs.append(term)
    return FormalPowerSeries(order, tuple(coeffs))


def ps_degen_log(lam: Union[Fraction, int], order: int) -> FormalPowerSeries:
    """log_λ(1+t): coefficient of t^n is λ^(n-1)(1)_{n,1/λ}/n!; log(1+t) at λ = 0"""
    lam = to_exact(lam)
    coeffs = [Fraction(0)]
    for n in range(1, order + 1):
        if lam == 0:
            coeffs.append(Fraction((-1) ** (n + 1), n))
        else:
            coeffs.append(lam ** (n - 1) * lambda_falling(1, n, 1 / lam) / factorial(n))
    return FormalPowerSeries(order, tuple(coeffs))


def ps_reciprocal_linear(c: Union[Fraction, int], order: int) -> FormalPowerSeries:
    """1/(c - t) = sum t^n / c^(n+1) for c != 0"""
    c = to_exact(c)
    if c == 0:
        raise ZeroDivisionError("1/(c - t) needs c != 0")
    return FormalPowerSeries(order, tuple(1 / c ** (n + 1) for n in range(order + 1)))


def egf_coefficient(f: FormalPowerSeries, n: int) -> Fraction:
    """Coefficient of t^n/n!"""
    return f.coeffs[n] * factorial(n)


def series_to_csv(f: FormalPowerSeries) -> str:
    """Debug dump: rows n,coefficient with p/q values"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "coefficient"])
    for n, c in enumerate(f.coeffs):
        writer.writerow([n, format_rational(c)])
    return buffer.getvalue()

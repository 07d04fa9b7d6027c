from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class Interval:
    """
    Closed interval [lo, hi] with exact rational endpoints.

    Produced by certified truncation: the true value of a convergent series
    lies inside. Only the affine operations needed to combine certified
    values with exact coefficients are supported.
    """
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other: Union["Interval", Fraction, int]) -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Union["Interval", Fraction, int]) -> "Interval":
        return self + (-other)

    def __rsub__(self, other: Union[Fraction, int]) -> "Interval":
        return (-self) + other

    def __mul__(self, scalar: Union[Fraction, int]) -> "Interval":
        if isinstance(scalar, Interval):
            raise TypeError("Interval products are not supported")
        a, b = self.lo * scalar, self.hi * scalar
        return Interval(min(a, b), max(a, b))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Union[Fraction, int]) -> "Interval":
        return self * (1 / Fraction(scalar))


ExactOrInterval = Union[Fraction, Interval]


def agrees(lhs: ExactOrInterval, rhs: ExactOrInterval) -> bool:
    """
    Equality under certified truncation: exact vs exact compares for
    equality, exact vs interval checks containment, interval vs interval
    checks overlap.
    """
    if isinstance(lhs, Interval) and isinstance(rhs, Interval):
        return lhs.overlaps(rhs)
    if isinstance(lhs, Interval):
        return lhs.contains(rhs)
    if isinstance(rhs, Interval):
        return rhs.contains(lhs)
    return lhs == rhs

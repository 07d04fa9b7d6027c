"""
Exception hierarchy for exact computation.

Library code raises these instead of returning sentinel values. The CLI maps
any DegenLabError to exit code 2; the suite runner turns them into failed
checks.
"""


class DegenLabError(Exception):
    """Base class for all library errors"""


class RationalFormatError(DegenLabError, ValueError):
    """Text is not a canonical rational of the form p or p/q"""


class NonIntegerExponent(DegenLabError):
    """(1 + λt)^(x/λ) has no exact rational value at these arguments"""


class NonIntegerLambda(DegenLabError):
    """Closed-form degenerate logarithm requires λ to be a nonzero integer"""


class PoleError(DegenLabError):
    """A negative power of zero was requested"""


class OrderMismatch(DegenLabError):
    """Two power series with different truncation orders were combined"""


class NonzeroConstantTerm(DegenLabError):
    """Inner series of a composition must have a zero constant term"""


class TriangleIndexError(DegenLabError, IndexError):
    """Triangle entry requested outside 0 <= k <= n"""


class RegimeError(DegenLabError):
    """Evaluation point lies outside every supported regime"""


class UnsupportedRegime(RegimeError):
    """Poisson parameters do not define a probability mass function we support"""


class NonPositiveAlpha(DegenLabError):
    """Poisson parameter alpha must be strictly positive"""


class BudgetExhausted(DegenLabError):
    """Certified tail bound not reached within the term budget"""


class DomainError(DegenLabError):
    """Argument outside the support of the distribution"""


class DivisionByZero(DegenLabError, ZeroDivisionError):
    """Normalising factor vanishes"""


class SamplerOverflow(DegenLabError):
    """Inverse-CDF search exceeded the support cap"""


class NoClosedForm(DegenLabError):
    """No closed-form moment formula exists for this moment kind"""


class UnknownIdentity(DegenLabError):
    """Identity id is not registered"""


class GridReferenceError(DegenLabError):
    """Parameter grid file is missing or malformed"""

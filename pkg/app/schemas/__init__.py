from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, field_serializer, field_validator, model_validator
from typing import Annotated, Any, Dict, List, Optional, Union
from fractions import Fraction
from enum import Enum
import json

from app.core.arith import degen_exp_exact
from app.core.exceptions import NonPositiveAlpha, RegimeError, UnsupportedRegime
from app.core.interval import Interval
from app.core.rational_io import format_rational, to_exact, value_to_json

# Exact rational field: parsed from int / Fraction / "p/q", dumped as "p/q" in JSON
Rational = Annotated[
    Fraction,
    PlainValidator(to_exact),
    PlainSerializer(format_rational, return_type=str, when_used="json"),
]


class TriangleKind(str, Enum):
    STIRLING1_DEG = "stirling1-deg"
    STIRLING2_DEG = "stirling2-deg"
    STIRLING1_CLASSICAL = "stirling1"
    LAH = "lah"


class EvalRegime(str, Enum):
    FINITE_DOBINSKI = "finite-dobinski"
    TRUNCATED = "truncated"
    CLASSICAL_LIMIT = "classical-limit"


class PoissonRegime(str, Enum):
    FINITE_SUPPORT = "finite-support"
    INFINITE_SUPPORT = "infinite-support"


class MomentFamily(str, Enum):
    POWER = "power"
    FALLING = "falling"
    RISING = "rising"
    LAMBDA_FALLING = "lambda-falling"
    BINOMIAL = "binomial"


class CheckMethod(str, Enum):
    EXACT_ENUM = "ExactEnum"
    CERTIFIED_TRUNCATION = "CertifiedTruncation"
    MONTE_CARLO = "MonteCarlo"


class TruncationBudget(BaseModel):
    """Term budget and absolute tail-bound target for certified series sums"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    max_terms: int = Field(..., ge=1, description="Maximum number of series terms to sum")
    tail_bound_target: Rational = Field(..., description="Certified tail must fall below this bound")

    @field_validator('tail_bound_target')
    @classmethod
    def validate_target(cls, v: Fraction) -> Fraction:
        if v <= 0:
            raise ValueError(f"tail_bound_target must be positive, got {v}")
        return v


def reciprocal_integer(lam: Fraction) -> Optional[int]:
    """1/λ when it is an integer, else None"""
    if lam == 0:
        return None
    inverse = 1 / lam
    return inverse.numerator if inverse.denominator == 1 else None


class EvalPoint(BaseModel):
    """Argument x and degeneracy λ of a Bell-family evaluation, with its regime"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: Rational
    lam: Rational
    regime: Optional[EvalRegime] = None

    @model_validator(mode='after')
    def classify(self) -> "EvalPoint":
        regime = self._regime_for(self.x, self.lam)
        if self.regime is not None and self.regime != regime:
            raise RegimeError(f"(x={self.x}, λ={self.lam}) is {regime.value}, not {self.regime.value}")
        self.regime = regime
        return self

    @staticmethod
    def _regime_for(x: Fraction, lam: Fraction) -> EvalRegime:
        if lam == 0:
            return EvalRegime.CLASSICAL_LIMIT
        m = reciprocal_integer(lam)
        if lam > 0 and m is not None:
            return EvalRegime.FINITE_DOBINSKI
        if lam < 0 and m is not None and abs(lam * x) < 1:
            return EvalRegime.TRUNCATED
        raise RegimeError(
            f"No Dobinski regime for x={x}, λ={lam}: need 1/λ a positive integer, "
            "or 1/λ a negative integer with |λx| < 1"
        )

    @property
    def dobinski_limit(self) -> Optional[int]:
        """Last nonzero Dobinski index M = 1/λ in the finite regime"""
        if self.regime == EvalRegime.FINITE_DOBINSKI:
            return reciprocal_integer(self.lam)
        return None

    @property
    def normalizer(self) -> Fraction:
        """e_λ(x) = (1 + λx)^(1/λ)"""
        return degen_exp_exact(1, self.lam, self.x)


class PoissonParams(BaseModel):
    """Validated (λ, α) pair of a degenerate Poisson law"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    lam: Rational
    alpha: Rational
    regime: Optional[PoissonRegime] = None
    support_max: Optional[int] = Field(None, description="M = 1/λ in the finite-support regime")

    @model_validator(mode='after')
    def classify(self) -> "PoissonParams":
        if self.alpha <= 0:
            raise NonPositiveAlpha(f"alpha must be > 0, got {self.alpha}")
        m = reciprocal_integer(self.lam)
        if self.lam > 0 and m is not None:
            regime, support_max = PoissonRegime.FINITE_SUPPORT, m
        elif self.lam < 0 and m is not None:
            if abs(self.lam) * self.alpha >= 1:
                raise UnsupportedRegime(
                    f"|λ|·α = {abs(self.lam) * self.alpha} >= 1: the series for e_λ(α) diverges"
                )
            regime, support_max = PoissonRegime.INFINITE_SUPPORT, None
        elif self.lam == 0:
            raise UnsupportedRegime("λ = 0 (classical Poisson) has an irrational normaliser e^α")
        elif self.lam > 0:
            raise UnsupportedRegime(
                f"λ = {self.lam} > 0 with 1/λ not an integer: (1)_{{i,λ}} changes sign, "
                "so the weights are not a probability mass function"
            )
        else:
            raise UnsupportedRegime(f"λ = {self.lam} < 0 with 1/λ not an integer has an irrational normaliser")
        if self.regime is not None and self.regime != regime:
            raise UnsupportedRegime(f"parameters are {regime.value}, not {self.regime.value}")
        self.regime = regime
        self.support_max = support_max
        return self

    @property
    def is_finite(self) -> bool:
        return self.regime == PoissonRegime.FINITE_SUPPORT

    @property
    def normalizer(self) -> Fraction:
        """e_λ(α)"""
        return degen_exp_exact(1, self.lam, self.alpha)

    @property
    def limit_ratio(self) -> Fraction:
        """Limit of successive pmf ratios, |λ|·α"""
        return abs(self.lam) * self.alpha

    def as_eval_point(self) -> EvalPoint:
        return EvalPoint(x=self.alpha, lam=self.lam)


class SampleBatch(BaseModel):
    """Deterministic inverse-CDF draws"""
    seed: int = Field(..., ge=0, lt=2 ** 64)
    count: int = Field(..., ge=1)
    stream: int = Field(0, ge=0)
    truncated: bool = False
    params: PoissonParams
    draws: List[int]

    def footer(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "count": self.count,
            "stream": self.stream,
            "truncated": self.truncated,
            "params": {
                "lambda": format_rational(self.params.lam),
                "alpha": format_rational(self.params.alpha),
                "regime": self.params.regime.value,
            },
        }


class MomentKind(BaseModel):
    """Moment functional E[f(X)] selected by family and order n"""
    model_config = ConfigDict(frozen=True)

    kind: MomentFamily
    n: int = Field(..., ge=0)

    def __str__(self) -> str:
        return f"{self.kind.value}[{self.n}]"


class MonteCarloEstimate(BaseModel):
    mean: float
    stderr: float
    count: int

    def band(self, sigmas: int) -> Interval:
        """Exact interval mean ± sigmas·stderr"""
        centre, half = Fraction(self.mean), Fraction(self.stderr) * sigmas
        return Interval(centre - half, centre + half)


class IdentityCheckResult(BaseModel):
    """One verified identity instance"""
    model_config = ConfigDict(populate_by_name=True, arbitrary_types_allowed=True)

    identity_id: str = Field(..., alias="id")
    lam: Rational = Field(..., alias="lambda")
    alpha: Rational
    n: int
    lhs: Any = Field(None, description="Fraction or Interval")
    rhs: Any = Field(None, description="Fraction or Interval")
    method: CheckMethod
    passed: bool = Field(..., alias="pass")
    detail: str = ""

    @field_serializer('lhs', 'rhs', when_used="json")
    def serialize_value(self, value: Optional[Union[Fraction, Interval]]) -> Any:
        return None if value is None else value_to_json(value)

    def sort_key(self):
        return (self.identity_id, self.lam, self.alpha, self.n)


class SuiteSummary(BaseModel):
    total: int
    failed: int


class SuiteReport(BaseModel):
    """Deterministic verification report"""
    suite: str
    seed: int
    checks: List[IdentityCheckResult]
    summary: SuiteSummary
    verdict: str

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), indent=2)


class CliConfig(BaseModel):
    """Validated flag set shared by every CLI command"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    command: str = Field(..., pattern=r"^(table|poly|pmf|sample|verify|series)$")
    lam: Optional[Rational] = None
    alpha: Optional[Rational] = None
    x: Optional[Rational] = None
    n: Optional[int] = Field(None, ge=0)
    n_max: Optional[int] = Field(None, ge=0)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    count: int = Field(1, ge=1)
    format: str = Field("csv", pattern=r"^(csv|json|text)$")
    output: Optional[str] = Field(None, description="File path; standard output when unset")
    show_float: bool = False


class ParameterGrid(BaseModel):
    """Named list of (λ, α) points for the verification suite"""
    name: str = "custom"
    n_max: Optional[int] = Field(None, ge=0)
    points: List[PoissonParams] = Field(default_factory=list)

from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator
from fractions import Fraction
import logging

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = "WARNING"

    # Worker Configuration
    WORKER_CONCURRENCY: int = 2

    # Certified truncation
    DEFAULT_MAX_TERMS: int = 5000
    DEFAULT_TAIL_BOUND_EXPONENT: int = 40  # target tail bound is 10^-exponent

    # Sampler
    SAMPLER_MAX_SUPPORT: int = 1_000_000
    DEFAULT_SEED: int = 0
    DEFAULT_MC_COUNT: int = 100_000
    MC_SIGMA_BAND: int = 4

    # Verification suite
    SUITE_N_MAX: int = 8
    MC_N_MAX: int = 3

    model_config = SettingsConfigDict(
        env_prefix="DEGENLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
        env_ignore_empty=True,
    )

    @field_validator('WORKER_CONCURRENCY', 'DEFAULT_MAX_TERMS', 'SAMPLER_MAX_SUPPORT', 'MC_SIGMA_BAND')
    @classmethod
    def require_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be a positive integer, got {v}")
        return v

    @field_validator('DEFAULT_TAIL_BOUND_EXPONENT')
    @classmethod
    def warn_coarse_tail_bound(cls, v: int) -> int:
        """Warn if certified intervals would be too wide to separate identities"""
        if v < 10:
            logger.warning(
                f"DEFAULT_TAIL_BOUND_EXPONENT={v} gives tail bounds above 1e-10; "
                "interval checks may pass vacuously."
            )
        return v

    @property
    def default_tail_bound(self) -> Fraction:
        return Fraction(1, 10 ** self.DEFAULT_TAIL_BOUND_EXPONENT)

    def default_budget(self):
        """Truncation budget built from the configured defaults"""
        from app.schemas import TruncationBudget

        return TruncationBudget(
            max_terms=self.DEFAULT_MAX_TERMS,
            tail_bound_target=self.default_tail_bound,
        )


# Initialize settings
settings = Settings()

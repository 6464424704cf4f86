"""Configuration management for the sparse recovery toolkit."""

from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings using Pydantic BaseSettings for validation."""

    # Logging Configuration
    log_level: str = "INFO"
    log_format: str = "console"

    # ADMM defaults for the weighted-lasso subproblem
    admm_rho: float = 1.0
    admm_max_iter: int = 2000
    admm_tol_primal: float = 1e-8
    admm_tol_dual: float = 1e-8
    admm_tol_rel: float = 1e-8
    admm_alpha: float = 1.6
    admm_relative_rho: bool = True

    # IRL1 outer loop defaults
    irl1_max_outer: int = 20
    irl1_eps: float = 1e-8
    irl1_stop_tol: float = 1e-6

    # Numerical fallbacks for distributions without special-function forms
    quadrature_abs_tol: float = 1e-10
    quantile_tol: float = 1e-12

    # Harness
    workers: int = 1

    model_config = SettingsConfigDict(
        env_prefix="SPARSEREC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is one the logging module knows."""
        supported_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in supported_levels:
            raise ValueError(f"Log level must be one of: {', '.join(supported_levels)}")
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log format is supported."""
        if v.lower() not in ("console", "json"):
            raise ValueError("Log format must be 'console' or 'json'")
        return v.lower()

    @field_validator(
        "admm_rho", "admm_tol_primal", "admm_tol_dual", "irl1_stop_tol",
        "quadrature_abs_tol", "quantile_tol",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Tolerances and penalty parameters must be strictly positive."""
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("admm_max_iter", "irl1_max_outer", "workers")
    @classmethod
    def validate_positive_int(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("irl1_eps")
    @classmethod
    def validate_eps(cls, v: float) -> float:
        if v < 0:
            raise ValueError("IRL1 smoothing eps must be nonnegative")
        return v

    @field_validator("admm_tol_rel")
    @classmethod
    def validate_tol_rel(cls, v: float) -> float:
        if v < 0:
            raise ValueError("relative tolerance must be nonnegative")
        return v

    @field_validator("admm_alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        if not 0 < v < 2:
            raise ValueError("over-relaxation factor must lie in (0, 2)")
        return v


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get application settings."""
    return Settings()


# Global settings instance
settings = get_settings()

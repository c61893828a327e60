"""Configuration management for the network kriging toolkit."""

from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide defaults loaded from environment variables (prefix ``NETKRIGING_``)."""

    # Logging
    log_level: str = "INFO"
    log_format: Literal["json", "console"] = "json"

    # Execution
    max_workers: int = 1

    # Traffic data
    bin_seconds: float = 10.0

    # Linear algebra
    pinv_rcond: float = 1e-10

    # Quadrature for the LRD-adjusted EWMA variance
    quadrature_rel_tol: float = 1e-8
    quadrature_attempts: int = 3
    quadrature_subdivisions: int = 200

    # Joint model
    default_p: int = 2
    default_gamma: float = 0.75
    default_window_m: int = 60
    convergence_eps: float = 1e-3
    min_iterations: int = 20
    max_iterations: int = 200

    # Baseline and mean model windows (bins)
    baseline_window: int = 60
    factor_window: int = 200

    # Control charts
    ewma_lambda: float = 0.1
    limit_multiplier: float = 3.0
    alarm_rate_threshold: float = 0.1

    # Reports
    report_float_format: str = "%.10g"

    model_config = SettingsConfigDict(
        env_prefix="NETKRIGING_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )


# Global settings instance
settings = Settings()

"""Control-chart state, configuration and results."""

from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from netkriging.core.config import settings
from netkriging.models.arrays import ArrayModel, frozen_array


class EwmaState(BaseModel):
    """Running EWMA statistic."""

    model_config = ConfigDict(frozen=True)

    lam: float = Field(gt=0.0, le=1.0, description="Smoothing weight λ = 1 − φ")
    current: float = 0.0
    initialized: bool = False
    steps: int = Field(default=0, ge=0)


class ChartConfig(BaseModel):
    """Parameters of one EWMA control chart."""

    model_config = ConfigDict(frozen=True)

    lam: float = Field(default_factory=lambda: settings.ewma_lambda, gt=0.0, le=1.0)
    sigma2: float = Field(gt=0.0, description="Residual variance")
    hurst: float = Field(default=0.5, gt=0.0, lt=1.0)
    limit_multiplier: float = Field(default_factory=lambda: settings.limit_multiplier, gt=0.0)
    lrd_adjusted: bool = True


class ChartResult(ArrayModel):
    """EWMA statistic, symmetric control limits and per-bin alarms."""

    statistic: np.ndarray
    limit: float = Field(ge=0.0)
    variance: float = Field(ge=0.0)
    alarms: np.ndarray
    onset_marker: Optional[int] = None

    @field_validator("statistic", mode="before")
    @classmethod
    def _coerce_statistic(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=1, name="statistic")

    @field_validator("alarms", mode="before")
    @classmethod
    def _coerce_alarms(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=1, name="alarms", dtype=bool)

    @model_validator(mode="after")
    def _check_alarms(self) -> "ChartResult":
        if not np.array_equal(self.alarms, np.abs(self.statistic) > self.limit):
            raise ValueError("alarms must equal |statistic| > limit")
        return self

    @property
    def upper_limit(self) -> float:
        return self.limit

    @property
    def lower_limit(self) -> float:
        return -self.limit

    def alarm_rate(self, start: int = 0, stop: Optional[int] = None) -> float:
        """Fraction of alarming bins in ``[start, stop)``; 0 for an empty range."""
        segment = self.alarms[start:stop]
        return float(segment.mean()) if segment.size else 0.0


class HurstEstimate(BaseModel):
    """Wavelet log-scale estimate of the Hurst parameter."""

    model_config = ConfigDict(frozen=True)

    hurst: float = Field(gt=0.0, lt=1.0)
    slope: float
    clamped: bool
    first_octave: int
    last_octave: int

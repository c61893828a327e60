"""Traffic traces and the parameters of synthetic traffic."""

from enum import Enum
from typing import Any, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from netkriging.core.config import settings
from netkriging.models.arrays import ArrayModel, frozen_array


class TraceKind(str, Enum):
    """Whether a trace holds flow-level or link-level series."""

    FLOW = "flow"
    LINK = "link"


class FgnSpec(BaseModel):
    """Fractional Gaussian noise parameters."""

    model_config = ConfigDict(frozen=True)

    hurst: float = Field(gt=0.0, lt=1.0)
    sigma2: float = Field(gt=0.0, description="Variance of one increment")
    length: int = Field(ge=1, description="Number of time bins")


class TraceSet(ArrayModel):
    """series × length matrix of traffic volumes in bytes per bin."""

    values: np.ndarray
    kind: TraceKind
    bin_seconds: float = Field(default_factory=lambda: settings.bin_seconds, gt=0.0)
    labels: Tuple[str, ...] = ()

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value: Any) -> np.ndarray:
        array = np.asarray(value, dtype=np.float64)
        if array.ndim == 1:
            array = array.reshape(1, -1)
        return frozen_array(array, ndim=2, name="values")

    @model_validator(mode="before")
    @classmethod
    def _default_labels(cls, data: Any) -> Any:
        if isinstance(data, dict) and not data.get("labels"):
            values = np.asarray(data.get("values"))
            n_series = values.shape[0] if values.ndim == 2 else 1
            kind = TraceKind(data.get("kind")).value
            data = {**data, "labels": tuple(f"{kind}-{i + 1}" for i in range(n_series))}
        return data

    @model_validator(mode="after")
    def _check_labels(self) -> "TraceSet":
        if len(self.labels) != self.n_series:
            raise ValueError(f"{len(self.labels)} labels for {self.n_series} series")
        return self

    @property
    def n_series(self) -> int:
        return int(self.values.shape[0])

    @property
    def length(self) -> int:
        return int(self.values.shape[1])

    def with_values(self, values: np.ndarray, kind: Optional[TraceKind] = None) -> "TraceSet":
        """Copy with new values; labels are kept when the series count is unchanged."""
        kind = kind or self.kind
        keep_labels = kind == self.kind and np.shape(values)[0] == self.n_series
        return TraceSet(
            values=values,
            kind=kind,
            bin_seconds=self.bin_seconds,
            labels=self.labels if keep_labels else (),
        )

    def window(self, start: int, stop: int) -> np.ndarray:
        """Read-only view of bins ``start`` (inclusive) to ``stop`` (exclusive)."""
        return self.values[:, start:stop]


class AnomalySpec(BaseModel):
    """Additive mean shift on one flow from ``onset`` onwards."""

    model_config = ConfigDict(frozen=True)

    flow_index: int = Field(ge=1, description="1-based flow index")
    onset: int = Field(ge=0, description="First affected time bin (0-based)")
    shift: float = Field(description="Bytes per bin added after onset")


class TrendSpec(BaseModel):
    """Sinusoidal trend added to every flow."""

    model_config = ConfigDict(frozen=True)

    amplitude: float = Field(ge=0.0)
    period: float = Field(gt=0.0, description="Period in bins")
    phase: float = 0.0

"""Moment estimates and kriging predictions."""

from typing import Any, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from netkriging.models.arrays import ArrayModel, frozen_array, psd_violation

PSD_TOLERANCE = 1e-8


class MomentEstimate(ArrayModel):
    """Windowed sample mean and covariance of the link loads."""

    mean: np.ndarray
    covariance: np.ndarray
    window: int = Field(ge=1)
    at_time: int = Field(ge=0)

    @field_validator("mean", mode="before")
    @classmethod
    def _coerce_mean(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=1, name="mean")

    @field_validator("covariance", mode="before")
    @classmethod
    def _coerce_covariance(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="covariance")

    @model_validator(mode="after")
    def _check_covariance(self) -> "MomentEstimate":
        n = self.mean.shape[0]
        if self.covariance.shape != (n, n):
            raise ValueError(f"covariance shape {self.covariance.shape} does not match mean ({n})")
        scale = max(float(np.max(np.abs(self.covariance), initial=0.0)), 1.0)
        if np.max(np.abs(self.covariance - self.covariance.T), initial=0.0) > 1e-10 * scale:
            raise ValueError("covariance must be symmetric")
        if np.any(np.diag(self.covariance) < -1e-10 * scale):
            raise ValueError("covariance diagonal must be nonnegative")
        return self


class KrigingPrediction(ArrayModel):
    """Predicted unobserved loads with their error covariance."""

    predicted: np.ndarray
    error_covariance: np.ndarray
    weights: Optional[np.ndarray] = None
    used_pseudoinverse: bool = False

    @field_validator("predicted", mode="before")
    @classmethod
    def _coerce_predicted(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=1, name="predicted")

    @field_validator("error_covariance", mode="before")
    @classmethod
    def _coerce_error(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="error_covariance")

    @field_validator("weights", mode="before")
    @classmethod
    def _coerce_weights(cls, value: Any) -> Optional[np.ndarray]:
        return None if value is None else frozen_array(value, ndim=2, name="weights")

    @model_validator(mode="after")
    def _check_error_covariance(self) -> "KrigingPrediction":
        n = self.predicted.shape[0]
        if self.error_covariance.shape != (n, n):
            raise ValueError("error covariance must be |U|×|U|")
        if psd_violation(self.error_covariance) > PSD_TOLERANCE:
            raise ValueError("error covariance is not positive semidefinite")
        return self

    @property
    def error_variance(self) -> np.ndarray:
        """Diagonal of the error covariance."""
        return np.diag(self.error_covariance).copy()

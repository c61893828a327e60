"""Windowed flow means and the PCA factor matrix."""

from typing import Any, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from netkriging.core.errors import InvalidParameterError
from netkriging.models.arrays import ArrayModel, frozen_array

ORTHONORMALITY_TOLERANCE = 1e-10


class WindowedMeans(ArrayModel):
    """J × n_w matrix whose k-th column is the mean flow vector of window k."""

    means: np.ndarray
    window_bins: int = Field(ge=1)
    source_length: int = Field(ge=1)

    @field_validator("means", mode="before")
    @classmethod
    def _coerce_means(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="means")

    @model_validator(mode="after")
    def _check_windows(self) -> "WindowedMeans":
        if self.n_windows * self.window_bins > self.source_length:
            raise ValueError("windows exceed the source trace length")
        return self

    @property
    def n_flows(self) -> int:
        return int(self.means.shape[0])

    @property
    def n_windows(self) -> int:
        return int(self.means.shape[1])


class FactorMatrix(ArrayModel):
    """Orthonormal J×p basis F with the eigenvalues of the second-moment matrix."""

    factors: np.ndarray
    eigenvalues: Optional[np.ndarray] = None

    @field_validator("factors", mode="before")
    @classmethod
    def _coerce_factors(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="factors")

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def _coerce_eigenvalues(cls, value: Any) -> Optional[np.ndarray]:
        return None if value is None else frozen_array(value, ndim=1, name="eigenvalues")

    @model_validator(mode="after")
    def _check_basis(self) -> "FactorMatrix":
        gram = self.factors.T @ self.factors
        if np.max(np.abs(gram - np.eye(self.p)), initial=0.0) >= ORTHONORMALITY_TOLERANCE:
            raise ValueError("factor columns must be orthonormal")
        if self.eigenvalues is not None:
            ev = self.eigenvalues
            if ev.shape[0] != self.n_flows:
                raise ValueError("one eigenvalue per flow is required")
            tolerance = 1e-10 * max(float(ev[0]) if ev.size else 0.0, 1.0)
            if np.any(np.diff(ev) > tolerance) or np.any(ev < -tolerance):
                raise ValueError("eigenvalues must be nonincreasing and nonnegative")
        return self

    @property
    def n_flows(self) -> int:
        return int(self.factors.shape[0])

    @property
    def p(self) -> int:
        return int(self.factors.shape[1])

    def projector(self) -> np.ndarray:
        """Orthogonal projector F Fᵗ onto the factor subspace."""
        return self.factors @ self.factors.T

    def truncate(self, p: int) -> "FactorMatrix":
        """Leading ``p`` factors."""
        if not 1 <= p <= self.p:
            raise InvalidParameterError(f"p must be in 1..{self.p}, got {p}", operation="truncate")
        return FactorMatrix(factors=self.factors[:, :p], eigenvalues=self.eigenvalues)

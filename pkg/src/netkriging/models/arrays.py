"""Shared pydantic plumbing for models that carry numpy arrays."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict


class ArrayModel(BaseModel):
    """Immutable model whose fields may be numpy arrays."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def frozen_array(value: Any, *, ndim: int, name: str, dtype: Any = np.float64) -> np.ndarray:
    """
    Copy ``value`` into a read-only array of the given rank.

    Raises:
        ValueError: Wrong rank or non-finite entries
    """
    array = np.array(value, dtype=dtype, copy=True)
    if ndim == 2 and array.ndim == 0:
        array = array.reshape(1, 1)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if np.issubdtype(array.dtype, np.floating) and not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite values")
    array.flags.writeable = False
    return array


def psd_violation(matrix: np.ndarray) -> float:
    """Most negative eigenvalue relative to the matrix scale (0 when PSD)."""
    if matrix.size == 0:
        return 0.0
    eigenvalues = np.linalg.eigvalsh(0.5 * (matrix + matrix.T))
    scale = max(float(np.max(np.abs(eigenvalues))), 1.0)
    return max(0.0, -float(eigenvalues[0]) / scale)

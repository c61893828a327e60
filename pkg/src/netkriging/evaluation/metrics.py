"""Prediction scores."""

import numpy as np

from netkriging.core.errors import DimensionMismatchError, InvalidInputError


def remse(predicted: np.ndarray, actual: np.ndarray) -> float:
    """
    Relative mean squared error Σ_t‖Ŷ(t) − Y(t)‖² / Σ_t‖Y(t)‖².

    Raises:
        DimensionMismatchError: Shapes differ
        InvalidInputError: ``actual`` is identically zero
    """
    predicted = np.asarray(predicted, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    if predicted.shape != actual.shape:
        raise DimensionMismatchError(
            f"predicted {predicted.shape} vs actual {actual.shape}", "remse"
        )
    energy = float(np.sum(actual**2))
    if energy == 0.0:
        raise InvalidInputError("actual series is identically zero", "remse")
    return float(np.sum((predicted - actual) ** 2)) / energy


def mse(predicted: np.ndarray, actual: np.ndarray) -> float:
    """Mean squared error per series and bin."""
    predicted = np.asarray(predicted, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    if predicted.shape != actual.shape:
        raise DimensionMismatchError(f"predicted {predicted.shape} vs actual {actual.shape}", "mse")
    return float(np.mean((predicted - actual) ** 2))

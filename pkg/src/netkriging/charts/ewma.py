"""EWMA recursion and its variance for independent inputs."""

import numpy as np
from scipy.signal import lfilter

from netkriging.core.errors import InvalidParameterError
from netkriging.models.chart import EwmaState


def validate_lambda(lam: float, operation: str) -> None:
    if not 0.0 < lam <= 1.0:
        raise InvalidParameterError(f"lambda must lie in (0, 1], got {lam}", operation)


def ewma_update(state: EwmaState, z: float) -> EwmaState:
    """Z̃_t = λZ_t + (1−λ)Z̃_{t−1}; a fresh state starts from Z̃₀ = 0."""
    previous = state.current if state.initialized else 0.0
    return state.model_copy(
        update={
            "current": state.lam * float(z) + (1.0 - state.lam) * previous,
            "initialized": True,
            "steps": state.steps + 1,
        }
    )


def ewma_series(values: np.ndarray, lam: float, initial: float = 0.0) -> np.ndarray:
    """Run :func:`ewma_update` over a whole series starting from Z̃₀ = ``initial``."""
    validate_lambda(lam, "ewma_series")
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        return values.copy()
    statistic, _ = lfilter([lam], [1.0, -(1.0 - lam)], values, zi=[(1.0 - lam) * initial])
    return np.asarray(statistic)


def iid_ewma_variance(lam: float, sigma2: float) -> float:
    """Stationary EWMA variance λ/(2−λ)·σ² for uncorrelated inputs."""
    validate_lambda(lam, "iid_ewma_variance")
    return lam / (2.0 - lam) * sigma2

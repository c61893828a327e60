"""Variance of the window mean under temporal dependence."""

from typing import Callable, Sequence, Union

import numpy as np

from netkriging.core.errors import InvalidParameterError

Autocorrelation = Union[Callable[[np.ndarray], np.ndarray], Sequence[float], np.ndarray]


def sigma_m2(sigma2: float, rho: Autocorrelation, m: int) -> float:
    """
    σ_m² = (σ²/m)(1 + 2 Σ_{i=1}^{m−1} (1 − i/m) ρ(i)).

    Args:
        sigma2: Marginal variance σ²
        rho: Callable on an array of lags, or a sequence indexed by lag (entry 0 unused)
        m: Window length

    Raises:
        InvalidParameterError: m < 1, or a sequence shorter than m
    """
    if m < 1:
        raise InvalidParameterError(f"m must be ≥ 1, got {m}", "sigma_m2")
    lags = np.arange(1, m, dtype=np.int64)
    if callable(rho):
        correlations = np.asarray(rho(lags), dtype=np.float64)
    else:
        values = np.asarray(rho, dtype=np.float64)
        if values.shape[0] < m:
            raise InvalidParameterError(
                f"autocorrelation holds {values.shape[0]} lags, need {m}", "sigma_m2"
            )
        correlations = values[1:m]
    total = 1.0 + 2.0 * float(np.sum((1.0 - lags / m) * correlations))
    return sigma2 / m * total

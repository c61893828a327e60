"""
EWMA variance for fractional Gaussian noise inputs.

The stationary variance is the integral of the EWMA transfer function against
the fGn spectral density,

    λ²σ²/C₂(H)² ∫ 2(1−cos θ)|θ|^{−2H−1} / (λ² + (2−2λ)(1−cos θ)) dθ,

with C₂(H)² = π/(HΓ(2H) sin(Hπ)). Everything except |θ|^{−2H−1} is 2π-periodic,
so the real line is folded onto [0, 2π): the k = 0 term keeps the algebraic
singularity at the origin and is handled by a weighted quadrature, the k ≥ 1
terms sum to a Hurwitz zeta function.
"""

from functools import lru_cache
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_function
from scipy.special import zeta
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from netkriging.charts.ewma import validate_lambda
from netkriging.core.config import settings
from netkriging.core.errors import InvalidParameterError, QuadratureError
from netkriging.core.logging import get_logger


logger = get_logger(__name__)

_TWO_PI = 2.0 * np.pi


def spectral_constant(hurst: float) -> float:
    """C₂(H)² = π / (HΓ(2H) sin(Hπ))."""
    return float(np.pi / (hurst * gamma_function(2.0 * hurst) * np.sin(hurst * np.pi)))


def _one_minus_cos(theta: np.ndarray) -> np.ndarray:
    return 2.0 * np.sin(0.5 * theta) ** 2


def _denominator(theta: np.ndarray, lam: float) -> np.ndarray:
    return lam**2 + (2.0 - 2.0 * lam) * _one_minus_cos(theta)


def _integrate(
    integrand: Callable[[float], float],
    limit: int,
    rel_tol: float,
    weighted_exponent: Optional[float] = None,
) -> Tuple[float, float]:
    kwargs: Dict[str, Any] = {}
    if weighted_exponent is not None:
        kwargs = {"weight": "alg", "wvar": (weighted_exponent, 0.0)}
    out = quad(
        integrand, 0.0, _TWO_PI, epsabs=0.0, epsrel=rel_tol, limit=limit, full_output=1, **kwargs
    )
    value, abserr = float(out[0]), float(out[1])
    if len(out) > 3 or not np.isfinite(value):
        raise QuadratureError(
            f"quadrature stopped early with {limit} subdivisions", abserr, "lrd_ewma_variance"
        )
    return value, abserr


def _folded_integral(lam: float, hurst: float, rel_tol: float, limit: int) -> float:
    s = 2.0 * hurst + 1.0

    def near_origin(theta: float) -> float:
        # 2(1−cos θ)/θ² = sinc(θ/2π)², leaving θ^{1−2H} to the quadrature weight
        return float(np.sinc(theta / _TWO_PI) ** 2 / _denominator(theta, lam))

    def shifted_images(theta: float) -> float:
        transfer = 2.0 * _one_minus_cos(theta) / _denominator(theta, lam)
        return float(transfer * _TWO_PI ** (-s) * zeta(s, 1.0 + theta / _TWO_PI))

    head, _ = _integrate(near_origin, limit, rel_tol, weighted_exponent=1.0 - 2.0 * hurst)
    tail, _ = _integrate(shifted_images, limit, rel_tol)
    return 2.0 * (head + tail)


@lru_cache(maxsize=256)
def _unit_variance(lam: float, hurst: float, rel_tol: float) -> float:
    """LRD EWMA variance for σ² = 1."""
    integral = float("nan")
    for attempt in Retrying(
        stop=stop_after_attempt(settings.quadrature_attempts),
        retry=retry_if_exception_type(QuadratureError),
        reraise=True,
    ):
        with attempt:
            number = attempt.retry_state.attempt_number
            limit = settings.quadrature_subdivisions * 2 ** (number - 1)
            if number > 1:
                logger.warning("quadrature_retry", attempt=number, limit=limit, hurst=hurst)
            integral = _folded_integral(lam, hurst, rel_tol, limit)
    if not integral > 0.0:
        raise QuadratureError("integral is not positive", 0.0, "lrd_ewma_variance")
    return lam**2 * integral / spectral_constant(hurst)


def lrd_ewma_variance(
    lam: float, sigma2: float, hurst: float, rel_tol: Optional[float] = None
) -> float:
    """
    Stationary variance of the EWMA of fGn with Hurst parameter ``hurst``.

    Reduces to λ/(2−λ)·σ² at H = 1/2 and to σ² at λ = 1.

    Args:
        lam: Smoothing weight in (0, 1]
        sigma2: Input variance
        hurst: Hurst parameter in (0, 1)
        rel_tol: Relative quadrature tolerance; defaults to ``settings.quadrature_rel_tol``

    Raises:
        QuadratureError: Still unconverged after the configured retries
    """
    validate_lambda(lam, "lrd_ewma_variance")
    if not 0.0 < hurst < 1.0:
        raise InvalidParameterError(f"hurst must lie in (0, 1), got {hurst}", "lrd_ewma_variance")
    rel_tol = settings.quadrature_rel_tol if rel_tol is None else rel_tol
    return sigma2 * _unit_variance(float(lam), float(hurst), float(rel_tol))

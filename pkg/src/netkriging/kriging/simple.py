"""Windowed moments and the simple-kriging baseline."""

import numpy as np

from netkriging.core.errors import (
    DimensionMismatchError,
    InsufficientHistoryError,
    ScenarioError,
)
from netkriging.core.logging import get_logger
from netkriging.models.kriging import KrigingPrediction, MomentEstimate
from netkriging.models.topology import ObservationScenario
from netkriging.models.traffic import TraceSet
from netkriging.utils.linalg import clip_psd, solve, symmetrize


logger = get_logger(__name__)


def windowed_moments(links: TraceSet, t0: int, m: int) -> MomentEstimate:
    """
    Sample mean and unbiased covariance of Y(t0−m), ..., Y(t0−1).

    Args:
        links: Link-level trace, row i is link i+1
        t0: Prediction time; its own bin is excluded
        m: Window length, at least 2

    Raises:
        InsufficientHistoryError: Fewer than m past bins or m < 2
    """
    if m < 2:
        raise InsufficientHistoryError(f"window must be ≥ 2 bins, got {m}", "windowed_moments")
    if t0 - m < 0 or t0 > links.length:
        raise InsufficientHistoryError(
            f"need bins {t0 - m}..{t0 - 1} of a {links.length}-bin trace", "windowed_moments"
        )
    window = links.window(t0 - m, t0)
    covariance = np.atleast_2d(np.cov(window, ddof=1))
    return MomentEstimate(
        mean=window.mean(axis=1),
        covariance=symmetrize(covariance),
        window=m,
        at_time=t0,
    )


def _indices(scenario: ObservationScenario, n_links: int) -> tuple[list[int], list[int]]:
    if max(scenario.all_links) > n_links:
        raise ScenarioError(
            f"scenario uses links beyond the {n_links} modelled links", operation="simple_krige"
        )
    return [i - 1 for i in scenario.observed], [i - 1 for i in scenario.unobserved]


def simple_krige(
    moments: MomentEstimate,
    y_o: np.ndarray,
    scenario: ObservationScenario,
    allow_pinv: bool = True,
) -> KrigingPrediction:
    """
    Best linear predictor of the unobserved links given known moments.

    Ŷ_u = μ_u + Σ_uo Σ_oo⁻¹ (y_o − μ_o), with error covariance
    Σ_uu − Σ_uo Σ_oo⁻¹ Σ_ou.

    Args:
        moments: Mean and covariance over all links
        y_o: Observed loads at t0 in ``scenario.observed`` order
        scenario: Observed and unobserved links
        allow_pinv: Fall back to the pseudo-inverse when Σ_oo is singular

    Raises:
        SingularMatrixError: Σ_oo singular and ``allow_pinv`` is False
    """
    observed, unobserved = _indices(scenario, moments.mean.shape[0])
    y_o = np.asarray(y_o, dtype=np.float64).ravel()
    if y_o.shape[0] != len(observed):
        raise DimensionMismatchError(
            f"{y_o.shape[0]} observed values for {len(observed)} observed links", "simple_krige"
        )

    cov = moments.covariance
    sigma_oo = cov[np.ix_(observed, observed)]
    sigma_ou = cov[np.ix_(observed, unobserved)]
    sigma_uu = cov[np.ix_(unobserved, unobserved)]

    solution = solve(sigma_oo, sigma_ou, allow_pinv=allow_pinv, operation="simple_krige")
    gain = solution.value.T
    predicted = moments.mean[unobserved] + gain @ (y_o - moments.mean[observed])
    error = clip_psd(sigma_uu - gain @ sigma_ou, scale=float(np.max(np.abs(sigma_uu))))

    return KrigingPrediction(
        predicted=predicted,
        error_covariance=error,
        weights=gain,
        used_pseudoinverse=solution.used_pseudoinverse,
    )

"""Ordinary kriging with variograms implied by the routing matrix."""

from typing import Tuple, Union

import numpy as np

from netkriging.core.errors import DimensionMismatchError, InvalidInputError, InvalidParameterError
from netkriging.core.logging import get_logger
from netkriging.models.kriging import KrigingPrediction
from netkriging.models.topology import ObservationScenario, RoutingMatrix
from netkriging.utils.linalg import clip_psd, projection_coefficient, solve


logger = get_logger(__name__)

MatrixLike = Union[RoutingMatrix, np.ndarray]


def _as_matrix(routing: MatrixLike) -> np.ndarray:
    if isinstance(routing, RoutingMatrix):
        return routing.as_float()
    return np.atleast_2d(np.asarray(routing, dtype=np.float64))


def variogram_matrix(routing: MatrixLike, sigma_x2: float) -> np.ndarray:
    """E(Y_i − Y_j)² = σ²_X [(AAᵗ)_ii + (AAᵗ)_jj − 2(AAᵗ)_ij] for every link pair."""
    a = _as_matrix(routing)
    gram = a @ a.T
    diagonal = np.diag(gram)
    return sigma_x2 * (diagonal[:, np.newaxis] + diagonal[np.newaxis, :] - 2.0 * gram)


def estimate_sigma_x(sigma_yo_hat: np.ndarray, a_o: np.ndarray) -> float:
    """
    Scale σ̂²_X minimising ‖vec(Σ̂_Yo) − σ² vec(A_oA_oᵗ)‖.

    Raises:
        InvalidInputError: A_oA_oᵗ is zero
    """
    basis = a_o @ a_o.T
    sigma_yo_hat = np.atleast_2d(np.asarray(sigma_yo_hat, dtype=np.float64))
    if sigma_yo_hat.shape != basis.shape:
        raise DimensionMismatchError(
            f"covariance {sigma_yo_hat.shape} does not match A_o A_oᵗ {basis.shape}",
            "estimate_sigma_x",
        )
    try:
        return projection_coefficient(sigma_yo_hat, basis)
    except ZeroDivisionError as e:
        raise InvalidInputError("A_o A_oᵗ is zero", operation="estimate_sigma_x") from e


def ordinary_weights(
    routing: MatrixLike, scenario: ObservationScenario, sigma_x2: float
) -> Tuple[np.ndarray, np.ndarray, bool]:
    """
    Solve the Lagrange-augmented variogram system for every unobserved link.

    Returns:
        Weights (|U|×|O|, rows sum to 1), Lagrange multipliers (|U|), pseudo-inverse flag
    """
    if sigma_x2 <= 0:
        raise InvalidParameterError(f"sigma_x2 must be > 0, got {sigma_x2}", "ordinary_krige")
    a = _as_matrix(routing)
    if max(scenario.all_links) > a.shape[0]:
        raise DimensionMismatchError("scenario exceeds the routing matrix", "ordinary_krige")

    observed = [i - 1 for i in scenario.observed]
    unobserved = [i - 1 for i in scenario.unobserved]
    variogram = variogram_matrix(a, sigma_x2)
    n_obs = len(observed)

    system = np.zeros((n_obs + 1, n_obs + 1))
    system[:n_obs, :n_obs] = variogram[np.ix_(observed, observed)]
    system[:n_obs, n_obs] = 1.0
    system[n_obs, :n_obs] = 1.0

    rhs = np.ones((n_obs + 1, len(unobserved)))
    rhs[:n_obs, :] = variogram[np.ix_(observed, unobserved)]

    solution = solve(system, rhs, operation="ordinary_krige")
    if solution.used_pseudoinverse:
        logger.warning("ordinary_kriging_singular_system", observed=list(scenario.observed))
    weights = solution.value[:n_obs, :].T
    multipliers = solution.value[n_obs, :]
    return weights, multipliers, solution.used_pseudoinverse


def ordinary_krige(
    routing: MatrixLike,
    scenario: ObservationScenario,
    sigma_x2: float,
    y_o: np.ndarray,
) -> KrigingPrediction:
    """
    Ordinary-kriging prediction λᵗ y_o with 1ᵗλ = 1.

    The Lagrange multiplier is not part of the prediction. The error covariance
    is σ²_X (A_u − ΛA_o)(A_u − ΛA_o)ᵗ, whose diagonal is the usual
    ordinary-kriging variance.

    Args:
        routing: Routing matrix A (rows = links)
        scenario: Observed and unobserved links
        sigma_x2: Flow variance scale σ²_X > 0
        y_o: Observed loads in ``scenario.observed`` order

    Raises:
        InvalidParameterError: sigma_x2 ≤ 0
    """
    weights, _, used_pinv = ordinary_weights(routing, scenario, sigma_x2)
    y_o = np.asarray(y_o, dtype=np.float64).ravel()
    if y_o.shape[0] != weights.shape[1]:
        raise DimensionMismatchError(
            f"{y_o.shape[0]} observed values for {weights.shape[1]} observed links",
            "ordinary_krige",
        )
    a = _as_matrix(routing)
    a_o = a[[i - 1 for i in scenario.observed]]
    a_u = a[[i - 1 for i in scenario.unobserved]]
    residual = a_u - weights @ a_o
    error = sigma_x2 * (residual @ residual.T)
    return KrigingPrediction(
        predicted=weights @ y_o,
        error_covariance=clip_psd(error, scale=sigma_x2 * float(np.max(a_u.sum(axis=1)))),
        weights=weights,
        used_pseudoinverse=used_pinv,
    )

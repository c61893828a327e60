"""Network-specific model: covariance blocks, fitting and plug-in prediction."""

from pathlib import Path
from typing import Optional, Union

import numpy as np

from netkriging.core.errors import (
    DimensionMismatchError,
    InsufficientHistoryError,
    InvalidInputError,
)
from netkriging.core.logging import get_logger
from netkriging.joint.igls import flow_weights, igls_estimate, relevant_flows, ybar
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig, ModelFit, SigmaBlocks
from netkriging.models.kriging import KrigingPrediction
from netkriging.models.topology import ObservationScenario, RoutingMatrix
from netkriging.models.traffic import TraceSet
from netkriging.utils.linalg import clip_psd, projection_coefficient, solve, symmetrize


logger = get_logger(__name__)

MatrixLike = Union[RoutingMatrix, np.ndarray]


def _as_matrix(routing: MatrixLike) -> np.ndarray:
    if isinstance(routing, RoutingMatrix):
        return routing.as_float()
    return np.atleast_2d(np.asarray(routing, dtype=np.float64))


def sigma_blocks(
    beta: np.ndarray,
    factors: FactorMatrix,
    routing: MatrixLike,
    gamma: float,
    scenario: ObservationScenario,
    strict: bool = True,
) -> SigmaBlocks:
    """
    Σ(β) = A diag(|Fβ|^{2γ}) Aᵗ split into (O, U) blocks.

    Positivity of Fβ is enforced on the flows crossing an observed link.
    """
    a = _as_matrix(routing)
    if max(scenario.all_links) > a.shape[0]:
        raise DimensionMismatchError("scenario exceeds the routing matrix", "sigma_blocks")
    if a.shape[1] != factors.n_flows:
        raise DimensionMismatchError(
            f"A has {a.shape[1]} columns for {factors.n_flows} flows", "sigma_blocks"
        )
    a_o = a[[i - 1 for i in scenario.observed]]
    a_u = a[[i - 1 for i in scenario.unobserved]]
    weights = flow_weights(
        factors.factors @ np.asarray(beta, dtype=np.float64),
        gamma,
        relevant_flows(a_o),
        strict=strict,
        operation="sigma_blocks",
    )
    ou = (a_o * weights) @ a_u.T
    return SigmaBlocks(
        oo=symmetrize((a_o * weights) @ a_o.T),
        ou=ou,
        uo=ou.T,
        uu=symmetrize((a_u * weights) @ a_u.T),
    )


def estimate_sigma(sigma_yo_hat: np.ndarray, sigma_oo: np.ndarray) -> float:
    """
    σ̂² = vec(Σ̂_Yo)ᵗ vec(Σ_oo(β̂)) / ‖vec(Σ_oo(β̂))‖².

    Raises:
        InvalidInputError: Σ_oo(β̂) is zero
    """
    sigma_yo_hat = np.atleast_2d(np.asarray(sigma_yo_hat, dtype=np.float64))
    sigma_oo = np.atleast_2d(np.asarray(sigma_oo, dtype=np.float64))
    if sigma_yo_hat.shape != sigma_oo.shape:
        raise DimensionMismatchError(
            f"Σ̂_Yo {sigma_yo_hat.shape} vs Σ_oo {sigma_oo.shape}", "estimate_sigma"
        )
    try:
        coefficient = projection_coefficient(sigma_yo_hat, sigma_oo)
    except ZeroDivisionError as e:
        raise InvalidInputError("Σ_oo(β̂) is zero", operation="estimate_sigma") from e
    return max(coefficient, 0.0)


def fit_model(
    links: TraceSet,
    t0: int,
    routing: MatrixLike,
    factors: FactorMatrix,
    scenario: ObservationScenario,
    config: Optional[ModelConfig] = None,
) -> ModelFit:
    """
    Fit the network-specific model on the m bins ending at ``t0``.

    Only the observed rows of ``links`` are read.

    Args:
        links: Link trace (row i is link i+1)
        t0: Prediction time, 0-based; its own bin is part of the window
        routing: Routing matrix A
        factors: Factor matrix, truncated to ``config.p`` columns when wider
        scenario: Observed and unobserved links
        config: Calibration parameters

    Raises:
        InsufficientHistoryError: Fewer than m bins end at t0
        NonPositiveMeanError: The iterated estimate loses positivity
    """
    config = config or ModelConfig()
    if factors.p != config.p:
        factors = factors.truncate(config.p)
    a = _as_matrix(routing)
    if links.n_series != a.shape[0]:
        raise DimensionMismatchError(
            f"{links.n_series} link series for {a.shape[0]} routing rows", "fit_model"
        )
    observed = [i - 1 for i in scenario.observed]
    y_o = links.values[observed]
    m = config.window_m
    if t0 - m + 1 < 0 or t0 >= links.length:
        raise InsufficientHistoryError(
            f"window of {m} bins ending at {t0} does not fit {links.length} bins", "fit_model"
        )

    a_o = a[observed]
    ybar_o = ybar(y_o, t0, m)
    estimate = igls_estimate(ybar_o, a_o, factors, config.gamma, config)
    blocks = sigma_blocks(
        estimate.beta, factors, a, config.gamma, scenario, strict=config.strict_positivity
    )

    if m >= 2:
        window = y_o[:, t0 - m + 1 : t0 + 1]
        sigma_yo_hat = np.atleast_2d(np.cov(window, ddof=1))
        sigma2_hat = estimate_sigma(sigma_yo_hat, blocks.oo)
    else:
        sigma2_hat = 0.0

    link_means = a @ (factors.factors @ estimate.beta)
    return ModelFit(
        beta=estimate,
        sigma2_hat=sigma2_hat,
        factors=factors,
        gamma=config.gamma,
        scenario=scenario,
        blocks=blocks,
        mean_observed=link_means[observed],
        mean_unobserved=link_means[[i - 1 for i in scenario.unobserved]],
    )


def plug_in_predict(fit: ModelFit, y_o: np.ndarray) -> KrigingPrediction:
    """
    Plug-in predictor A_uFβ̂ + Σ_uoΣ_oo⁻¹(y_o − A_oFβ̂).

    The error covariance is σ̂²(Σ_uu − Σ_uoΣ_oo⁻¹Σ_ou); the point prediction
    does not depend on σ̂².
    """
    y_o = np.asarray(y_o, dtype=np.float64).ravel()
    if y_o.shape != fit.mean_observed.shape:
        raise DimensionMismatchError(
            f"{y_o.shape[0]} observed values for {fit.mean_observed.shape[0]} observed links",
            "plug_in_predict",
        )
    blocks = fit.blocks
    solution = solve(blocks.oo, blocks.ou, operation="plug_in_predict")
    gain = solution.value.T
    predicted = fit.mean_unobserved + gain @ (y_o - fit.mean_observed)
    conditional = blocks.uu - gain @ blocks.ou
    scale = fit.sigma2_hat * float(np.max(np.abs(blocks.uu), initial=0.0))
    return KrigingPrediction(
        predicted=predicted,
        error_covariance=clip_psd(fit.sigma2_hat * conditional, scale=scale),
        weights=gain,
        used_pseudoinverse=solution.used_pseudoinverse,
    )


def write_model_fit(fit: ModelFit, path: Path, factor_file: Optional[str] = None) -> Path:
    """Export the fit summary as JSON."""
    path.write_text(fit.to_record(factor_file).model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path

"""Iterated generalized least squares for the factor loadings β."""

from typing import List, Optional

import numpy as np

from netkriging.core.errors import (
    DimensionMismatchError,
    InsufficientHistoryError,
    NonPositiveMeanError,
    RankDeficientError,
)
from netkriging.core.logging import get_logger
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import BetaEstimate, ModelConfig
from netkriging.utils.linalg import Solution, inverse, is_rank_deficient, solve, symmetrize


logger = get_logger(__name__)


def ybar(y_o: np.ndarray, t0: int, m: int) -> np.ndarray:
    """
    Average of Y_o(t0 − k) for k = 0..m−1.

    Args:
        y_o: Observed loads, one row per observed link
        t0: Prediction time (0-based bin index, included in the average)
        m: Window length

    Raises:
        InsufficientHistoryError: Fewer than m bins end at t0
    """
    y_o = np.atleast_2d(np.asarray(y_o, dtype=np.float64))
    if m < 1 or t0 - m + 1 < 0 or t0 >= y_o.shape[1]:
        raise InsufficientHistoryError(
            f"window of {m} bins ending at {t0} does not fit {y_o.shape[1]} bins", "ybar"
        )
    return y_o[:, t0 - m + 1 : t0 + 1].mean(axis=1)


def relevant_flows(a: np.ndarray) -> np.ndarray:
    """Boolean mask of flows carried by at least one row of ``a``."""
    return np.any(np.asarray(a) != 0, axis=0)


def flow_weights(
    mu: np.ndarray,
    gamma: float,
    relevant: np.ndarray,
    *,
    strict: bool = True,
    operation: str = "g_matrix",
) -> np.ndarray:
    """
    |Fβ|^{2γ} per flow.

    Raises:
        NonPositiveMeanError: ``strict`` and a relevant flow has a mean ≤ 0
    """
    if strict:
        bad = np.flatnonzero(relevant & (mu <= 0.0))
        if bad.size:
            raise NonPositiveMeanError([int(j) + 1 for j in bad], operation=operation)
    return np.abs(mu) ** (2.0 * gamma)


def _check_shapes(beta: np.ndarray, factors: FactorMatrix, a_o: np.ndarray, operation: str) -> None:
    if beta.shape != (factors.p,):
        raise DimensionMismatchError(
            f"beta has shape {beta.shape}, expected ({factors.p},)", operation
        )
    if a_o.shape[1] != factors.n_flows:
        raise DimensionMismatchError(
            f"A_o has {a_o.shape[1]} columns for {factors.n_flows} flows", operation
        )


def _g_solution(
    beta: np.ndarray,
    factors: FactorMatrix,
    a_o: np.ndarray,
    gamma: float,
    strict: bool = True,
    operation: str = "g_matrix",
) -> Solution:
    beta = np.asarray(beta, dtype=np.float64)
    a_o = np.atleast_2d(np.asarray(a_o, dtype=np.float64))
    _check_shapes(beta, factors, a_o, operation)
    weights = flow_weights(
        factors.factors @ beta, gamma, relevant_flows(a_o), strict=strict, operation=operation
    )
    return inverse(symmetrize((a_o * weights) @ a_o.T), operation=operation)


def g_matrix(
    beta: np.ndarray,
    factors: FactorMatrix,
    a_o: np.ndarray,
    gamma: float,
    strict: bool = True,
) -> np.ndarray:
    """
    G(β) = [A_o diag(|Fβ|^{2γ}) A_oᵗ]⁻¹.

    Falls back to the pseudo-inverse when A_o diag(·) A_oᵗ is singular.

    Raises:
        NonPositiveMeanError: Fβ has a nonpositive entry on a flow seen by A_o
    """
    return symmetrize(_g_solution(beta, factors, a_o, gamma, strict).value)


def _gls_step(
    g: np.ndarray, design: np.ndarray, ybar_o: np.ndarray, operation: str
) -> Solution:
    """[(A_oF)ᵗ G A_oF]⁻¹ (A_oF)ᵗ G ȳ_o."""
    weighted = design.T @ g
    return solve(symmetrize(weighted @ design), weighted @ ybar_o, operation=operation)


def igls_estimate(
    ybar_o: np.ndarray,
    a_o: np.ndarray,
    factors: FactorMatrix,
    gamma: float,
    config: Optional[ModelConfig] = None,
    noise_scale: float = 1.0,
) -> BetaEstimate:
    """
    Iterated GLS estimate of β.

    β̂₁ is the OLS solution. Each further iterate re-weights with G(β̂_k); the loop
    stops once the step norm is below ``convergence_eps`` and at least
    ``min_iterations`` iterates exist, or after ``max_iterations`` iterates.

    Args:
        ybar_o: Window mean of the observed loads
        a_o: Observed rows of the routing matrix
        factors: Factor matrix F
        gamma: Mean–variance exponent
        config: Iteration controls; defaults come from settings
        noise_scale: Assumed σ_m², which multiplies the GLS weight matrix and cancels

    Raises:
        NonPositiveMeanError: An iterate has Fβ̂_k ≤ 0 on an observed flow under
            strict positivity
    """
    config = config or ModelConfig(gamma=gamma, p=factors.p)
    ybar_o = np.asarray(ybar_o, dtype=np.float64).ravel()
    a_o = np.atleast_2d(np.asarray(a_o, dtype=np.float64))
    if a_o.shape[0] != ybar_o.shape[0]:
        raise DimensionMismatchError(
            f"{ybar_o.shape[0]} observed means for {a_o.shape[0]} observed links", "igls_estimate"
        )
    design = a_o @ factors.factors

    ols = solve(
        symmetrize(design.T @ design), design.T @ ybar_o, operation="igls_estimate"
    )
    used_pinv = ols.used_pseudoinverse
    trajectory: List[np.ndarray] = [ols.value]
    converged = False
    step = float("inf")

    while len(trajectory) < config.max_iterations:
        g = _g_solution(
            trajectory[-1], factors, a_o, gamma, config.strict_positivity, "igls_estimate"
        )
        update = _gls_step(g.value / noise_scale, design, ybar_o, "igls_estimate")
        used_pinv = used_pinv or g.used_pseudoinverse or update.used_pseudoinverse
        step = float(np.linalg.norm(update.value - trajectory[-1]))
        trajectory.append(update.value)
        if step < config.convergence_eps and len(trajectory) >= config.min_iterations:
            converged = True
            break

    if config.strict_positivity:
        flow_weights(
            factors.factors @ trajectory[-1],
            gamma,
            relevant_flows(a_o),
            operation="igls_estimate",
        )
    if converged:
        logger.debug("igls_converged", iterations=len(trajectory), step=step)
    else:
        logger.warning("igls_not_converged", iterations=len(trajectory), step=step)

    return BetaEstimate(
        beta=trajectory[-1],
        iterations_run=len(trajectory),
        converged=converged,
        used_pseudoinverse=used_pinv,
        trajectory=np.vstack(trajectory),
    )


def exact_gls_estimate(
    ybar_o: np.ndarray,
    a_o: np.ndarray,
    factors: FactorMatrix,
    gamma: float,
    beta: np.ndarray,
) -> np.ndarray:
    """One GLS step weighted with the true β: C(β) ȳ_o."""
    a_o = np.atleast_2d(np.asarray(a_o, dtype=np.float64))
    g = _g_solution(beta, factors, a_o, gamma, operation="exact_gls_estimate")
    design = a_o @ factors.factors
    ybar_o = np.asarray(ybar_o, dtype=np.float64).ravel()
    return _gls_step(g.value, design, ybar_o, "exact_gls_estimate").value


def gls_covariance(
    beta: np.ndarray, factors: FactorMatrix, a_o: np.ndarray, gamma: float
) -> np.ndarray:
    """
    Σ_GLS(β) = [(A_oF)ᵗ G(β) A_oF]⁻¹.

    Raises:
        RankDeficientError: A_oF lacks full column rank
    """
    a_o = np.atleast_2d(np.asarray(a_o, dtype=np.float64))
    design = a_o @ factors.factors
    information = symmetrize(design.T @ g_matrix(beta, factors, a_o, gamma) @ design)
    if is_rank_deficient(information):
        raise RankDeficientError(
            f"(A_oF)ᵗ G A_oF is rank deficient for p={factors.p}", operation="gls_covariance"
        )
    return symmetrize(inverse(information, allow_pinv=False, operation="gls_covariance").value)

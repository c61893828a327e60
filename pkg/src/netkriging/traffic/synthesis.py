"""Synthetic flow-level traffic with a mean–variance power law."""

from typing import Optional, Tuple

import numpy as np

from netkriging.core.config import settings
from netkriging.core.errors import InvalidInputError, InvalidParameterError
from netkriging.core.logging import get_logger
from netkriging.models.traffic import AnomalySpec, TraceKind, TraceSet, TrendSpec
from netkriging.traffic.fgn import SeedLike, unit_fgn_matrix


logger = get_logger(__name__)


def _check_hurst(hurst: float, operation: str) -> None:
    if not 0.0 < hurst < 1.0:
        raise InvalidParameterError(f"hurst must be in (0, 1), got {hurst}", operation)


def synthesize_factor_flows(
    loadings: np.ndarray,
    beta_path: np.ndarray,
    hurst: float,
    sigma: float,
    gamma: float,
    seed: SeedLike = None,
    bin_seconds: Optional[float] = None,
) -> TraceSet:
    """
    Flows X(t) = μ(t) + σ μ(t)^γ ∘ Z(t) with μ(t) = F₀ β(t).

    Each Z_j is an independent unit-variance fGn series.

    Args:
        loadings: J×r nonnegative mean loadings F₀
        beta_path: r×T coefficients β(t) (an r-vector gives constant means)
        hurst: Hurst parameter of every flow
        sigma: Scale of the mean–variance law
        gamma: Mean–variance exponent
        seed: Seed or generator
        bin_seconds: Bin width; defaults to ``settings.bin_seconds``

    Raises:
        InvalidInputError: A mean is nonpositive at some time
    """
    _check_hurst(hurst, "synthesize_flows")
    if sigma < 0:
        raise InvalidParameterError(f"sigma must be ≥ 0, got {sigma}", "synthesize_flows")
    loadings = np.atleast_2d(np.asarray(loadings, dtype=np.float64))
    beta_path = np.asarray(beta_path, dtype=np.float64)
    if beta_path.ndim == 1:
        beta_path = beta_path[:, np.newaxis]
    means = loadings @ beta_path
    if np.any(means <= 0):
        flows = np.unique(np.nonzero(means <= 0)[0]) + 1
        raise InvalidInputError(
            f"flow means must be positive; flows {flows.tolist()} are not",
            operation="synthesize_flows",
        )
    return _realize(means, hurst, sigma, gamma, seed, bin_seconds)


def synthesize_flows(
    mu: np.ndarray,
    hurst: float,
    sigma: float,
    gamma: float,
    length: int,
    seed: SeedLike = None,
    bin_seconds: Optional[float] = None,
) -> TraceSet:
    """
    Stationary flows X_j(t) = μ_j + σ μ_j^γ Z_j(t), mutually independent.

    Raises:
        InvalidInputError: Some μ_j ≤ 0
    """
    _check_hurst(hurst, "synthesize_flows")
    mu = np.asarray(mu, dtype=np.float64).ravel()
    if np.any(mu <= 0):
        offending = (np.flatnonzero(mu <= 0) + 1).tolist()
        raise InvalidInputError(
            f"flow means must be positive; flows {offending} are not",
            operation="synthesize_flows",
        )
    if sigma < 0:
        raise InvalidParameterError(f"sigma must be ≥ 0, got {sigma}", "synthesize_flows")
    if length < 1:
        raise InvalidParameterError(f"length must be ≥ 1, got {length}", "synthesize_flows")
    means = np.broadcast_to(mu[:, np.newaxis], (mu.shape[0], length))
    return _realize(means, hurst, sigma, gamma, seed, bin_seconds)


def _realize(
    means: np.ndarray,
    hurst: float,
    sigma: float,
    gamma: float,
    seed: SeedLike,
    bin_seconds: Optional[float],
) -> TraceSet:
    rng = np.random.default_rng(seed)
    n_flows, length = means.shape
    noise = unit_fgn_matrix(hurst, n_flows, length, rng)
    values = means + sigma * means**gamma * noise
    logger.debug("flows_synthesized", flows=n_flows, length=length, hurst=hurst, gamma=gamma)
    return TraceSet(
        values=values,
        kind=TraceKind.FLOW,
        bin_seconds=bin_seconds or settings.bin_seconds,
    )


def low_rank_means(
    n_flows: int, rank: int, level: float, seed: SeedLike = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nonnegative loadings F₀ (J×r) and coefficients β₀ with μ = F₀β₀ of order ``level``.

    Loadings are floored at 0.2 so every flow keeps a positive mean.
    """
    rng = np.random.default_rng(seed)
    loadings = 0.2 + rng.exponential(1.0, size=(n_flows, rank))
    beta = level * rng.uniform(0.5, 1.5, size=rank) / rank
    return loadings, beta


def full_rank_means(n_flows: int, level: float, seed: SeedLike = None) -> np.ndarray:
    """Independent lognormal flow means around ``level``."""
    rng = np.random.default_rng(seed)
    return level * rng.lognormal(mean=0.0, sigma=0.75, size=n_flows)


def drifting_beta_path(
    beta: np.ndarray,
    length: int,
    period: float,
    amplitude: float,
    seed: SeedLike = None,
) -> np.ndarray:
    """
    Slowly varying positive coefficients β(t) around ``beta``.

    Component i oscillates by the relative ``amplitude`` with a random phase.
    """
    if not 0.0 <= amplitude < 1.0:
        raise InvalidParameterError("relative drift amplitude must be in [0, 1)", "drift")
    rng = np.random.default_rng(seed)
    beta = np.asarray(beta, dtype=np.float64)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=beta.shape[0])
    t = np.arange(length)
    wave = np.sin(2.0 * np.pi * t[np.newaxis, :] / period + phases[:, np.newaxis])
    return beta[:, np.newaxis] * (1.0 + amplitude * wave)


def default_trend_amplitude(mu: np.ndarray, sigma: float, gamma: float) -> float:
    """Twice a typical flow standard deviation, 2·σ·median(μ^γ)."""
    return float(2.0 * sigma * np.median(np.asarray(mu, dtype=np.float64) ** gamma))


def add_trend(flows: TraceSet, trend: TrendSpec) -> TraceSet:
    """
    Add amplitude·sin(2πt/period + phase) to every flow.

    Raises:
        InvalidInputError: ``flows`` is link-level
    """
    if flows.kind != TraceKind.FLOW:
        raise InvalidInputError("trends are added to flow-level traces", operation="add_trend")
    t = np.arange(flows.length)
    wave = trend.amplitude * np.sin(2.0 * np.pi * t / trend.period + trend.phase)
    return flows.with_values(flows.values + wave[np.newaxis, :])


def inject_mean_shift(flows: TraceSet, anomaly: AnomalySpec) -> TraceSet:
    """
    Add ``anomaly.shift`` to flow ``anomaly.flow_index`` for t ≥ onset.

    Raises:
        InvalidInputError: Flow index or onset outside the trace
    """
    if anomaly.flow_index > flows.n_series:
        raise InvalidInputError(
            f"flow {anomaly.flow_index} outside 1..{flows.n_series}",
            operation="inject_mean_shift",
        )
    if anomaly.onset >= flows.length:
        raise InvalidInputError(
            f"onset {anomaly.onset} outside a trace of {flows.length} bins",
            operation="inject_mean_shift",
        )
    values = flows.values.copy()
    values[anomaly.flow_index - 1, anomaly.onset :] += anomaly.shift
    return flows.with_values(values)

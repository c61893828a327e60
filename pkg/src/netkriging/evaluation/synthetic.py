"""Simulated traffic standing in for measured traces."""

from typing import Optional

import numpy as np

from netkriging.core.logging import get_logger
from netkriging.mean_model.pca import fit_factor_matrix, window_means
from netkriging.models.evaluation import SyntheticTraffic
from netkriging.models.experiment import SimulationSection
from netkriging.models.factors import FactorMatrix
from netkriging.models.topology import RoutingMatrix
from netkriging.models.traffic import TraceSet, TrendSpec
from netkriging.network.routing import route_traffic
from netkriging.traffic.synthesis import (
    add_trend,
    drifting_beta_path,
    full_rank_means,
    low_rank_means,
    synthesize_factor_flows,
    synthesize_flows,
)


logger = get_logger(__name__)


def true_means(routing: RoutingMatrix, simulation: SimulationSection) -> np.ndarray:
    """
    J×T flow means of the simulated network.

    The mean structure depends only on ``simulation.seed``, so traces drawn with
    different noise seeds behave like different days of the same network.
    """
    n_flows = routing.n_routes
    loadings_seed, drift_seed = np.random.SeedSequence(simulation.seed).spawn(2)
    if simulation.full_rank_means:
        mu = full_rank_means(n_flows, simulation.mean_level, loadings_seed)
        return np.repeat(mu[:, np.newaxis], simulation.length, axis=1)
    loadings, beta = low_rank_means(
        n_flows, simulation.factor_rank, simulation.mean_level, loadings_seed
    )
    beta_path = drifting_beta_path(
        beta,
        simulation.length,
        simulation.drift_period,
        simulation.drift_amplitude,
        drift_seed,
    )
    return loadings @ beta_path


def simulate_traffic(
    routing: RoutingMatrix,
    simulation: SimulationSection,
    seed: int,
    trend: Optional[TrendSpec] = None,
) -> SyntheticTraffic:
    """
    Flows with mean–variance scaling and fGn noise, routed onto the links.

    Args:
        routing: Routing matrix A
        simulation: Trace length, H, σ, γ and mean structure
        seed: Noise seed of this realisation
        trend: Optional sinusoid added to every flow
    """
    means = true_means(routing, simulation)
    if simulation.full_rank_means:
        flows = synthesize_flows(
            means[:, 0],
            simulation.hurst,
            simulation.sigma,
            simulation.gamma,
            simulation.length,
            seed,
            simulation.bin_seconds,
        )
    else:
        flows = synthesize_factor_flows(
            np.eye(means.shape[0]),
            means,
            simulation.hurst,
            simulation.sigma,
            simulation.gamma,
            seed,
            simulation.bin_seconds,
        )
    if trend is not None:
        flows = add_trend(flows, trend)
        t = np.arange(simulation.length)
        means = means + trend.amplitude * np.sin(2.0 * np.pi * t / trend.period + trend.phase)
    logger.info(
        "traffic_simulated",
        flows=flows.n_series,
        length=flows.length,
        seed=seed,
        trend=trend is not None,
    )
    return SyntheticTraffic(
        flows=flows, links=route_traffic(routing, flows), means=means, seed=seed
    )


def learn_factors(flows: TraceSet, p: int, window: int) -> FactorMatrix:
    """Factor matrix from the windowed means of a flow trace."""
    return fit_factor_matrix(window_means(flows, window), p)

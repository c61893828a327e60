"""Prediction error on stationary against trend-added traffic."""

from typing import Dict, List, Optional

import numpy as np

from netkriging.core.logging import get_logger
from netkriging.evaluation.metrics import mse
from netkriging.evaluation.predictors import NetworkPredictor
from netkriging.evaluation.runs import walk
from netkriging.evaluation.synthetic import learn_factors
from netkriging.kriging.simple import simple_krige
from netkriging.models.evaluation import MisspecificationRow, MisspecificationTable
from netkriging.models.experiment import MisspecificationSection, SimulationSection
from netkriging.models.joint import ModelConfig
from netkriging.models.kriging import MomentEstimate
from netkriging.models.topology import ObservationScenario, RoutingMatrix
from netkriging.models.traffic import TraceSet, TrendSpec
from netkriging.network.routing import route_traffic
from netkriging.network.scenarios import scenario as numbered_scenario
from netkriging.traffic.synthesis import (
    add_trend,
    default_trend_amplitude,
    low_rank_means,
    synthesize_flows,
)


logger = get_logger(__name__)

STATIONARY = "stationary"
TREND = "non-stationary"


def stationary_means(routing: RoutingMatrix, simulation: SimulationSection) -> np.ndarray:
    """Constant low-rank flow means shared by both regimes."""
    loadings, beta = low_rank_means(
        routing.n_routes,
        simulation.factor_rank,
        simulation.mean_level,
        np.random.SeedSequence(simulation.seed),
    )
    return loadings @ beta


def _oracle_mse(
    links: TraceSet,
    link_means: np.ndarray,
    covariance: np.ndarray,
    scenario: ObservationScenario,
    times: np.ndarray,
) -> float:
    """Simple kriging with the true time-varying mean and covariance."""
    observed = [i - 1 for i in scenario.observed]
    unobserved = [i - 1 for i in scenario.unobserved]
    moments = MomentEstimate(
        mean=np.zeros(covariance.shape[0]), covariance=covariance, window=1, at_time=0
    )
    gain = simple_krige(moments, np.zeros(len(observed)), scenario).weights
    innovation = links.values[observed][:, times] - link_means[observed][:, times]
    predicted = link_means[unobserved][:, times] + gain @ innovation
    return mse(predicted, links.values[unobserved][:, times])


def misspecification_experiment(
    routing: RoutingMatrix,
    section: MisspecificationSection,
    simulation: SimulationSection,
    trend: Optional[TrendSpec] = None,
    config: Optional[ModelConfig] = None,
    factor_window: int = 200,
) -> MisspecificationTable:
    """
    Baseline and model MSE per estimation window, with and without a trend.

    Flows have constant low-rank means and fGn noise. The trend-added regime
    reuses the same noise. The baseline is simple kriging with the true moments;
    the model is re-fitted at every scored bin with each window in turn, using a
    factor matrix learned from the stationary flows.

    Args:
        routing: Routing matrix A
        section: Windows, trace length, H, scenario, seeds and scoring stride
        simulation: σ, γ, mean level, factor rank and mean-structure seed
        trend: Sinusoid of the second regime; amplitude defaults to 2σ·median(μ^γ)
        config: Model parameters other than the window
        factor_window: Window of the PCA mean model, in bins
    """
    config = config or ModelConfig()
    scenario = numbered_scenario(section.scenario)
    a = routing.as_float()

    mu = stationary_means(routing, simulation)
    if trend is None:
        trend = TrendSpec(
            amplitude=default_trend_amplitude(mu, simulation.sigma, simulation.gamma),
            period=100.0,
        )
    covariance = simulation.sigma**2 * (a * mu ** (2.0 * simulation.gamma)) @ a.T
    t = np.arange(section.length)
    wave = trend.amplitude * np.sin(2.0 * np.pi * t / trend.period + trend.phase)
    regime_means = {
        STATIONARY: np.repeat((a @ mu)[:, np.newaxis], section.length, axis=1),
        TREND: (a @ mu)[:, np.newaxis] + a.sum(axis=1)[:, np.newaxis] * wave,
    }

    start = max(section.windows) - 1
    times = np.arange(start, section.length, section.stride)
    baseline: Dict[str, List[float]] = {STATIONARY: [], TREND: []}
    model: Dict[str, Dict[int, List[float]]] = {
        STATIONARY: {m: [] for m in section.windows},
        TREND: {m: [] for m in section.windows},
    }

    for seed in section.seeds:
        stationary = synthesize_flows(
            mu, section.hurst, simulation.sigma, simulation.gamma, section.length, seed
        )
        factors = learn_factors(stationary, config.p, factor_window)
        regimes = {STATIONARY: stationary, TREND: add_trend(stationary, trend)}
        for name, flows in regimes.items():
            links = route_traffic(routing, flows)
            baseline[name].append(
                _oracle_mse(links, regime_means[name], covariance, scenario, times)
            )
            for m in section.windows:
                predictor = NetworkPredictor(
                    routing, scenario, factors, config.model_copy(update={"window_m": m})
                )
                run = walk(predictor, links, start, section.stride)
                model[name][m].append(mse(run.predicted, run.actual))
        logger.info("misspecification_seed_done", seed=seed)

    rows = tuple(
        MisspecificationRow(
            regime=name,
            baseline_mse=float(np.mean(baseline[name])),
            model_mse={m: float(np.mean(model[name][m])) for m in section.windows},
        )
        for name in (STATIONARY, TREND)
    )
    return MisspecificationTable(windows=tuple(section.windows), rows=rows)

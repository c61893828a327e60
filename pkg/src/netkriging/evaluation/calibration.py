"""Calibration of γ, p and m."""

from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from netkriging.core.errors import InsufficientHistoryError, InvalidInputError
from netkriging.core.logging import get_logger
from netkriging.evaluation.predictors import NetworkPredictor
from netkriging.evaluation.runs import walk
from netkriging.models.evaluation import GammaCalibration, SweepParameter, SweepReport
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig
from netkriging.models.topology import ObservationScenario, RoutingMatrix
from netkriging.models.traffic import TraceSet


logger = get_logger(__name__)


def gamma_regression(
    flows: TraceSet, window: Optional[Tuple[int, int]] = None
) -> GammaCalibration:
    """
    Regress log standard deviation on log mean across flows.

    Args:
        flows: Flow trace
        window: Bins ``[start, stop)``; the whole trace by default

    Raises:
        InsufficientHistoryError: Fewer than two bins in the window
        InvalidInputError: Fewer than three usable flows, or identical means
    """
    start, stop = window if window is not None else (0, flows.length)
    segment = flows.window(start, stop)
    if segment.shape[1] < 2:
        raise InsufficientHistoryError(
            f"window [{start}, {stop}) holds fewer than two bins", "gamma_regression"
        )
    means = segment.mean(axis=1)
    stds = segment.std(axis=1, ddof=1)
    usable = (means > 0) & (stds > 0)
    if usable.sum() < 3:
        raise InvalidInputError(
            f"{int(usable.sum())} flows have positive mean and variance, need 3",
            "gamma_regression",
        )
    log_mean = np.log(means[usable])
    log_std = np.log(stds[usable])
    if np.ptp(log_mean) == 0.0:
        raise InvalidInputError("all flows share one mean", "gamma_regression")

    fit = stats.linregress(log_mean, log_std)
    r_squared = float(np.clip(fit.rvalue**2, 0.0, 1.0))
    logger.info("gamma_calibrated", gamma_hat=float(fit.slope), r_squared=r_squared)
    return GammaCalibration(
        gamma_hat=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=r_squared,
        window=(start, stop),
        n_flows=int(usable.sum()),
    )


def _with_value(config: ModelConfig, parameter: SweepParameter, value: float) -> ModelConfig:
    if parameter == SweepParameter.GAMMA:
        return config.model_copy(update={"gamma": float(value)})
    if parameter == SweepParameter.P:
        # positivity of Fβ cannot be enforced once p reaches the number of observed links
        return config.model_copy(update={"p": int(value), "strict_positivity": False})
    return config.model_copy(update={"window_m": int(value)})


def sweep(
    parameter: SweepParameter,
    grid: Sequence[float],
    scenarios: Sequence[ObservationScenario],
    links: TraceSet,
    routing: RoutingMatrix,
    factors: FactorMatrix,
    config: Optional[ModelConfig] = None,
    stride: int = 1,
) -> SweepReport:
    """
    ReMSE of the network-specific predictor over a grid of one parameter.

    All grid values are scored on the same bins.

    Args:
        parameter: γ, p or m
        grid: Values to try
        scenarios: Scenarios to evaluate, each with an id
        links: Link trace
        routing: Routing matrix A
        factors: Factor matrix with at least max(grid) columns for a p sweep
        config: Values of the parameters not being swept
        stride: Score every stride-th bin
    """
    config = config or ModelConfig()
    configs = [_with_value(config, parameter, value) for value in grid]
    start = max(c.window_m for c in configs) - 1

    rows = []
    for scenario in scenarios:
        row = []
        for value, cell_config in zip(grid, configs):
            predictor = NetworkPredictor(routing, scenario, factors, cell_config)
            row.append(walk(predictor, links, start, stride).remse)
            logger.debug(
                "sweep_cell",
                parameter=parameter.value,
                value=value,
                scenario=scenario.scenario_id,
                remse=row[-1],
            )
        rows.append(tuple(row))

    return SweepReport(
        parameter=parameter,
        grid=tuple(float(v) for v in grid),
        scenario_ids=tuple(s.scenario_id or k + 1 for k, s in enumerate(scenarios)),
        remse=tuple(rows),
    )

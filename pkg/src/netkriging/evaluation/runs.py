"""Walk a predictor over a trace and score it."""

from typing import Optional, Sequence

import numpy as np

from netkriging.core.errors import DimensionMismatchError, InsufficientHistoryError
from netkriging.core.logging import get_logger
from netkriging.evaluation.metrics import remse
from netkriging.evaluation.predictors import BasePredictor, build_predictor
from netkriging.models.evaluation import EvaluationTable, PredictionMethod, PredictionRun
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig
from netkriging.models.topology import ObservationScenario, RoutingMatrix
from netkriging.models.traffic import TraceSet


logger = get_logger(__name__)


def common_warmup(
    config: ModelConfig, baseline_window: int, extra_windows: Sequence[int] = ()
) -> int:
    """First prediction bin shared by every method, so all are scored on the same bins."""
    return max([config.window_m, baseline_window, *extra_windows])


def walk(
    predictor: BasePredictor, links: TraceSet, start: int, stride: int = 1
) -> PredictionRun:
    """Predict every ``stride``-th bin from ``start`` to the end of the trace."""
    start = max(start, predictor.warmup)
    if start >= links.length:
        raise InsufficientHistoryError(
            f"warm-up of {start} bins leaves nothing of a {links.length}-bin trace",
            "run_scenario",
        )
    times = np.arange(start, links.length, stride)
    predicted = np.empty((len(predictor.unobserved), times.shape[0]))
    pinv_bins = 0
    for column, t0 in enumerate(times):
        prediction = predictor.predict(links, int(t0))
        predicted[:, column] = prediction.predicted
        pinv_bins += int(prediction.used_pseudoinverse)

    actual = links.values[predictor.unobserved][:, times]
    config = getattr(predictor, "config", None) or ModelConfig()
    run = PredictionRun(
        method=predictor.method,
        scenario=predictor.scenario,
        config=config,
        times=times,
        predicted=predicted,
        actual=actual,
        remse=remse(predicted, actual),
        pseudoinverse_bins=pinv_bins,
    )
    if pinv_bins:
        logger.warning(
            "pseudoinverse_bins",
            method=predictor.method.value,
            scenario=predictor.scenario.scenario_id,
            bins=pinv_bins,
        )
    logger.info(
        "scenario_scored",
        method=predictor.method.value,
        scenario=predictor.scenario.scenario_id,
        bins=int(times.shape[0]),
        remse=run.remse,
    )
    return run


def run_scenario(
    links: TraceSet,
    routing: RoutingMatrix,
    scenario: ObservationScenario,
    method: PredictionMethod,
    config: Optional[ModelConfig] = None,
    factors: Optional[FactorMatrix] = None,
    baseline_window: Optional[int] = None,
    warmup: Optional[int] = None,
    stride: int = 1,
) -> PredictionRun:
    """
    Predict the unobserved links at every bin after the warm-up and score with ReMSE.

    Args:
        links: Link trace, row i is link i+1
        routing: Routing matrix A
        scenario: Observed and unobserved links
        method: Predictor to run
        config: Network-specific model parameters
        factors: Factor matrix, required for the network-specific method
        baseline_window: History of the simple and ordinary predictors
        warmup: First scored bin; defaults to the predictor's own history requirement
        stride: Score every stride-th bin

    Raises:
        InsufficientHistoryError: The trace is no longer than the warm-up
    """
    config = config or ModelConfig()
    predictor = build_predictor(method, routing, scenario, config, factors, baseline_window)
    start = warmup if warmup is not None else predictor.warmup
    return walk(predictor, links, start, stride)


def evaluate_methods(
    link_traces: Sequence[TraceSet],
    routing: RoutingMatrix,
    scenarios: Sequence[ObservationScenario],
    methods: Sequence[PredictionMethod],
    factors: Sequence[FactorMatrix],
    seeds: Sequence[int],
    config: Optional[ModelConfig] = None,
    baseline_window: int = 60,
    stride: int = 1,
    factor_seed: Optional[int] = None,
) -> EvaluationTable:
    """
    Seed-averaged ReMSE of every method in every scenario.

    ``link_traces``, ``factors`` and ``seeds`` are aligned, one entry per seed.
    Every method is scored on the same bins.
    """
    if not len(link_traces) == len(factors) == len(seeds):
        raise DimensionMismatchError(
            "one link trace and one factor matrix per seed are required", "evaluate_methods"
        )
    config = config or ModelConfig()
    start = common_warmup(config, baseline_window)
    rows = []
    for scenario in scenarios:
        row = []
        for method in methods:
            scores = [
                run_scenario(
                    links, routing, scenario, method, config, fm, baseline_window, start, stride
                ).remse
                for links, fm in zip(link_traces, factors)
            ]
            row.append(float(np.mean(scores)))
        rows.append(tuple(row))
    return EvaluationTable(
        methods=tuple(methods),
        scenario_ids=tuple(s.scenario_id or k + 1 for k, s in enumerate(scenarios)),
        remse=tuple(rows),
        seeds=tuple(seeds),
        factor_seed=factor_seed,
    )

"""Anomalous-flow detection with control charts on link prediction residuals."""

from functools import reduce
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

from netkriging.charts.chart import run_chart
from netkriging.charts.hurst import estimate_hurst
from netkriging.core.config import settings
from netkriging.core.errors import InvalidInputError
from netkriging.core.logging import get_logger
from netkriging.evaluation.predictors import NetworkPredictor
from netkriging.models.chart import ChartConfig
from netkriging.models.evaluation import AnomalyReport, LinkChart
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig
from netkriging.models.topology import ObservationScenario, RoutingMatrix
from netkriging.models.traffic import AnomalySpec, TraceSet
from netkriging.network.routing import route_traffic
from netkriging.traffic.synthesis import inject_mean_shift


logger = get_logger(__name__)


def predictor_links(
    routing: RoutingMatrix, link_id: int, anomalous_flow: int
) -> Tuple[int, ...]:
    """
    Links used to predict ``link_id``.

    These are the links sharing at least one flow with it, minus every link that
    carries the anomalous flow. When nothing is left, every link not carrying the
    anomalous flow is used.

    Raises:
        InvalidInputError: Every other link carries the anomalous flow
    """
    carriers = set(routing.links_of_route(anomalous_flow))
    target_flows = set(routing.routes_using(link_id))
    others = [k for k in range(1, routing.n_links + 1) if k != link_id and k not in carriers]
    sharing = [k for k in others if target_flows & set(routing.routes_using(k))]
    chosen = sharing or others
    if not chosen:
        raise InvalidInputError(
            f"no link free of flow {anomalous_flow} is left to predict link {link_id}",
            "anomaly_experiment",
        )
    return tuple(chosen)


def isolate_flows(
    routing: RoutingMatrix, alarming: Iterable[int], quiet: Iterable[int]
) -> FrozenSet[int]:
    """Flows on every alarming link and on no quiet link; empty without alarms."""
    alarming = list(alarming)
    if not alarming:
        return frozenset()
    on_all = reduce(
        lambda acc, link: acc & set(routing.routes_using(link)),
        alarming[1:],
        set(routing.routes_using(alarming[0])),
    )
    on_quiet = set().union(*(routing.routes_using(link) for link in quiet))
    return frozenset(on_all - on_quiet)


def _predict_link(
    clean_links: TraceSet,
    routing: RoutingMatrix,
    link_id: int,
    predictors: Tuple[int, ...],
    factors: FactorMatrix,
    config: ModelConfig,
) -> Tuple[np.ndarray, np.ndarray, int]:
    predictor = NetworkPredictor(
        routing,
        ObservationScenario(observed=predictors, unobserved=(link_id,)),
        factors,
        config,
    )
    start = predictor.warmup
    predicted = np.empty(clean_links.length - start)
    variances = np.empty_like(predicted)
    for column, t0 in enumerate(range(start, clean_links.length)):
        prediction = predictor.predict(clean_links, t0)
        predicted[column] = prediction.predicted[0]
        variances[column] = prediction.error_variance[0]
    return predicted, variances, start


def anomaly_experiment(
    flows: TraceSet,
    routing: RoutingMatrix,
    factors: FactorMatrix,
    flow_index: int,
    onset: int,
    monitored_links: Sequence[int],
    shift: Optional[float] = None,
    shift_in_std: float = 5.0,
    chart: Optional[ChartConfig] = None,
    hurst: Optional[float] = None,
    config: Optional[ModelConfig] = None,
    alarm_rate_threshold: Optional[float] = None,
) -> AnomalyReport:
    """
    Inject a mean shift on one flow, chart every monitored link and isolate the flow.

    Each monitored link is predicted by the network-specific model from links that
    do not carry the anomalous flow, so its predictions are unaffected by the shift.
    The chart variance σ² is the median predicted error variance of the link. The
    Hurst parameter is ``hurst`` when given, else estimated on the pre-onset residuals.
    A link is alarming when its post-onset alarm rate exceeds ``alarm_rate_threshold``.

    Args:
        flows: Clean flow trace
        routing: Routing matrix A
        factors: Factor matrix of the mean model
        flow_index: Anomalous flow (1-based)
        onset: First shifted bin
        monitored_links: Links to chart
        shift: Added load per bin; defaults to ``shift_in_std`` residual standard deviations
            of the most variable monitored link carrying the flow
        shift_in_std: Shift size when ``shift`` is not given
        chart: λ, limit multiplier and which limits decide alarms; σ² and H are filled in
        hurst: Hurst parameter of the residuals
        config: Network-specific model parameters
        alarm_rate_threshold: Post-onset alarm fraction that makes a link alarming
    """
    config = config or ModelConfig()
    chart = chart or ChartConfig(sigma2=1.0)
    threshold = (
        settings.alarm_rate_threshold if alarm_rate_threshold is None else alarm_rate_threshold
    )
    if not 1 <= flow_index <= routing.n_routes:
        raise InvalidInputError(
            f"flow {flow_index} outside 1..{routing.n_routes}", "anomaly_experiment"
        )
    if onset <= config.window_m - 1 or onset >= flows.length:
        raise InvalidInputError(
            f"onset {onset} must fall after the {config.window_m}-bin warm-up "
            "and inside the trace",
            "anomaly_experiment",
        )
    carriers = set(routing.links_of_route(flow_index))
    clean_links = route_traffic(routing, flows)

    predictions: Dict[int, Tuple[np.ndarray, np.ndarray, int]] = {}
    predictor_sets: Dict[int, Tuple[int, ...]] = {}
    for link_id in monitored_links:
        predictor_sets[link_id] = predictor_links(routing, link_id, flow_index)
        predictions[link_id] = _predict_link(
            clean_links, routing, link_id, predictor_sets[link_id], factors, config
        )
    sigma2: Dict[int, float] = {}
    for link_id, (predicted, variances, start) in predictions.items():
        sigma2[link_id] = float(np.median(variances))
        if sigma2[link_id] <= 0.0:
            residual = clean_links.values[link_id - 1, start:] - predicted
            sigma2[link_id] = float(np.var(residual[: max(onset - start, 2)]))
        if sigma2[link_id] <= 0.0:
            raise InvalidInputError(
                f"link {link_id} has zero residual variance", "anomaly_experiment"
            )

    if shift is None:
        monitored_carriers = [link for link in monitored_links if link in carriers]
        if monitored_carriers:
            scale = max(np.sqrt(sigma2[link]) for link in monitored_carriers)
        else:
            scale = float(np.std(flows.values[flow_index - 1, :onset], ddof=1))
        shift = float(shift_in_std * scale)
    anomaly = AnomalySpec(flow_index=flow_index, onset=onset, shift=shift)
    shifted_links = route_traffic(routing, inject_mean_shift(flows, anomaly))

    charts = []
    for link_id, (predicted, _, start) in predictions.items():
        residual = shifted_links.values[link_id - 1, start:] - predicted
        if hurst is None:
            link_hurst = estimate_hurst(residual[: onset - start]).hurst
        else:
            link_hurst = hurst
        marker = onset - start
        lrd_config = chart.model_copy(
            update={"sigma2": sigma2[link_id], "hurst": link_hurst, "lrd_adjusted": True}
        )
        lrd_chart = run_chart(residual, lrd_config, onset_marker=marker)
        iid_chart = run_chart(
            residual, lrd_config.model_copy(update={"lrd_adjusted": False}), onset_marker=marker
        )
        deciding = lrd_chart if chart.lrd_adjusted else iid_chart
        charts.append(
            LinkChart(
                link_id=link_id,
                predictors=predictor_sets[link_id],
                chart=lrd_chart,
                iid_chart=iid_chart,
                hurst=link_hurst,
                sigma2=sigma2[link_id],
                start_time=start,
                alarming=deciding.alarm_rate(marker) > threshold,
            )
        )

    alarming = [c.link_id for c in charts if c.alarming]
    quiet = [c.link_id for c in charts if not c.alarming]
    implicated = isolate_flows(routing, alarming, quiet)
    logger.info(
        "anomaly_charted",
        flow=flow_index,
        shift=shift,
        alarming=alarming,
        implicated=sorted(implicated),
    )
    return AnomalyReport(
        flow_index=flow_index,
        onset=onset,
        shift=shift,
        charts=tuple(charts),
        implicated_flows=implicated,
    )

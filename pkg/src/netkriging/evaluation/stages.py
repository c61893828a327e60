"""Pipeline stages of an experiment run."""

from pathlib import Path
from typing import Optional, Sequence, Tuple

from netkriging.core.base_stage import BaseStage
from netkriging.core.errors import ConfigurationError
from netkriging.evaluation.anomaly import anomaly_experiment
from netkriging.evaluation.calibration import gamma_regression, sweep
from netkriging.evaluation.misspecification import misspecification_experiment
from netkriging.evaluation.runs import evaluate_methods, run_scenario
from netkriging.evaluation.synthetic import learn_factors, simulate_traffic
from netkriging.mean_model.pca import energy_captured, read_factor_matrix
from netkriging.models.chart import ChartConfig
from netkriging.models.evaluation import (
    AnomalyReport,
    EvaluationTable,
    GammaCalibration,
    MisspecificationTable,
    PredictionMethod,
    PredictionRun,
    SweepParameter,
    SweepReport,
    SyntheticTraffic,
)
from netkriging.models.experiment import (
    ExperimentConfig,
    MisspecificationSection,
    SimulationSection,
    TopologySection,
)
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig
from netkriging.models.topology import NetworkGraph, ObservationScenario, RoutingMatrix
from netkriging.models.traffic import TraceKind, TraceSet, TrendSpec
from netkriging.network.routing import build_routing_matrix, route_traffic
from netkriging.network.topology import internet2_topology, read_topology
from netkriging.traffic.io import read_traces


class TopologyStage(BaseStage[Tuple[NetworkGraph, RoutingMatrix]]):
    """Load the network and derive its routing matrix."""

    def __init__(self) -> None:
        super().__init__("topology_stage")

    def process(self, section: TopologySection) -> Tuple[NetworkGraph, RoutingMatrix]:
        graph = read_topology(section.file) if section.file else internet2_topology()
        routing = build_routing_matrix(graph, section.policy)
        self.logger.info(
            "routing_built",
            nodes=graph.n_nodes,
            links=routing.n_links,
            routes=routing.n_routes,
            policy=section.policy.value,
        )
        return graph, routing


class SimulationStage(BaseStage[SyntheticTraffic]):
    """Simulate one realisation of the network's traffic."""

    def __init__(self) -> None:
        super().__init__("simulation_stage")

    def process(
        self,
        routing: RoutingMatrix,
        simulation: SimulationSection,
        seed: int,
        trend: Optional[TrendSpec] = None,
    ) -> SyntheticTraffic:
        return simulate_traffic(routing, simulation, seed, trend)


class TraceFileStage(BaseStage[Tuple[Optional[TraceSet], TraceSet]]):
    """Read measured traces instead of simulating them."""

    def __init__(self) -> None:
        super().__init__("trace_file_stage")

    def process(
        self, config: ExperimentConfig, routing: RoutingMatrix
    ) -> Tuple[Optional[TraceSet], TraceSet]:
        flows_path = config.traces.flows
        links_path = config.traces.links
        bin_seconds = config.simulation.bin_seconds
        flows = read_traces(flows_path, TraceKind.FLOW, bin_seconds) if flows_path else None
        if links_path is not None:
            links = read_traces(links_path, TraceKind.LINK, bin_seconds)
        elif flows is not None:
            links = route_traffic(routing, flows)
        else:
            raise ConfigurationError("traces section names no file", "trace_file_stage")
        return flows, links


class FactorStage(BaseStage[FactorMatrix]):
    """Learn the factor matrix from flow means, or read it from a file."""

    def __init__(self) -> None:
        super().__init__("factor_stage")

    def process(
        self,
        flows: Optional[TraceSet],
        p: int,
        window: int,
        factors_file: Optional[Path] = None,
    ) -> FactorMatrix:
        if factors_file is not None:
            return read_factor_matrix(factors_file)
        if flows is None:
            raise ConfigurationError(
                "a factor matrix needs flow traces or model.factors_file", "factor_stage"
            )
        factors = learn_factors(flows, p, window)
        self.logger.info("factors_learned", p=p, window=window, energy=energy_captured(factors, p))
        return factors


class CalibrationStage(BaseStage[GammaCalibration]):
    """Estimate the mean–variance exponent from flow traces."""

    def __init__(self) -> None:
        super().__init__("calibration_stage")

    def process(self, flows: TraceSet) -> GammaCalibration:
        return gamma_regression(flows)


class PredictionStage(BaseStage[PredictionRun]):
    """Run one predictor on one scenario."""

    def __init__(self) -> None:
        super().__init__("prediction_stage")

    def process(
        self,
        links: TraceSet,
        routing: RoutingMatrix,
        scenario: ObservationScenario,
        method: PredictionMethod,
        config: ModelConfig,
        factors: Optional[FactorMatrix],
        baseline_window: int,
        stride: int = 1,
    ) -> PredictionRun:
        return run_scenario(
            links, routing, scenario, method, config, factors, baseline_window, stride=stride
        )


class EvaluationStage(BaseStage[EvaluationTable]):
    """Compare every predictor over scenarios and seeds."""

    def __init__(self) -> None:
        super().__init__("evaluation_stage")

    def process(
        self,
        link_traces: Sequence[TraceSet],
        routing: RoutingMatrix,
        scenarios: Sequence[ObservationScenario],
        factors: Sequence[FactorMatrix],
        seeds: Sequence[int],
        config: ModelConfig,
        baseline_window: int,
        stride: int = 1,
        factor_seed: Optional[int] = None,
    ) -> EvaluationTable:
        return evaluate_methods(
            link_traces,
            routing,
            scenarios,
            tuple(PredictionMethod),
            factors,
            seeds,
            config,
            baseline_window,
            stride,
            factor_seed,
        )


class SweepStage(BaseStage[SweepReport]):
    """ReMSE over a grid of one model parameter."""

    def __init__(self) -> None:
        super().__init__("sweep_stage")

    def process(
        self,
        parameter: SweepParameter,
        grid: Sequence[float],
        scenarios: Sequence[ObservationScenario],
        links: TraceSet,
        routing: RoutingMatrix,
        factors: FactorMatrix,
        config: ModelConfig,
        stride: int = 1,
    ) -> SweepReport:
        return sweep(parameter, grid, scenarios, links, routing, factors, config, stride)


class AnomalyStage(BaseStage[AnomalyReport]):
    """Shift one flow, chart the monitored links and isolate the flow."""

    def __init__(self) -> None:
        super().__init__("anomaly_stage")

    def process(
        self,
        flows: TraceSet,
        routing: RoutingMatrix,
        factors: FactorMatrix,
        config: ExperimentConfig,
        flow_index: int,
    ) -> AnomalyReport:
        if config.anomaly is None:
            raise ConfigurationError("the chart verb needs an [anomaly] section", "anomaly_stage")
        section = config.chart
        return anomaly_experiment(
            flows,
            routing,
            factors,
            flow_index=flow_index,
            onset=config.anomaly.onset,
            monitored_links=section.monitored_links,
            shift=config.anomaly.shift,
            shift_in_std=config.anomaly.shift_in_std,
            chart=ChartConfig(
                lam=section.lam,
                sigma2=1.0,
                limit_multiplier=section.limit_multiplier,
                lrd_adjusted=section.lrd_adjusted,
            ),
            hurst=section.hurst,
            config=config.model.to_model_config(),
            alarm_rate_threshold=section.alarm_rate_threshold,
        )


class MisspecificationStage(BaseStage[MisspecificationTable]):
    """Stationary against trend-added traffic across estimation windows."""

    def __init__(self) -> None:
        super().__init__("misspecification_stage")

    def process(
        self,
        routing: RoutingMatrix,
        section: MisspecificationSection,
        simulation: SimulationSection,
        trend: Optional[TrendSpec],
        config: ModelConfig,
        factor_window: int,
    ) -> MisspecificationTable:
        return misspecification_experiment(
            routing, section, simulation, trend, config, factor_window
        )

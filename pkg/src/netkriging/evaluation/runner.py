"""Experiment runner executing one verb as a sequence of stages."""

import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from netkriging.charts.chart import write_chart
from netkriging.core.audit import RunLedger
from netkriging.core.config import settings
from netkriging.core.errors import ConfigurationError
from netkriging.core.logging import get_logger
from netkriging.evaluation.reports import (
    write_anomaly_report,
    write_evaluation_table,
    write_gamma_calibration,
    write_misspecification_table,
    write_prediction_run,
    write_sweep_report,
)
from netkriging.evaluation.stages import (
    AnomalyStage,
    CalibrationStage,
    EvaluationStage,
    FactorStage,
    MisspecificationStage,
    PredictionStage,
    SimulationStage,
    SweepStage,
    TopologyStage,
    TraceFileStage,
)
from netkriging.evaluation.misspecification import stationary_means
from netkriging.evaluation.synthetic import true_means
from netkriging.joint.model import fit_model, write_model_fit
from netkriging.mean_model.pca import write_factor_matrix
from netkriging.models.evaluation import PredictionMethod, SweepParameter
from netkriging.models.experiment import ExperimentConfig, MisspecificationSection
from netkriging.models.factors import FactorMatrix
from netkriging.models.topology import NetworkGraph, RoutingMatrix
from netkriging.models.traffic import TraceSet, TrendSpec
from netkriging.network.routing import write_routing_matrix
from netkriging.network.scenarios import scenario as numbered_scenario
from netkriging.network.topology import write_topology
from netkriging.traffic.io import write_traces
from netkriging.traffic.synthesis import default_trend_amplitude


S = TypeVar("S")
R = TypeVar("R")

Traces = Tuple[Optional[TraceSet], TraceSet]

VERBS: Tuple[str, ...] = (
    "simulate",
    "fit-factors",
    "calibrate",
    "predict",
    "evaluate",
    "sweep",
    "chart",
    "misspecification",
)

LEDGER_FILE = "run-ledger.json"
FACTORS_FILE = "factors.txt"


class ExperimentRunner:
    """
    Runs experiment verbs against one validated configuration.

    Every verb loads the network, obtains traffic (from trace files or by
    simulation), runs its stages, writes its reports under the output
    directory and records each stage in a run ledger written next to them.
    """

    def __init__(self, config: ExperimentConfig, output_dir: Optional[Path] = None):
        """
        Initialize the runner.

        Args:
            config: Validated experiment configuration
            output_dir: Report directory; defaults to ``run.output_dir``
        """
        self.config = config
        self.output_dir = output_dir or config.run.output_dir
        self.logger = get_logger("experiment_runner")

        self.topology_stage = TopologyStage()
        self.simulation_stage = SimulationStage()
        self.trace_file_stage = TraceFileStage()
        self.factor_stage = FactorStage()
        self.calibration_stage = CalibrationStage()
        self.prediction_stage = PredictionStage()
        self.evaluation_stage = EvaluationStage()
        self.sweep_stage = SweepStage()
        self.anomaly_stage = AnomalyStage()
        self.misspecification_stage = MisspecificationStage()

        self._handlers: Dict[str, Callable[[str, RunLedger], List[Path]]] = {
            "simulate": self._simulate,
            "fit-factors": self._fit_factors,
            "calibrate": self._calibrate,
            "predict": self._predict,
            "evaluate": self._evaluate,
            "sweep": self._sweep,
            "chart": self._chart,
            "misspecification": self._misspecification,
        }

    @property
    def uses_trace_files(self) -> bool:
        return self.config.traces.flows is not None or self.config.traces.links is not None

    def run(self, verb: str) -> List[Path]:
        """
        Execute ``verb`` and return the files it wrote, ledger last.

        Raises:
            ConfigurationError: Unknown verb or a section the verb needs is missing
        """
        handler = self._handlers.get(verb)
        if handler is None:
            raise ConfigurationError(
                f"unknown verb {verb!r}, expected one of {', '.join(VERBS)}", "experiment_runner"
            )
        run_id = f"{verb}-{uuid.uuid4().hex[:12]}"
        ledger = RunLedger(run_id)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.logger.info("run_started", run_id=run_id, verb=verb, output_dir=str(self.output_dir))

        written = handler(run_id, ledger)
        written.append(ledger.write(self.output_dir / LEDGER_FILE))

        self.logger.info("run_completed", run_id=run_id, verb=verb, files=len(written))
        return written

    # Shared stages

    def _map(self, fn: Callable[[S], R], items: Sequence[S]) -> List[R]:
        if settings.max_workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
                return list(pool.map(fn, items))
        return [fn(item) for item in items]

    def _network(self, run_id: str, ledger: RunLedger) -> Tuple[NetworkGraph, RoutingMatrix]:
        section = self.config.topology
        graph, routing = self.topology_stage.execute(run_id, section)
        ledger.log_entry(
            stage=self.topology_stage.name,
            action="routing_built",
            input_data=section.model_dump(mode="json"),
            output_data=routing,
            metadata={"links": routing.n_links, "routes": routing.n_routes},
        )
        return graph, routing

    def _trend(self, mu: Callable[[], np.ndarray]) -> Optional[TrendSpec]:
        """Trend of the ``[trend]`` section; the amplitude default is sized on ``mu()``."""
        section = self.config.trend
        if section is None:
            return None
        amplitude = section.amplitude
        if amplitude is None:
            simulation = self.config.simulation
            amplitude = default_trend_amplitude(mu(), simulation.sigma, simulation.gamma)
        return TrendSpec(amplitude=amplitude, period=section.period, phase=section.phase)

    def _seeds(self) -> Tuple[int, ...]:
        # a measured trace is a single realisation
        if self.uses_trace_files:
            return (self.config.run.seeds[0],)
        return tuple(self.config.run.seeds)

    def _traffic(
        self, run_id: str, ledger: RunLedger, routing: RoutingMatrix, seeds: Sequence[int]
    ) -> List[Traces]:
        if self.uses_trace_files:
            traffic = [self.trace_file_stage.execute(run_id, self.config, routing)]
            source = "files"
        else:
            trend = self._trend(lambda: true_means(routing, self.config.simulation)[:, 0])

            def simulate(seed: int) -> Traces:
                simulated = self.simulation_stage.execute(
                    run_id, routing, self.config.simulation, seed, trend
                )
                return simulated.flows, simulated.links

            traffic = self._map(simulate, seeds)
            source = "simulation"
        for seed, (flows, links) in zip(seeds, traffic):
            ledger.log_entry(
                stage=(
                    self.trace_file_stage.name
                    if source == "files"
                    else self.simulation_stage.name
                ),
                action="traffic_loaded",
                input_data={"seed": seed, "source": source},
                output_data=links,
                metadata={"seed": seed, "source": source, "bins": links.length},
            )
        return traffic

    def _factor_rank(self) -> int:
        p = self.config.model.p
        if self.config.sweep.parameter == SweepParameter.P:
            p = max(p, int(max(self.config.sweep.grid)))
        return p

    def _factors(
        self,
        run_id: str,
        ledger: RunLedger,
        routing: RoutingMatrix,
        flows: Optional[TraceSet],
    ) -> FactorMatrix:
        """
        Factor matrix from ``model.factors_file``, from the flows of
        ``run.factor_seed`` when set, or else from ``flows``.
        """
        model = self.config.model
        factor_seed = self.config.run.factor_seed
        if model.factors_file is None and factor_seed is not None and not self.uses_trace_files:
            ((flows, _),) = self._traffic(run_id, ledger, routing, (factor_seed,))
        factors = self.factor_stage.execute(
            run_id, flows, self._factor_rank(), model.factor_window, model.factors_file
        )
        ledger.log_entry(
            stage=self.factor_stage.name,
            action="factors_ready",
            input_data=flows.values if flows is not None else str(model.factors_file),
            output_data=factors.factors,
            metadata={
                "p": factors.p,
                "window": model.factor_window,
                "from_file": model.factors_file is not None,
                "factor_seed": factor_seed,
            },
        )
        return factors

    def _needs_shared_factors(self) -> bool:
        return self.config.model.factors_file is not None or (
            self.config.run.factor_seed is not None and not self.uses_trace_files
        )

    # Verbs

    def _simulate(self, run_id: str, ledger: RunLedger) -> List[Path]:
        graph, routing = self._network(run_id, ledger)
        seeds = self._seeds()
        written = [
            write_topology(graph, self.output_dir / "topology.csv"),
            write_routing_matrix(routing, self.output_dir / "routing-matrix.csv"),
        ]
        for seed, (flows, links) in zip(seeds, self._traffic(run_id, ledger, routing, seeds)):
            if flows is not None:
                written.append(write_traces(flows, self.output_dir / f"flows-seed{seed}.csv"))
            written.append(write_traces(links, self.output_dir / f"links-seed{seed}.csv"))
        return written

    def _fit_factors(self, run_id: str, ledger: RunLedger) -> List[Path]:
        _, routing = self._network(run_id, ledger)
        seed = self.config.run.factor_seed
        seeds = (seed if seed is not None else self.config.run.seeds[0],)
        ((flows, _),) = self._traffic(run_id, ledger, routing, seeds)
        factors = self.factor_stage.execute(
            run_id, flows, self._factor_rank(), self.config.model.factor_window
        )
        ledger.log_entry(
            stage=self.factor_stage.name,
            action="factors_fitted",
            input_data=flows.values if flows is not None else None,
            output_data=factors.factors,
            metadata={"p": factors.p, "seed": seeds[0]},
        )
        return [write_factor_matrix(factors, self.output_dir / FACTORS_FILE)]

    def _calibrate(self, run_id: str, ledger: RunLedger) -> List[Path]:
        _, routing = self._network(run_id, ledger)
        ((flows, _),) = self._traffic(run_id, ledger, routing, self._seeds()[:1])
        if flows is None:
            raise ConfigurationError("calibrating γ needs flow traces", "calibrate")
        calibration = self.calibration_stage.execute(run_id, flows)
        ledger.log_entry(
            stage=self.calibration_stage.name,
            action="gamma_calibrated",
            input_data=flows.values,
            output_data=calibration,
            metadata=calibration.model_dump(mode="json"),
        )
        return [write_gamma_calibration(calibration, self.output_dir / "gamma.csv")]

    def _predict(self, run_id: str, ledger: RunLedger) -> List[Path]:
        _, routing = self._network(run_id, ledger)
        run = self.config.run
        ((flows, links),) = self._traffic(run_id, ledger, routing, self._seeds()[:1])
        scenario = numbered_scenario(run.scenario)
        config = self.config.model.to_model_config()
        written: List[Path] = []

        factors: Optional[FactorMatrix] = None
        if run.method == PredictionMethod.NETWORK:
            factors = self._factors(run_id, ledger, routing, flows)
            if self.config.model.factors_file is None:
                written.append(write_factor_matrix(factors, self.output_dir / FACTORS_FILE))

        result = self.prediction_stage.execute(
            run_id,
            links,
            routing,
            scenario,
            run.method,
            config,
            factors,
            self.config.model.baseline_window,
            run.stride,
        )
        ledger.log_entry(
            stage=self.prediction_stage.name,
            action="scenario_predicted",
            input_data=links.values,
            output_data=result.predicted,
            metadata={
                "scenario": run.scenario,
                "method": run.method.value,
                "remse": result.remse,
                "pseudoinverse_bins": result.pseudoinverse_bins,
            },
        )
        written.append(
            write_prediction_run(
                result,
                self.output_dir / f"prediction-s{run.scenario}-{run.method.value}.csv",
            )
        )

        if factors is not None:
            fit = fit_model(links, links.length - 1, routing, factors, scenario, config)
            factor_file = self.config.model.factors_file or self.output_dir / FACTORS_FILE
            written.append(
                write_model_fit(fit, self.output_dir / "model-fit.json", str(factor_file))
            )
        return written

    def _evaluate(self, run_id: str, ledger: RunLedger) -> List[Path]:
        _, routing = self._network(run_id, ledger)
        seeds = self._seeds()
        traffic = self._traffic(run_id, ledger, routing, seeds)
        if self._needs_shared_factors():
            shared = self._factors(run_id, ledger, routing, None)
            factors = [shared] * len(seeds)
        else:
            factors = [self._factors(run_id, ledger, routing, flows) for flows, _ in traffic]

        scenarios = [numbered_scenario(k) for k in self.config.run.scenarios]
        table = self.evaluation_stage.execute(
            run_id,
            [links for _, links in traffic],
            routing,
            scenarios,
            factors,
            seeds,
            self.config.model.to_model_config(),
            self.config.model.baseline_window,
            self.config.run.stride,
            self.config.run.factor_seed,
        )
        ledger.log_entry(
            stage=self.evaluation_stage.name,
            action="methods_evaluated",
            input_data=[links.values for _, links in traffic],
            output_data=table,
            metadata={"scenarios": list(table.scenario_ids), "seeds": list(seeds)},
        )
        return [write_evaluation_table(table, self.output_dir / "evaluation.csv")]

    def _sweep(self, run_id: str, ledger: RunLedger) -> List[Path]:
        _, routing = self._network(run_id, ledger)
        ((flows, links),) = self._traffic(run_id, ledger, routing, self._seeds()[:1])
        factors = self._factors(run_id, ledger, routing, flows)
        section = self.config.sweep
        report = self.sweep_stage.execute(
            run_id,
            section.parameter,
            section.grid,
            [numbered_scenario(k) for k in self.config.run.scenarios],
            links,
            routing,
            factors,
            self.config.model.to_model_config(),
            self.config.run.stride,
        )
        ledger.log_entry(
            stage=self.sweep_stage.name,
            action="parameter_swept",
            input_data=links.values,
            output_data=report,
            metadata={"parameter": section.parameter.value, "grid": list(section.grid)},
        )
        return [
            write_sweep_report(report, self.output_dir / f"sweep-{section.parameter.value}.csv")
        ]

    def _anomalous_flow(self, routing: RoutingMatrix) -> int:
        anomaly = self.config.anomaly
        if anomaly is None:
            raise ConfigurationError("the chart verb needs an [anomaly] section", "chart")
        if anomaly.flow_index is not None:
            return anomaly.flow_index
        if anomaly.source is None or anomaly.destination is None:
            raise ConfigurationError(
                "the [anomaly] section needs flow_index or source and destination", "chart"
            )
        try:
            return routing.route_index(anomaly.source, anomaly.destination)
        except KeyError as e:
            raise ConfigurationError(
                f"no route {anomaly.source}->{anomaly.destination} in the topology", "chart"
            ) from e

    def _chart(self, run_id: str, ledger: RunLedger) -> List[Path]:
        _, routing = self._network(run_id, ledger)
        flow_index = self._anomalous_flow(routing)
        ((flows, _),) = self._traffic(run_id, ledger, routing, self._seeds()[:1])
        if flows is None:
            raise ConfigurationError("injecting an anomaly needs flow traces", "chart")
        factors = self._factors(run_id, ledger, routing, flows)
        report = self.anomaly_stage.execute(
            run_id, flows, routing, factors, self.config, flow_index
        )
        ledger.log_entry(
            stage=self.anomaly_stage.name,
            action="anomaly_charted",
            input_data=flows.values,
            output_data=report.summary(),
            metadata=report.summary(),
        )
        written = [write_anomaly_report(report, routing, self.output_dir / "anomaly.csv")]
        written.append(self.output_dir / "anomaly-flows.json")
        for chart in report.charts:
            written.append(
                write_chart(
                    chart.chart,
                    self.output_dir / f"chart-link{chart.link_id}.csv",
                    start_time=chart.start_time,
                )
            )
        return written

    def _misspecification(self, run_id: str, ledger: RunLedger) -> List[Path]:
        _, routing = self._network(run_id, ledger)
        section = self.config.misspecification or MisspecificationSection()
        table = self.misspecification_stage.execute(
            run_id,
            routing,
            section,
            self.config.simulation,
            self._trend(lambda: stationary_means(routing, self.config.simulation)),
            self.config.model.to_model_config(),
            self.config.model.factor_window,
        )
        ledger.log_entry(
            stage=self.misspecification_stage.name,
            action="misspecification_measured",
            input_data=section.model_dump(mode="json"),
            output_data=table,
            metadata={"windows": list(table.windows), "seeds": list(section.seeds)},
        )
        return [write_misspecification_table(table, self.output_dir / "misspecification.csv")]

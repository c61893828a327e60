"""Declarative experiment configuration read from a TOML file."""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from netkriging.core.config import settings
from netkriging.core.errors import ConfigurationError
from netkriging.models.evaluation import PredictionMethod, SweepParameter
from netkriging.models.joint import ModelConfig
from netkriging.models.topology import RoutePolicy


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)


class TopologySection(_Section):
    preset: Optional[Literal["internet2"]] = "internet2"
    file: Optional[Path] = None
    policy: RoutePolicy = RoutePolicy.SHORTEST_METRIC

    @model_validator(mode="after")
    def _one_source(self) -> "TopologySection":
        if self.file is None and self.preset is None:
            raise ValueError("either topology.preset or topology.file is required")
        return self


class SimulationSection(_Section):
    length: int = Field(default=2000, ge=16)
    hurst: float = Field(default=0.8, gt=0.0, lt=1.0)
    sigma: float = Field(default=0.5, ge=0.0)
    gamma: float = Field(default=0.75, ge=0.0)
    mean_level: float = Field(default=1000.0, gt=0.0)
    factor_rank: int = Field(default=2, ge=1)
    full_rank_means: bool = False
    drift_period: float = Field(default=2000.0, gt=0.0)
    drift_amplitude: float = Field(default=0.3, ge=0.0, lt=1.0)
    seed: int = 0
    bin_seconds: float = Field(default_factory=lambda: settings.bin_seconds, gt=0.0)


class TracesSection(_Section):
    flows: Optional[Path] = None
    links: Optional[Path] = None


class TrendSection(_Section):
    amplitude: Optional[float] = Field(default=None, ge=0.0)
    period: float = Field(default=100.0, gt=0.0)
    phase: float = 0.0


class AnomalySection(_Section):
    flow_index: Optional[int] = Field(default=None, ge=1)
    source: Optional[str] = None
    destination: Optional[str] = None
    onset: int = Field(default=1000, ge=0)
    shift: Optional[float] = None
    shift_in_std: float = Field(default=5.0, ge=0.0)

    @model_validator(mode="after")
    def _one_flow(self) -> "AnomalySection":
        by_pair = self.source is not None and self.destination is not None
        if self.flow_index is None and not by_pair:
            raise ValueError("anomaly needs flow_index or source and destination")
        return self


class ModelSection(_Section):
    p: int = Field(default_factory=lambda: settings.default_p, ge=1)
    gamma: float = Field(default_factory=lambda: settings.default_gamma, gt=0.0)
    window_m: int = Field(default_factory=lambda: settings.default_window_m, ge=1)
    convergence_eps: float = Field(default_factory=lambda: settings.convergence_eps, gt=0.0)
    min_iterations: int = Field(default_factory=lambda: settings.min_iterations, ge=1)
    max_iterations: int = Field(default_factory=lambda: settings.max_iterations, ge=1)
    strict_positivity: bool = True
    factor_window: int = Field(default_factory=lambda: settings.factor_window, ge=1)
    baseline_window: int = Field(default_factory=lambda: settings.baseline_window, ge=2)
    factors_file: Optional[Path] = None

    def to_model_config(self) -> ModelConfig:
        return ModelConfig(
            p=self.p,
            gamma=self.gamma,
            window_m=self.window_m,
            convergence_eps=self.convergence_eps,
            min_iterations=self.min_iterations,
            max_iterations=self.max_iterations,
            strict_positivity=self.strict_positivity,
        )


class RunSection(_Section):
    scenario: int = Field(default=7, ge=1, le=12)
    scenarios: List[int] = Field(default_factory=lambda: list(range(1, 10)), min_length=1)
    method: PredictionMethod = PredictionMethod.NETWORK
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    factor_seed: Optional[int] = None
    output_dir: Path = Path("reports")
    stride: int = Field(default=1, ge=1)


class SweepSection(_Section):
    parameter: SweepParameter = SweepParameter.GAMMA
    grid: List[float] = Field(default_factory=lambda: [0.5, 0.75, 1.0, 1.5, 2.0], min_length=1)


class ChartSection(_Section):
    lam: float = Field(
        default_factory=lambda: settings.ewma_lambda, gt=0.0, le=1.0, alias="lambda"
    )
    limit_multiplier: float = Field(
        default_factory=lambda: settings.limit_multiplier, gt=0.0, alias="c"
    )
    hurst: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    lrd_adjusted: bool = True
    monitored_links: List[int] = Field(default_factory=lambda: [7, 13, 17], min_length=1)
    alarm_rate_threshold: float = Field(
        default_factory=lambda: settings.alarm_rate_threshold, gt=0.0, lt=1.0
    )


class MisspecificationSection(_Section):
    windows: List[int] = Field(
        default_factory=lambda: [5, 10, 25, 30, 50, 75, 100, 200], min_length=1
    )
    length: int = Field(default=20000, ge=100)
    hurst: float = Field(default=0.8, gt=0.0, lt=1.0)
    scenario: int = Field(default=8, ge=1, le=12)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    stride: int = Field(default=10, ge=1)


class ExperimentConfig(BaseModel):
    """Every section of an experiment file; missing sections take their defaults."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    topology: TopologySection = Field(default_factory=TopologySection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    traces: TracesSection = Field(default_factory=TracesSection)
    trend: Optional[TrendSection] = None
    anomaly: Optional[AnomalySection] = None
    model: ModelSection = Field(default_factory=ModelSection)
    run: RunSection = Field(default_factory=RunSection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    chart: ChartSection = Field(default_factory=ChartSection)
    misspecification: Optional[MisspecificationSection] = None

    def resolve_paths(self, base_dir: Path) -> "ExperimentConfig":
        """Interpret relative file paths against ``base_dir``."""

        def resolve(path: Optional[Path]) -> Optional[Path]:
            if path is None or path.is_absolute():
                return path
            return base_dir / path

        return self.model_copy(
            update={
                "topology": self.topology.model_copy(
                    update={"file": resolve(self.topology.file)}
                ),
                "traces": self.traces.model_copy(
                    update={
                        "flows": resolve(self.traces.flows),
                        "links": resolve(self.traces.links),
                    }
                ),
                "model": self.model.model_copy(
                    update={"factors_file": resolve(self.model.factors_file)}
                ),
                "run": self.run.model_copy(update={"output_dir": resolve(self.run.output_dir)}),
            }
        )


def load_experiment_config(path: Path) -> ExperimentConfig:
    """
    Read and validate an experiment file.

    Args:
        path: TOML file

    Returns:
        Validated configuration with paths resolved against the file's directory

    Raises:
        ConfigurationError: Missing file, malformed TOML or invalid values
    """
    try:
        with path.open("rb") as handle:
            raw = tomllib.load(handle)
    except FileNotFoundError as e:
        raise ConfigurationError(f"config file {path} not found", "load_config") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"{path} is not valid TOML: {e}", "load_config") from e

    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigurationError(f"invalid configuration in {path}: {e}", "load_config") from e
    return config.resolve_paths(path.parent)

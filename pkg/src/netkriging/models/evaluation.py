"""Experiment result models."""

from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from netkriging.models.arrays import ArrayModel, frozen_array
from netkriging.models.chart import ChartResult
from netkriging.models.joint import ModelConfig
from netkriging.models.topology import ObservationScenario
from netkriging.models.traffic import TraceSet


class PredictionMethod(str, Enum):
    """Predictors compared by the evaluation harness."""

    SIMPLE = "simple"
    ORDINARY = "ordinary"
    NETWORK = "network-specific"


class SweepParameter(str, Enum):
    """Calibration parameter varied by a sweep."""

    GAMMA = "gamma"
    P = "p"
    WINDOW_M = "window_m"


class PredictionRun(ArrayModel):
    """Predictions of every unobserved link over the evaluated bins."""

    method: PredictionMethod
    scenario: ObservationScenario
    config: ModelConfig
    times: np.ndarray
    predicted: np.ndarray
    actual: np.ndarray
    remse: float = Field(ge=0.0)
    pseudoinverse_bins: int = Field(default=0, ge=0)

    @field_validator("times", mode="before")
    @classmethod
    def _coerce_times(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=1, name="times", dtype=np.int64)

    @field_validator("predicted", "actual", mode="before")
    @classmethod
    def _coerce_series(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="series")

    @model_validator(mode="after")
    def _check_lengths(self) -> "PredictionRun":
        if self.predicted.shape != self.actual.shape:
            raise ValueError("predicted and actual series must have equal shapes")
        if self.predicted.shape != (len(self.scenario.unobserved), self.times.shape[0]):
            raise ValueError("one series per unobserved link and one column per time")
        return self


class SweepReport(BaseModel):
    """ReMSE for every (scenario, grid value) pair."""

    model_config = ConfigDict(frozen=True)

    parameter: SweepParameter
    grid: Tuple[float, ...] = Field(min_length=1)
    scenario_ids: Tuple[int, ...] = Field(min_length=1)
    remse: Tuple[Tuple[float, ...], ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "SweepReport":
        if len(self.remse) != len(self.scenario_ids):
            raise ValueError("one ReMSE row per scenario is required")
        if any(len(row) != len(self.grid) for row in self.remse):
            raise ValueError("one ReMSE value per grid point is required")
        return self

    def row(self, scenario_id: int) -> Tuple[float, ...]:
        return self.remse[self.scenario_ids.index(scenario_id)]


class GammaCalibration(BaseModel):
    """Log-linear fit of per-flow standard deviation against mean."""

    model_config = ConfigDict(frozen=True)

    gamma_hat: float
    intercept: float
    r_squared: float = Field(ge=0.0, le=1.0)
    window: Tuple[int, int]
    n_flows: int = Field(ge=3)


class MisspecificationRow(BaseModel):
    """Empirical MSE of one regime across windows."""

    model_config = ConfigDict(frozen=True)

    regime: str
    baseline_mse: float = Field(ge=0.0)
    model_mse: Dict[int, float]


class MisspecificationTable(BaseModel):
    """Stationary against trend-added traffic, per estimation window."""

    model_config = ConfigDict(frozen=True)

    windows: Tuple[int, ...] = Field(min_length=1)
    rows: Tuple[MisspecificationRow, ...]

    def regime(self, name: str) -> MisspecificationRow:
        for row in self.rows:
            if row.regime == name:
                return row
        raise KeyError(name)


class LinkChart(BaseModel):
    """Control chart of one monitored link."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    link_id: int
    predictors: Tuple[int, ...]
    chart: ChartResult
    iid_chart: ChartResult
    hurst: float
    sigma2: float
    start_time: int = Field(ge=0, description="Trace bin of the first chart point")
    alarming: bool

    def pre_onset_rate(self, onset: int, lrd: bool = True) -> float:
        chart = self.chart if lrd else self.iid_chart
        return chart.alarm_rate(0, max(onset - self.start_time, 0))

    def post_onset_rate(self, onset: int, lrd: bool = True) -> float:
        chart = self.chart if lrd else self.iid_chart
        return chart.alarm_rate(max(onset - self.start_time, 0))


class AnomalyReport(BaseModel):
    """Per-link charts and the flows consistent with the alarm pattern."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    flow_index: int
    onset: int
    shift: float
    charts: Tuple[LinkChart, ...]
    implicated_flows: FrozenSet[int]

    def chart_for(self, link_id: int) -> LinkChart:
        for chart in self.charts:
            if chart.link_id == link_id:
                return chart
        raise KeyError(link_id)

    @property
    def alarming_links(self) -> List[int]:
        return [c.link_id for c in self.charts if c.alarming]

    def summary(self) -> Dict[str, Any]:
        return {
            "flow_index": self.flow_index,
            "onset": self.onset,
            "shift": self.shift,
            "alarming_links": self.alarming_links,
            "implicated_flows": sorted(self.implicated_flows),
        }


class EvaluationTable(BaseModel):
    """Seed-averaged ReMSE per scenario and method."""

    model_config = ConfigDict(frozen=True)

    methods: Tuple[PredictionMethod, ...]
    scenario_ids: Tuple[int, ...]
    remse: Tuple[Tuple[float, ...], ...]
    seeds: Tuple[int, ...]
    factor_seed: Optional[int] = None

    def value(self, scenario_id: int, method: PredictionMethod) -> float:
        return self.remse[self.scenario_ids.index(scenario_id)][self.methods.index(method)]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.remse, dtype=np.float64)


class SyntheticTraffic(ArrayModel):
    """Simulated flows, the link loads they induce and their true means."""

    flows: TraceSet
    links: TraceSet
    means: np.ndarray
    seed: int

    @field_validator("means", mode="before")
    @classmethod
    def _coerce_means(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="means")

    @model_validator(mode="after")
    def _check_shapes(self) -> "SyntheticTraffic":
        if self.means.shape != self.flows.values.shape:
            raise ValueError("one true mean per flow and bin is required")
        if self.links.length != self.flows.length:
            raise ValueError("flow and link traces must have equal lengths")
        return self

"""Data models for the network kriging toolkit."""

from netkriging.models.chart import ChartConfig, ChartResult, EwmaState, HurstEstimate
from netkriging.models.evaluation import (
    AnomalyReport,
    EvaluationTable,
    GammaCalibration,
    LinkChart,
    MisspecificationRow,
    MisspecificationTable,
    PredictionMethod,
    PredictionRun,
    SweepParameter,
    SweepReport,
)
from netkriging.models.experiment import ExperimentConfig, load_experiment_config
from netkriging.models.factors import FactorMatrix, WindowedMeans
from netkriging.models.joint import BetaEstimate, ModelConfig, ModelFit, ModelFitRecord, SigmaBlocks
from netkriging.models.kriging import KrigingPrediction, MomentEstimate
from netkriging.models.topology import (
    Link,
    NetworkGraph,
    ObservationScenario,
    RoutePolicy,
    RoutingMatrix,
)
from netkriging.models.traffic import AnomalySpec, FgnSpec, TraceKind, TraceSet, TrendSpec

__all__ = [
    "AnomalyReport",
    "AnomalySpec",
    "BetaEstimate",
    "ChartConfig",
    "ChartResult",
    "EvaluationTable",
    "EwmaState",
    "ExperimentConfig",
    "FactorMatrix",
    "FgnSpec",
    "GammaCalibration",
    "HurstEstimate",
    "KrigingPrediction",
    "Link",
    "LinkChart",
    "MisspecificationRow",
    "MisspecificationTable",
    "ModelConfig",
    "ModelFit",
    "ModelFitRecord",
    "MomentEstimate",
    "NetworkGraph",
    "ObservationScenario",
    "PredictionMethod",
    "PredictionRun",
    "RoutePolicy",
    "RoutingMatrix",
    "SigmaBlocks",
    "SweepParameter",
    "SweepReport",
    "TraceKind",
    "TraceSet",
    "TrendSpec",
    "WindowedMeans",
    "load_experiment_config",
]

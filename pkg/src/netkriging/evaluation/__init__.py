"""Prediction experiments, calibration, anomaly charts and their reports."""

from netkriging.evaluation.anomaly import anomaly_experiment, isolate_flows, predictor_links
from netkriging.evaluation.calibration import gamma_regression, sweep
from netkriging.evaluation.metrics import mse, remse
from netkriging.evaluation.misspecification import misspecification_experiment
from netkriging.evaluation.predictors import (
    BasePredictor,
    NetworkPredictor,
    OrdinaryPredictor,
    SimplePredictor,
    build_predictor,
)
from netkriging.evaluation.runner import VERBS, ExperimentRunner
from netkriging.evaluation.runs import evaluate_methods, run_scenario, walk
from netkriging.evaluation.synthetic import learn_factors, simulate_traffic, true_means

__all__ = [
    "VERBS",
    "BasePredictor",
    "ExperimentRunner",
    "NetworkPredictor",
    "OrdinaryPredictor",
    "SimplePredictor",
    "anomaly_experiment",
    "build_predictor",
    "evaluate_methods",
    "gamma_regression",
    "isolate_flows",
    "learn_factors",
    "misspecification_experiment",
    "mse",
    "predictor_links",
    "remse",
    "run_scenario",
    "simulate_traffic",
    "sweep",
    "true_means",
    "walk",
]

"""Link-load predictors compared by the evaluation harness."""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from netkriging.core.config import settings
from netkriging.core.errors import InvalidParameterError
from netkriging.core.logging import get_logger
from netkriging.joint.model import fit_model, plug_in_predict
from netkriging.kriging.ordinary import estimate_sigma_x, ordinary_weights
from netkriging.kriging.simple import simple_krige, windowed_moments
from netkriging.models.evaluation import PredictionMethod
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig
from netkriging.models.kriging import KrigingPrediction
from netkriging.models.topology import ObservationScenario, RoutingMatrix
from netkriging.models.traffic import TraceSet
from netkriging.network.routing import partition
from netkriging.utils.linalg import clip_psd


class BasePredictor(ABC):
    """
    Predicts the unobserved links of a scenario at one time bin.

    Subclasses declare how many bins of history they need before ``t0``.
    """

    method: PredictionMethod

    def __init__(self, routing: RoutingMatrix, scenario: ObservationScenario):
        self.routing = routing
        self.scenario = scenario
        self.a_o, self.a_u = partition(routing, scenario)
        self.observed = [i - 1 for i in scenario.observed]
        self.unobserved = [i - 1 for i in scenario.unobserved]
        self.logger = get_logger(f"predictor.{self.method.value}")

    @property
    @abstractmethod
    def warmup(self) -> int:
        """Smallest admissible prediction time."""

    @abstractmethod
    def predict(self, links: TraceSet, t0: int) -> KrigingPrediction:
        """Predict ``scenario.unobserved`` at bin ``t0`` from the observed links."""


class SimplePredictor(BasePredictor):
    """Simple kriging with moments from the ``window`` bins before t0."""

    method = PredictionMethod.SIMPLE

    def __init__(
        self,
        routing: RoutingMatrix,
        scenario: ObservationScenario,
        window: Optional[int] = None,
    ):
        super().__init__(routing, scenario)
        self.window = window or settings.baseline_window

    @property
    def warmup(self) -> int:
        return self.window

    def predict(self, links: TraceSet, t0: int) -> KrigingPrediction:
        moments = windowed_moments(links, t0, self.window)
        return simple_krige(moments, links.values[self.observed, t0], self.scenario)


class OrdinaryPredictor(BasePredictor):
    """
    Ordinary kriging with the routing-implied variogram.

    The weights do not depend on σ²_X, so they are solved once; σ̂²_X only
    scales the error covariance.
    """

    method = PredictionMethod.ORDINARY

    def __init__(
        self,
        routing: RoutingMatrix,
        scenario: ObservationScenario,
        window: Optional[int] = None,
    ):
        super().__init__(routing, scenario)
        self.window = window or settings.baseline_window
        if self.window < 2:
            raise InvalidParameterError("ordinary kriging needs a window of ≥ 2 bins", "predict")
        self.weights, _, self.used_pseudoinverse = ordinary_weights(routing, scenario, 1.0)
        residual = self.a_u - self.weights @ self.a_o
        self.unit_error = clip_psd(
            residual @ residual.T, scale=float(np.max(self.a_u.sum(axis=1)))
        )

    @property
    def warmup(self) -> int:
        return self.window

    def predict(self, links: TraceSet, t0: int) -> KrigingPrediction:
        history = links.values[self.observed, t0 - self.window : t0]
        sigma_x2 = max(estimate_sigma_x(np.atleast_2d(np.cov(history, ddof=1)), self.a_o), 0.0)
        return KrigingPrediction(
            predicted=self.weights @ links.values[self.observed, t0],
            error_covariance=sigma_x2 * self.unit_error,
            weights=self.weights,
            used_pseudoinverse=self.used_pseudoinverse,
        )


class NetworkPredictor(BasePredictor):
    """Plug-in predictor of the network-specific model, re-fitted at every bin."""

    method = PredictionMethod.NETWORK

    def __init__(
        self,
        routing: RoutingMatrix,
        scenario: ObservationScenario,
        factors: FactorMatrix,
        config: Optional[ModelConfig] = None,
    ):
        super().__init__(routing, scenario)
        self.config = config or ModelConfig()
        self.factors = factors if factors.p == self.config.p else factors.truncate(self.config.p)
        self.a = routing.as_float()

    @property
    def warmup(self) -> int:
        return self.config.window_m - 1

    def predict(self, links: TraceSet, t0: int) -> KrigingPrediction:
        fit = fit_model(links, t0, self.a, self.factors, self.scenario, self.config)
        return plug_in_predict(fit, links.values[self.observed, t0])


def build_predictor(
    method: PredictionMethod,
    routing: RoutingMatrix,
    scenario: ObservationScenario,
    config: Optional[ModelConfig] = None,
    factors: Optional[FactorMatrix] = None,
    baseline_window: Optional[int] = None,
) -> BasePredictor:
    """
    Predictor for ``method``.

    Raises:
        InvalidParameterError: The network-specific method without a factor matrix
    """
    if method == PredictionMethod.SIMPLE:
        return SimplePredictor(routing, scenario, baseline_window)
    if method == PredictionMethod.ORDINARY:
        return OrdinaryPredictor(routing, scenario, baseline_window)
    if factors is None:
        raise InvalidParameterError(
            "the network-specific predictor needs a factor matrix", "build_predictor"
        )
    return NetworkPredictor(routing, scenario, factors, config)

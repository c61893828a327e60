"""Unit tests for simple and ordinary kriging."""

import numpy as np
import pytest

from netkriging.core.errors import (
    InsufficientHistoryError,
    InvalidParameterError,
    SingularMatrixError,
)
from netkriging.kriging.ordinary import (
    estimate_sigma_x,
    ordinary_krige,
    ordinary_weights,
    variogram_matrix,
)
from netkriging.kriging.simple import simple_krige, windowed_moments
from netkriging.models.kriging import MomentEstimate
from netkriging.models.topology import ObservationScenario
from netkriging.models.traffic import TraceKind, TraceSet
from netkriging.network.scenarios import scenario


def moments(mean, covariance) -> MomentEstimate:
    return MomentEstimate(
        mean=np.asarray(mean, dtype=float),
        covariance=np.asarray(covariance, dtype=float),
        window=10,
        at_time=10,
    )


class TestWindowedMoments:
    """Test sample moments over a window."""

    def test_excludes_prediction_bin(self, rng):
        """Test that the window ends one bin before t0."""
        values = rng.normal(size=(3, 20))
        links = TraceSet(values=values, kind=TraceKind.LINK)
        estimate = windowed_moments(links, t0=15, m=5)
        assert np.allclose(estimate.mean, values[:, 10:15].mean(axis=1))
        assert np.allclose(estimate.covariance, np.cov(values[:, 10:15], ddof=1))

    def test_short_history(self):
        """Test a window that starts before the trace."""
        links = TraceSet(values=np.ones((2, 10)), kind=TraceKind.LINK)
        with pytest.raises(InsufficientHistoryError):
            windowed_moments(links, t0=3, m=5)

    def test_window_of_one(self):
        """Test that a covariance needs two bins."""
        links = TraceSet(values=np.ones((2, 10)), kind=TraceKind.LINK)
        with pytest.raises(InsufficientHistoryError):
            windowed_moments(links, t0=5, m=1)


class TestSimpleKriging:
    """Test the conditional-mean predictor."""

    def test_bivariate_gaussian(self):
        """Test the textbook two-variable case."""
        chosen = ObservationScenario(observed=(1,), unobserved=(2,))
        estimate = moments([10.0, 20.0], [[4.0, 2.0], [2.0, 9.0]])
        prediction = simple_krige(estimate, np.array([14.0]), chosen)
        assert prediction.predicted[0] == pytest.approx(20.0 + 0.5 * 4.0)
        assert prediction.error_covariance[0, 0] == pytest.approx(9.0 - 1.0)
        assert not prediction.used_pseudoinverse

    def test_observed_mean_returns_unobserved_mean(self):
        """Test that y_o = μ_o predicts μ_u."""
        chosen = ObservationScenario(observed=(1, 3), unobserved=(2,))
        covariance = np.array([[2.0, 1.0, 0.5], [1.0, 3.0, 1.0], [0.5, 1.0, 2.0]])
        estimate = moments([1.0, 2.0, 3.0], covariance)
        prediction = simple_krige(estimate, np.array([1.0, 3.0]), chosen)
        assert prediction.predicted[0] == pytest.approx(2.0)

    def test_singular_observed_block(self):
        """Test the pseudo-inverse fallback on duplicated observations."""
        chosen = ObservationScenario(observed=(1, 2), unobserved=(3,))
        covariance = np.array([[1.0, 1.0, 0.5], [1.0, 1.0, 0.5], [0.5, 0.5, 1.0]])
        estimate = moments([0.0, 0.0, 0.0], covariance)
        prediction = simple_krige(estimate, np.array([2.0, 2.0]), chosen)
        assert prediction.used_pseudoinverse
        assert prediction.predicted[0] == pytest.approx(1.0)
        with pytest.raises(SingularMatrixError):
            simple_krige(estimate, np.array([2.0, 2.0]), chosen, allow_pinv=False)


class TestOrdinaryKriging:
    """Test the variogram-based predictor."""

    def test_variogram_diagonal(self, routing):
        """Test a zero variogram between a link and itself."""
        variogram = variogram_matrix(routing, 2.0)
        assert np.allclose(np.diag(variogram), 0.0)
        assert np.allclose(variogram, variogram.T)

    def test_variogram_counts_unshared_flows(self, routing):
        """Test γ(i, j) = σ² times the flows on exactly one of the links."""
        variogram = variogram_matrix(routing, 1.0)
        on_13 = set(routing.routes_using(13))
        on_17 = set(routing.routes_using(17))
        assert variogram[12, 16] == pytest.approx(len(on_13 ^ on_17))

    def test_weights_sum_to_one(self, routing):
        """Test the unbiasedness constraint."""
        weights, multipliers, _ = ordinary_weights(routing, scenario(8), 1.0)
        assert weights.shape == (1, 7)
        assert weights.sum(axis=1) == pytest.approx([1.0])
        assert multipliers.shape == (1,)

    def test_weights_do_not_depend_on_scale(self, routing):
        """Test that σ²_X cancels from the weights."""
        unit, _, _ = ordinary_weights(routing, scenario(7), 1.0)
        scaled, _, _ = ordinary_weights(routing, scenario(7), 25.0)
        assert np.allclose(unit, scaled)

    def test_prediction_and_error(self, routing):
        """Test λᵗy_o and the variogram error variance."""
        chosen = scenario(7)
        y_o = np.array([100.0, 200.0, 300.0])
        prediction = ordinary_krige(routing, chosen, 2.0, y_o)
        assert prediction.predicted[0] == pytest.approx(float(prediction.weights[0] @ y_o))
        assert np.all(prediction.error_variance >= 0.0)

    def test_nonpositive_scale(self, routing):
        """Test that σ²_X must be positive."""
        with pytest.raises(InvalidParameterError):
            ordinary_weights(routing, scenario(7), 0.0)

    def test_estimate_sigma_x_recovers_scale(self, routing):
        """Test the least-squares scale on an exact covariance."""
        a_o = routing.rows(scenario(8).observed)
        assert estimate_sigma_x(3.5 * a_o @ a_o.T, a_o) == pytest.approx(3.5)


class TestKrigingErrorCovariance:
    """Test Σ_uu − Σ_uoΣ_oo⁻¹Σ_ou against simulated prediction errors."""

    def test_matches_empirical_errors(self, routing, rng):
        """Test the Frobenius gap between predicted and sampled error covariances."""
        a = routing.as_float()
        mean = a @ rng.uniform(50.0, 150.0, size=72)
        covariance = (a * rng.uniform(1.0, 3.0, size=72)) @ a.T
        chosen = ObservationScenario(observed=scenario(8).observed, unobserved=(2, 13, 15))
        observed = [i - 1 for i in chosen.observed]
        unobserved = [i - 1 for i in chosen.unobserved]
        prediction = simple_krige(moments(mean, covariance), mean[observed], chosen)

        draws = rng.multivariate_normal(mean, covariance, size=20_000)
        predicted = mean[unobserved] + (draws[:, observed] - mean[observed]) @ prediction.weights.T
        errors = predicted - draws[:, unobserved]

        empirical = np.cov(errors, rowvar=False)
        expected = prediction.error_covariance
        assert np.linalg.norm(empirical - expected) / np.linalg.norm(expected) < 0.1
        assert np.abs(errors.mean(axis=0)) == pytest.approx(np.zeros(3), abs=0.1)

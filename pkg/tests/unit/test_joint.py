"""Unit tests for the joint mean–covariance model."""

import json

import numpy as np
import pytest

from netkriging.core.errors import (
    InsufficientHistoryError,
    InvalidInputError,
    InvalidParameterError,
    NonPositiveMeanError,
    RankDeficientError,
)
from netkriging.joint.asymptotics import sigma_m2
from netkriging.joint.igls import (
    exact_gls_estimate,
    flow_weights,
    g_matrix,
    gls_covariance,
    igls_estimate,
    ybar,
)
from netkriging.joint.model import (
    estimate_sigma,
    fit_model,
    plug_in_predict,
    sigma_blocks,
    write_model_fit,
)
from netkriging.models.factors import FactorMatrix
from netkriging.models.traffic import TraceKind, TraceSet
from netkriging.network.routing import route_traffic
from netkriging.network.scenarios import scenario
from netkriging.traffic.fgn import fgn_correlation


def positive_basis(p: int, seed: int = 5):
    """Orthonormal F and β with Fβ equal to strictly positive flow means."""
    rng = np.random.default_rng(seed)
    loadings = rng.uniform(0.5, 1.5, size=(72, p))
    coefficients = np.linspace(100.0, 50.0, p)
    q, r = np.linalg.qr(loadings)
    return FactorMatrix(factors=q), r @ coefficients


class TestYbar:
    """Test the window mean of the observed loads."""

    def test_includes_prediction_bin(self):
        """Test that the window ends at t0 inclusive."""
        y_o = np.arange(10.0).reshape(2, 5)
        assert np.allclose(ybar(y_o, t0=4, m=2), [3.5, 8.5])

    def test_short_history(self):
        """Test a window that starts before the trace."""
        with pytest.raises(InsufficientHistoryError):
            ybar(np.ones((2, 10)), t0=3, m=5)


class TestIgls:
    """Test iterated GLS estimation of β."""

    def test_recovers_beta_without_noise(self, routing, fast_config):
        """Test that exact window means return the generating β."""
        factors, beta = positive_basis(2)
        a_o = routing.rows(scenario(9).observed)
        ybar_o = a_o @ factors.factors @ beta
        estimate = igls_estimate(ybar_o, a_o, factors, 0.75, fast_config)
        assert np.allclose(estimate.beta, beta, rtol=1e-8)
        assert estimate.converged
        assert estimate.iterations_run == fast_config.min_iterations
        assert np.allclose(estimate.iterate(1), beta, rtol=1e-8)

    def test_noise_scale_cancels(self, routing, fast_config, rng):
        """Test that the assumed σ_m² does not change the estimate."""
        factors, beta = positive_basis(2)
        a_o = routing.rows(scenario(9).observed)
        ybar_o = a_o @ factors.factors @ beta + rng.normal(scale=1.0, size=a_o.shape[0])
        unit = igls_estimate(ybar_o, a_o, factors, 0.75, fast_config)
        scaled = igls_estimate(ybar_o, a_o, factors, 0.75, fast_config, noise_scale=7.0)
        assert np.allclose(unit.beta, scaled.beta, rtol=1e-9)

    def test_exact_gls_with_true_beta(self, routing):
        """Test one GLS step weighted with the true β."""
        factors, beta = positive_basis(2)
        a_o = routing.rows(scenario(9).observed)
        ybar_o = a_o @ factors.factors @ beta
        assert np.allclose(exact_gls_estimate(ybar_o, a_o, factors, 0.75, beta), beta, rtol=1e-8)


class TestWeightsAndCovariance:
    """Test flow weights, G(β) and Σ_GLS."""

    def test_flow_weights(self):
        """Test |μ|^{2γ} on positive means."""
        weights = flow_weights(np.array([1.0, 4.0]), 0.5, np.array([True, True]))
        assert np.allclose(weights, [1.0, 4.0])

    def test_nonpositive_mean_reports_flows(self):
        """Test that offending flows are reported with 1-based indices."""
        mu = np.array([1.0, -1.0, 2.0, 0.0])
        with pytest.raises(NonPositiveMeanError) as excinfo:
            flow_weights(mu, 0.75, np.array([True, True, True, True]))
        assert excinfo.value.flow_indices == (2, 4)

    def test_irrelevant_flows_are_not_checked(self):
        """Test that flows outside the observed rows may be nonpositive."""
        mu = np.array([1.0, -1.0])
        weights = flow_weights(mu, 0.75, np.array([True, False]))
        assert np.allclose(weights, [1.0, 1.0])

    def test_g_matrix_symmetric(self, routing):
        """Test that G(β) is symmetric."""
        factors, beta = positive_basis(2)
        g = g_matrix(beta, factors, routing.rows(scenario(7).observed), 0.75)
        assert g.shape == (3, 3)
        assert np.allclose(g, g.T)

    def test_gls_covariance_positive_definite(self, routing):
        """Test Σ_GLS on a design of full column rank."""
        factors, beta = positive_basis(2)
        covariance = gls_covariance(beta, factors, routing.rows(scenario(9).observed), 0.75)
        assert covariance.shape == (2, 2)
        assert np.all(np.linalg.eigvalsh(covariance) > 0)

    def test_gls_covariance_rank_deficient(self, routing):
        """Test more factors than observed links."""
        factors, beta = positive_basis(3)
        with pytest.raises(RankDeficientError):
            gls_covariance(beta, factors, routing.rows(scenario(5).observed), 0.75)


class TestSigmaM2:
    """Test the variance of the window mean."""

    def test_uncorrelated(self):
        """Test σ²/m for zero correlations."""
        assert sigma_m2(3.0, lambda lags: np.zeros(lags.shape), 10) == pytest.approx(0.3)

    def test_single_bin(self):
        """Test that m = 1 gives σ²."""
        assert sigma_m2(2.0, [1.0], 1) == pytest.approx(2.0)

    def test_perfect_correlation(self):
        """Test that ρ ≡ 1 gives σ² for every m."""
        assert sigma_m2(2.0, np.ones(8), 8) == pytest.approx(2.0)

    def test_white_fgn(self):
        """Test that fGn with H = 1/2 behaves like white noise."""
        assert sigma_m2(1.0, fgn_correlation(0.5), 25) == pytest.approx(1.0 / 25)

    def test_long_range_dependence_inflates(self):
        """Test that H > 1/2 inflates the variance."""
        assert sigma_m2(1.0, fgn_correlation(0.8), 25) > 1.0 / 25

    def test_short_sequence(self):
        """Test a correlation sequence with too few lags."""
        with pytest.raises(InvalidParameterError):
            sigma_m2(1.0, [1.0, 0.5], 5)

    def test_invalid_window(self):
        """Test m < 1."""
        with pytest.raises(InvalidParameterError):
            sigma_m2(1.0, [1.0], 0)


class TestSigmaBlocks:
    """Test the partitioned link covariance."""

    def test_blocks(self, routing):
        """Test symmetric diagonal blocks and transposed cross blocks."""
        factors, beta = positive_basis(2)
        blocks = sigma_blocks(beta, factors, routing, 0.75, scenario(8))
        assert blocks.oo.shape == (7, 7)
        assert blocks.uu.shape == (1, 1)
        assert np.allclose(blocks.oo, blocks.oo.T)
        assert np.array_equal(blocks.uo, blocks.ou.T)

    def test_estimate_sigma(self):
        """Test the least-squares scale."""
        sigma_oo = np.array([[2.0, 1.0], [1.0, 3.0]])
        assert estimate_sigma(2.5 * sigma_oo, sigma_oo) == pytest.approx(2.5)

    def test_estimate_sigma_clips_negative(self):
        """Test that a negative coefficient is clipped to zero."""
        sigma_oo = np.array([[2.0, 1.0], [1.0, 3.0]])
        assert estimate_sigma(-sigma_oo, sigma_oo) == 0.0

    def test_estimate_sigma_zero_model(self):
        """Test a zero model covariance."""
        with pytest.raises(InvalidInputError):
            estimate_sigma(np.eye(2), np.zeros((2, 2)))


class TestFitAndPredict:
    """Test model fitting and plug-in prediction."""

    @pytest.fixture
    def constant_fit(self, routing, fast_config):
        factors, beta = positive_basis(2)
        mu = factors.factors @ beta
        flows = TraceSet(values=np.tile(mu[:, np.newaxis], (1, 60)), kind=TraceKind.FLOW)
        links = route_traffic(routing, flows)
        fit = fit_model(links, 59, routing, factors, scenario(9), fast_config)
        return fit, links

    def test_noiseless_trace(self, constant_fit):
        """Test exact fit and prediction on constant traffic."""
        fit, links = constant_fit
        assert fit.sigma2_hat == pytest.approx(0.0, abs=1e-12)
        observed = [i - 1 for i in scenario(9).observed]
        prediction = plug_in_predict(fit, links.values[observed, 59])
        assert prediction.predicted[0] == pytest.approx(links.values[12, 59], rel=1e-8)

    def test_prediction_ignores_sigma(self, constant_fit):
        """Test that σ̂² scales only the error covariance."""
        fit, links = constant_fit
        observed = [i - 1 for i in scenario(9).observed]
        y_o = links.values[observed, 59] * 1.01
        unit = plug_in_predict(fit.model_copy(update={"sigma2_hat": 1.0}), y_o)
        scaled = plug_in_predict(fit.model_copy(update={"sigma2_hat": 4.0}), y_o)
        assert np.allclose(unit.predicted, scaled.predicted)
        assert np.allclose(scaled.error_covariance, 4.0 * unit.error_covariance, rtol=1e-6)

    def test_short_history(self, routing, fast_config):
        """Test a prediction time inside the first window."""
        factors, _ = positive_basis(2)
        links = TraceSet(values=np.ones((26, 40)), kind=TraceKind.LINK)
        with pytest.raises(InsufficientHistoryError):
            fit_model(links, 10, routing, factors, scenario(9), fast_config)

    def test_write_model_fit(self, constant_fit, tmp_path):
        """Test the JSON export."""
        fit, _ = constant_fit
        path = write_model_fit(fit, tmp_path / "model-fit.json", factor_file="factors.txt")
        record = json.loads(path.read_text(encoding="utf-8"))
        assert record["scenario_id"] == 9
        assert record["unobserved"] == [13]
        assert record["p"] == 2
        assert record["factor_file"] == "factors.txt"

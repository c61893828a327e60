"""Large-window behaviour of the iterated GLS estimate and the variance scale."""

import numpy as np
import pytest

from netkriging.joint.asymptotics import sigma_m2
from netkriging.joint.igls import exact_gls_estimate, gls_covariance, igls_estimate
from netkriging.joint.model import fit_model
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig
from netkriging.network.routing import route_traffic
from netkriging.network.scenarios import scenario
from netkriging.traffic.fgn import fgn_correlation
from netkriging.traffic.synthesis import synthesize_flows

HURST = 0.8
SIGMA = 1.5
GAMMA = 0.75
WINDOWS = (100, 1000, 10_000)


@pytest.fixture(scope="module")
def basis():
    rng = np.random.default_rng(11)
    loadings = rng.uniform(0.5, 1.5, size=(72, 2))
    q, r = np.linalg.qr(loadings)
    return FactorMatrix(factors=q), r @ np.array([10_000.0, 5_000.0])


@pytest.fixture(scope="module")
def observed_rows(routing):
    return routing.rows(scenario(8).observed)


def model_config(m):
    return ModelConfig(p=2, gamma=GAMMA, window_m=m, min_iterations=3, max_iterations=50)


def window_sd(m):
    return float(np.sqrt(sigma_m2(SIGMA**2, fgn_correlation(HURST), m)))


def sampled_window_means(mu, a_o, m, n_draws, seed):
    """
    Observed-link window means drawn from their exact distribution.

    The mean of m bins of unit fGn is Gaussian with variance m^{2H−2}, independently
    across flows.
    """
    rng = np.random.default_rng(seed)
    scale = SIGMA * mu**GAMMA * m ** (HURST - 1.0)
    flows = mu + scale * rng.standard_normal((n_draws, mu.shape[0]))
    return flows @ a_o.T


@pytest.fixture(scope="module")
def trace_fits(routing, basis):
    factors, beta = basis
    mu = factors.factors @ beta
    fits = {m: [] for m in WINDOWS}
    for seed in range(40):
        flows = synthesize_flows(mu, HURST, SIGMA, GAMMA, max(WINDOWS), seed=seed)
        links = route_traffic(routing, flows)
        for m in WINDOWS:
            fits[m].append(fit_model(links, m - 1, routing, factors, scenario(8), model_config(m)))
    return fits


@pytest.mark.slow
class TestWindowMeanVariance:
    """Test σ_m² for fGn."""

    @pytest.mark.parametrize("m", WINDOWS)
    def test_matches_self_similar_scaling(self, m):
        """Test σ_m² = σ² m^{2H−2}."""
        assert window_sd(m) ** 2 == pytest.approx(SIGMA**2 * m ** (2 * HURST - 2), rel=1e-9)


@pytest.mark.slow
class TestTraceConsistency:
    """Test estimates fitted on simulated traces over growing windows."""

    def test_beta_error_shrinks(self, trace_fits, basis):
        """Test that the mean relative error of β̂ falls with m and ends below 5%."""
        _, beta = basis
        errors = [
            np.mean([np.linalg.norm(fit.beta.beta - beta) for fit in trace_fits[m]])
            / np.linalg.norm(beta)
            for m in WINDOWS
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 0.05

    def test_sigma2_recovered(self, trace_fits):
        """Test σ̂² within 10% of σ² = 2.25 on the longest window."""
        sigma2_hat = np.mean([fit.sigma2_hat for fit in trace_fits[WINDOWS[-1]]])
        assert sigma2_hat == pytest.approx(SIGMA**2, rel=0.10)

    def test_sigma2_approaches_truth(self, trace_fits):
        """Test that short windows underestimate σ² more than long ones."""
        means = [np.mean([fit.sigma2_hat for fit in trace_fits[m]]) for m in WINDOWS]
        assert abs(means[0] - SIGMA**2) > abs(means[2] - SIGMA**2)


@pytest.mark.slow
class TestSecondIterate:
    """Test β̂₂ against GLS weighted with the true β."""

    def test_gap_vanishes_faster_than_noise(self, basis, observed_rows):
        """Test that ‖β̂₂ − β̂_GLS‖/σ_m falls with m."""
        factors, beta = basis
        mu = factors.factors @ beta
        ratios = []
        for m in WINDOWS:
            gaps = []
            for ybar_o in sampled_window_means(mu, observed_rows, m, 500, seed=m):
                estimate = igls_estimate(ybar_o, observed_rows, factors, GAMMA, model_config(m))
                exact = exact_gls_estimate(ybar_o, observed_rows, factors, GAMMA, beta)
                gaps.append(np.linalg.norm(estimate.iterate(2) - exact))
            ratios.append(np.mean(gaps) / window_sd(m))
        assert ratios[0] > ratios[1] > ratios[2]

    def test_covariance_matches_gls(self, basis, observed_rows):
        """Test Cov(β̂₂) against σ_m² Σ_GLS(β) at m = 10⁴."""
        factors, beta = basis
        mu = factors.factors @ beta
        m = WINDOWS[-1]
        draws = np.vstack(
            [
                igls_estimate(ybar_o, observed_rows, factors, GAMMA, model_config(m)).iterate(2)
                for ybar_o in sampled_window_means(mu, observed_rows, m, 2000, seed=3)
            ]
        )
        empirical = np.cov(draws, rowvar=False)
        expected = window_sd(m) ** 2 * gls_covariance(beta, factors, observed_rows, GAMMA)
        gap = np.linalg.norm(empirical - expected) / np.linalg.norm(expected)
        assert gap < 0.15

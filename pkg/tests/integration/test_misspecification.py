"""Integration tests for stationary against trend-added traffic."""

import pytest

from netkriging.evaluation.misspecification import (
    STATIONARY,
    TREND,
    misspecification_experiment,
    stationary_means,
)
from netkriging.models.experiment import MisspecificationSection, SimulationSection
from netkriging.models.joint import ModelConfig
from netkriging.models.traffic import TrendSpec


@pytest.fixture(scope="module")
def table(routing):
    section = MisspecificationSection(windows=[10, 40], length=400, stride=20, scenario=8)
    simulation = SimulationSection(seed=0)
    return misspecification_experiment(
        routing,
        section,
        simulation,
        config=None,
        factor_window=50,
    )


class TestMisspecification:
    """Test the two traffic regimes."""

    def test_baseline_is_unaffected_by_trend(self, table):
        """Test that the oracle baseline knows the trend and scores equally."""
        assert table.regime(TREND).baseline_mse == pytest.approx(
            table.regime(STATIONARY).baseline_mse, rel=1e-9
        )

    def test_one_score_per_window(self, table):
        """Test model MSE for every window in both regimes."""
        assert table.windows == (10, 40)
        for name in (STATIONARY, TREND):
            row = table.regime(name)
            assert set(row.model_mse) == {10, 40}
            assert all(value > 0 for value in row.model_mse.values())

    def test_unknown_regime(self, table):
        """Test a regime name that does not exist."""
        with pytest.raises(KeyError):
            table.regime("seasonal")

    def test_explicit_trend(self, routing):
        """Test a zero-amplitude trend, which leaves both regimes equal."""
        section = MisspecificationSection(windows=[20], length=200, stride=20, scenario=8)
        table = misspecification_experiment(
            routing,
            section,
            SimulationSection(seed=0),
            trend=TrendSpec(amplitude=0.0, period=100.0),
            factor_window=50,
        )
        assert table.regime(TREND).model_mse[20] == pytest.approx(
            table.regime(STATIONARY).model_mse[20]
        )

    def test_stationary_means_positive(self, routing):
        """Test the shared constant flow means."""
        mu = stationary_means(routing, SimulationSection(seed=0))
        assert mu.shape == (72,)
        assert (mu > 0).all()


@pytest.fixture(scope="module")
def long_table(routing):
    section = MisspecificationSection(
        windows=[5, 25, 50, 75], length=6000, stride=10, scenario=8, seeds=[0, 1]
    )
    return misspecification_experiment(
        routing,
        section,
        SimulationSection(seed=0),
        config=ModelConfig(p=2, min_iterations=3),
    )


@pytest.mark.slow
class TestMisspecificationOrdering:
    """Test how a trend in the means degrades the model over windows."""

    def test_trend_always_hurts(self, long_table):
        """Test a larger error with the trend at every window."""
        stationary = long_table.regime(STATIONARY).model_mse
        trended = long_table.regime(TREND).model_mse
        for m in long_table.windows:
            assert trended[m] > stationary[m]

    def test_long_windows_lag_the_trend(self, long_table):
        """Test that windows of 50 and 75 bins do worse than 5 bins under the trend."""
        trended = long_table.regime(TREND).model_mse
        assert trended[50] > trended[5]
        assert trended[75] > trended[5]

    def test_stationary_close_to_baseline(self, long_table):
        """Test stationary MSE within 15% of the baseline from 25 bins on."""
        row = long_table.regime(STATIONARY)
        for m in (25, 50, 75):
            assert row.model_mse[m] == pytest.approx(row.baseline_mse, rel=0.15)

"""Integration tests for anomalous-flow charting and isolation."""

import numpy as np
import pytest

from netkriging.core.errors import InvalidInputError
from netkriging.evaluation.anomaly import anomaly_experiment, isolate_flows, predictor_links
from netkriging.evaluation.synthetic import learn_factors, simulate_traffic
from netkriging.models.chart import ChartConfig
from netkriging.models.experiment import SimulationSection
from netkriging.models.joint import ModelConfig
from netkriging.network.topology import ATLANTA, KANSAS_CITY, SALT_LAKE_CITY, SEATTLE


class TestIsolation:
    """Test flow isolation from the alarm pattern."""

    def test_kansas_city_to_atlanta_pattern(self, routing):
        """Test alarms on 13 and 17 with link 7 quiet."""
        expected = {
            routing.route_index(KANSAS_CITY, ATLANTA),
            routing.route_index(SALT_LAKE_CITY, ATLANTA),
            routing.route_index(SEATTLE, ATLANTA),
        }
        assert isolate_flows(routing, [13, 17], [7]) == frozenset(expected)

    def test_no_alarms(self, routing):
        """Test that a quiet network implicates nothing."""
        assert isolate_flows(routing, [], [7, 13, 17]) == frozenset()

    def test_predictors_avoid_carriers(self, routing):
        """Test that no predictor link carries the anomalous flow."""
        flow = routing.route_index(KANSAS_CITY, ATLANTA)
        chosen = predictor_links(routing, 7, flow)
        assert 7 not in chosen
        assert not {13, 17} & set(chosen)
        assert all(flow not in routing.routes_using(k) for k in chosen)

    def test_predictors_share_flows(self, routing):
        """Test that every predictor shares a flow with the target."""
        flow = routing.route_index(KANSAS_CITY, ATLANTA)
        target = set(routing.routes_using(13))
        for k in predictor_links(routing, 13, flow):
            assert target & set(routing.routes_using(k))


class TestAnomalyExperiment:
    """Test the injected mean shift end to end."""

    def test_onset_inside_warmup(self, routing, traffic, factors, fast_config):
        """Test an onset before the model window is filled."""
        with pytest.raises(InvalidInputError):
            anomaly_experiment(
                traffic.flows, routing, factors, 1, 10, [13], config=fast_config
            )

    def test_unknown_flow(self, routing, traffic, factors, fast_config):
        """Test a flow index beyond the routing matrix."""
        with pytest.raises(InvalidInputError):
            anomaly_experiment(
                traffic.flows, routing, factors, 73, 300, [13], config=fast_config
            )

    @pytest.mark.slow
    def test_shift_is_detected_and_isolated(self, routing):
        """Test alarms on the links that carry Kansas City→Atlanta."""
        simulation = SimulationSection(length=2000, seed=0)
        flows = simulate_traffic(routing, simulation, seed=1).flows
        factors = learn_factors(simulate_traffic(routing, simulation, seed=0).flows, 2, 200)
        flow = routing.route_index(KANSAS_CITY, ATLANTA)

        report = anomaly_experiment(
            flows,
            routing,
            factors,
            flow,
            onset=1000,
            monitored_links=[7, 13, 17],
            shift_in_std=5.0,
            chart=ChartConfig(lam=0.1, sigma2=1.0, limit_multiplier=3.0),
            config=ModelConfig(p=2, window_m=60, min_iterations=5),
        )

        assert {13, 17} <= set(report.alarming_links)
        for link_id in (13, 17):
            chart = report.chart_for(link_id)
            assert chart.post_onset_rate(1000) > chart.pre_onset_rate(1000)
        assert report.chart_for(7).predictors == predictor_links(routing, 7, flow)
        assert report.shift > 0


ONSET = 700
SEEDS = range(1, 21)


def charted_seeds(routing, flow, monitored_links):
    simulation = SimulationSection(length=1200, seed=0)
    factors = learn_factors(simulate_traffic(routing, simulation, seed=0).flows, 2, 200)
    return [
        anomaly_experiment(
            simulate_traffic(routing, simulation, seed=seed).flows,
            routing,
            factors,
            flow,
            onset=ONSET,
            monitored_links=monitored_links,
            chart=ChartConfig(lam=0.1, sigma2=1.0, limit_multiplier=3.0),
            config=ModelConfig(p=2, window_m=60, min_iterations=5),
        )
        for seed in SEEDS
    ]


def mean_rate(reports, link_id, post, lrd=True):
    charts = [report.chart_for(link_id) for report in reports]
    if post:
        return float(np.mean([c.post_onset_rate(ONSET, lrd) for c in charts]))
    return float(np.mean([c.pre_onset_rate(ONSET, lrd) for c in charts]))


@pytest.fixture(scope="module")
def single_link_reports(routing):
    flow = next(j for j in routing.routes_using(13) if routing.links_of_route(j) == (13,))
    return charted_seeds(routing, flow, [13])


@pytest.fixture(scope="module")
def multi_link_reports(routing):
    return charted_seeds(routing, routing.route_index(KANSAS_CITY, ATLANTA), [7, 13, 17])


@pytest.mark.slow
class TestAlarmRates:
    """Test seed-averaged alarm rates over 20 traces."""

    def test_single_link_shift_detected(self, single_link_reports):
        """Test that the LRD chart alarms on most post-onset bins."""
        assert mean_rate(single_link_reports, 13, post=True) > 0.5

    def test_lrd_false_alarms_rare(self, single_link_reports):
        """Test a pre-onset false-alarm rate below 5% with LRD limits."""
        assert mean_rate(single_link_reports, 13, post=False) < 0.05

    def test_iid_limits_raise_false_alarms(self, single_link_reports):
        """Test that i.i.d. limits alarm more often before the onset."""
        iid = mean_rate(single_link_reports, 13, post=False, lrd=False)
        assert iid > mean_rate(single_link_reports, 13, post=False)

    def test_only_carrying_links_alarm(self, multi_link_reports):
        """Test links 13 and 17 above the alarm threshold and link 7 below it."""
        threshold = 0.1
        assert mean_rate(multi_link_reports, 13, post=True) > threshold
        assert mean_rate(multi_link_reports, 17, post=True) > threshold
        assert mean_rate(multi_link_reports, 7, post=True) <= threshold

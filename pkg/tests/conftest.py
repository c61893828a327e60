"""Shared fixtures: the Internet2 network and a short simulated trace."""

import numpy as np
import pytest

from netkriging.evaluation.synthetic import learn_factors, simulate_traffic
from netkriging.models.evaluation import SyntheticTraffic
from netkriging.models.experiment import SimulationSection
from netkriging.models.factors import FactorMatrix
from netkriging.models.joint import ModelConfig
from netkriging.models.topology import NetworkGraph, RoutingMatrix
from netkriging.network.routing import build_routing_matrix
from netkriging.network.topology import internet2_topology


@pytest.fixture(scope="session")
def graph() -> NetworkGraph:
    return internet2_topology()


@pytest.fixture(scope="session")
def routing(graph: NetworkGraph) -> RoutingMatrix:
    return build_routing_matrix(graph)


@pytest.fixture(scope="session")
def simulation() -> SimulationSection:
    return SimulationSection(length=600, hurst=0.8, sigma=0.5, gamma=0.75, seed=0)


@pytest.fixture(scope="session")
def traffic(routing: RoutingMatrix, simulation: SimulationSection) -> SyntheticTraffic:
    return simulate_traffic(routing, simulation, seed=1)


@pytest.fixture(scope="session")
def factors(routing: RoutingMatrix, simulation: SimulationSection) -> FactorMatrix:
    training = simulate_traffic(routing, simulation, seed=0)
    return learn_factors(training.flows, p=4, window=50)


@pytest.fixture
def fast_config() -> ModelConfig:
    return ModelConfig(p=2, gamma=0.75, window_m=30, min_iterations=3, max_iterations=50)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)

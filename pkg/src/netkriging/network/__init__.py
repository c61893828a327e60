"""Network graphs, routing matrices and observation scenarios."""

from netkriging.network.routing import (
    build_routing_matrix,
    partition,
    read_routing_matrix,
    route_traffic,
    validate_scenario,
    write_routing_matrix,
)
from netkriging.network.scenarios import SCENARIO_IDS, scenario
from netkriging.network.topology import internet2_topology, read_topology, write_topology

__all__ = [
    "SCENARIO_IDS",
    "build_routing_matrix",
    "internet2_topology",
    "partition",
    "read_routing_matrix",
    "read_topology",
    "route_traffic",
    "scenario",
    "validate_scenario",
    "write_routing_matrix",
    "write_topology",
]

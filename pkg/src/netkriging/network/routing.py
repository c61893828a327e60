"""Routing matrices, observed/unobserved partitions and the routing equation."""

from pathlib import Path
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from netkriging.core.errors import DimensionMismatchError, RoutingError, ScenarioError
from netkriging.core.logging import get_logger
from netkriging.models.topology import NetworkGraph, ObservationScenario, RoutePolicy, RoutingMatrix
from netkriging.models.traffic import TraceKind, TraceSet


logger = get_logger(__name__)


def _route(graph: nx.DiGraph, source: str, destination: str, weight: Optional[str]) -> List[str]:
    """Shortest path with ties broken by the lexicographic order of node labels."""
    try:
        return min(nx.all_shortest_paths(graph, source, destination, weight=weight))
    except nx.NetworkXNoPath as e:
        raise RoutingError(source, destination, operation="build_routing_matrix") from e


def build_routing_matrix(
    graph: NetworkGraph, policy: RoutePolicy = RoutePolicy.SHORTEST_METRIC
) -> RoutingMatrix:
    """
    Route every ordered pair of distinct nodes and record the links used.

    Columns are ordered source-major following ``graph.nodes``. With unit link
    metrics both policies coincide.

    Args:
        graph: Network graph
        policy: Hop count or summed link metric as the path length

    Returns:
        L×n(n−1) routing matrix

    Raises:
        RoutingError: Some destination is unreachable from some source
    """
    digraph = graph.to_digraph()
    weight = "metric" if policy == RoutePolicy.SHORTEST_METRIC else None
    link_of: Dict[Tuple[str, str], int] = {
        (link.source, link.destination): link.link_id for link in graph.links
    }

    labels: List[Tuple[str, str]] = []
    columns: List[np.ndarray] = []
    for source in graph.nodes:
        for destination in graph.nodes:
            if source == destination:
                continue
            path = _route(digraph, source, destination, weight)
            column = np.zeros(graph.n_links, dtype=np.int8)
            for hop in zip(path[:-1], path[1:]):
                column[link_of[hop] - 1] = 1
            labels.append((source, destination))
            columns.append(column)

    matrix = RoutingMatrix(entries=np.column_stack(columns), route_labels=tuple(labels))
    logger.debug(
        "routing_matrix_built",
        policy=policy.value,
        links=matrix.n_links,
        routes=matrix.n_routes,
    )
    return matrix


def validate_scenario(routing: RoutingMatrix, scenario: ObservationScenario) -> None:
    """
    Raises:
        ScenarioError: The scenario names a link the routing matrix does not have
    """
    missing = [i for i in scenario.all_links if i > routing.n_links]
    if missing:
        raise ScenarioError(
            f"links {missing} exceed the {routing.n_links} links of the routing matrix",
            operation="partition",
        )


def partition(
    routing: RoutingMatrix, scenario: ObservationScenario
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split A into its observed rows A_o and unobserved rows A_u.

    Rows appear in the order the scenario lists the links.
    """
    validate_scenario(routing, scenario)
    return routing.rows(scenario.observed), routing.rows(scenario.unobserved)


def route_traffic(routing: RoutingMatrix, flows: TraceSet) -> TraceSet:
    """
    Apply the routing equation Y(t) = A X(t).

    Raises:
        DimensionMismatchError: Column count of A differs from the number of flows
    """
    if flows.n_series != routing.n_routes:
        raise DimensionMismatchError(
            f"routing matrix has {routing.n_routes} routes, trace has {flows.n_series} flows",
            operation="route_traffic",
        )
    return TraceSet(
        values=routing.as_float() @ flows.values,
        kind=TraceKind.LINK,
        bin_seconds=flows.bin_seconds,
    )


def write_routing_matrix(routing: RoutingMatrix, path: Path) -> Path:
    """Write A as delimited 0/1 rows (one per link) under a ``src->dst`` header."""
    frame = pd.DataFrame(
        routing.entries,
        columns=[routing.label(j) for j in range(1, routing.n_routes + 1)],
    )
    frame.to_csv(path, index=False)
    return path


def read_routing_matrix(path: Path) -> RoutingMatrix:
    """Inverse of :func:`write_routing_matrix`."""
    frame = pd.read_csv(path)
    labels = []
    for column in frame.columns:
        source, _, destination = str(column).partition("->")
        labels.append((source, destination))
    return RoutingMatrix(entries=frame.to_numpy(), route_labels=tuple(labels))

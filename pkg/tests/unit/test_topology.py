"""Unit tests for network graphs, routing matrices and scenarios."""

import numpy as np
import pytest
from pydantic import ValidationError

from netkriging.core.errors import (
    DimensionMismatchError,
    RoutingError,
    ScenarioError,
    TopologyError,
)
from netkriging.models.topology import Link, NetworkGraph, ObservationScenario, RoutePolicy
from netkriging.models.traffic import TraceKind, TraceSet
from netkriging.network.routing import (
    build_routing_matrix,
    partition,
    read_routing_matrix,
    route_traffic,
    write_routing_matrix,
)
from netkriging.network.scenarios import SCENARIO_IDS, scenario
from netkriging.network.topology import (
    ATLANTA,
    HOUSTON,
    KANSAS_CITY,
    SALT_LAKE_CITY,
    SEATTLE,
    read_topology,
    write_topology,
)


def triangle(metric_ab: float = 1.0) -> NetworkGraph:
    links = [
        Link(link_id=1, source="a", destination="b", capacity_bps=1.0, metric=metric_ab),
        Link(link_id=2, source="b", destination="a", capacity_bps=1.0, metric=metric_ab),
        Link(link_id=3, source="b", destination="c", capacity_bps=1.0),
        Link(link_id=4, source="c", destination="b", capacity_bps=1.0),
        Link(link_id=5, source="a", destination="c", capacity_bps=1.0),
        Link(link_id=6, source="c", destination="a", capacity_bps=1.0),
    ]
    return NetworkGraph(nodes=("a", "b", "c"), links=tuple(links))


class TestInternet2Topology:
    """Test the Internet2 preset."""

    def test_size(self, graph):
        """Test node and link counts."""
        assert graph.n_nodes == 9
        assert graph.n_links == 26

    def test_link_directions(self, graph):
        """Test that odd ids are forward and even ids reverse."""
        assert (graph.link(15).source, graph.link(15).destination) == (HOUSTON, ATLANTA)
        assert (graph.link(16).source, graph.link(16).destination) == (ATLANTA, HOUSTON)

    def test_unknown_link(self, graph):
        """Test lookup of a missing link id."""
        with pytest.raises(KeyError):
            graph.link(27)


class TestNetworkGraphValidation:
    """Test structural checks on graphs."""

    def test_rejects_gap_in_link_ids(self):
        """Test that link ids must run from 1 without gaps."""
        with pytest.raises(ValidationError):
            NetworkGraph(
                nodes=("a", "b"),
                links=(Link(link_id=2, source="a", destination="b", capacity_bps=1.0),),
            )

    def test_rejects_undeclared_node(self):
        """Test that links may only join declared nodes."""
        with pytest.raises(ValidationError):
            NetworkGraph(
                nodes=("a", "b"),
                links=(Link(link_id=1, source="a", destination="z", capacity_bps=1.0),),
            )

    def test_rejects_self_loop(self):
        """Test that a link cannot start and end at one node."""
        with pytest.raises(ValidationError):
            Link(link_id=1, source="a", destination="a", capacity_bps=1.0)


class TestTopologyFiles:
    """Test topology file reading and writing."""

    def test_round_trip(self, graph, tmp_path):
        """Test that a written preset reads back unchanged."""
        path = write_topology(graph, tmp_path / "internet2.csv")
        assert read_topology(path) == graph

    def test_comments_and_default_metric(self, tmp_path):
        """Test comment lines and the optional metric column."""
        path = tmp_path / "pair.csv"
        path.write_text("# two routers\n1,a,b,1e9\n2,b,a,1e9,3\n", encoding="utf-8")
        loaded = read_topology(path)
        assert loaded.nodes == ("a", "b")
        assert loaded.link(1).metric == 1.0
        assert loaded.link(2).metric == 3.0

    def test_malformed_line(self, tmp_path):
        """Test that a short line is reported with its number."""
        path = tmp_path / "bad.csv"
        path.write_text("1,a,b,1e9\n2,b\n", encoding="utf-8")
        with pytest.raises(TopologyError, match=":2:"):
            read_topology(path)


class TestRoutingMatrix:
    """Test routing matrix construction on the Internet2 preset."""

    def test_shape_and_entries(self, routing):
        """Test one row per link and one column per ordered node pair."""
        assert routing.entries.shape == (26, 72)
        assert set(np.unique(routing.entries)) <= {0, 1}

    def test_source_major_order(self, routing, graph):
        """Test that columns follow the node order, source first."""
        assert routing.route_labels[0] == (graph.nodes[0], graph.nodes[1])
        assert routing.route_labels[8] == (graph.nodes[1], graph.nodes[0])

    def test_metric_routes(self, routing):
        """Test routes chosen by summed link metric."""
        kc_atl = routing.route_index(KANSAS_CITY, ATLANTA)
        assert routing.links_of_route(kc_atl) == (13, 17)
        sea_atl = routing.route_index(SEATTLE, ATLANTA)
        assert routing.links_of_route(sea_atl) == (3, 9, 13, 17)
        assert kc_atl not in routing.routes_using(7)

    def test_link_13_load(self, routing):
        """Test the number of routes over Kansas City→Chicago."""
        assert len(routing.routes_using(13)) == 14

    def test_label(self, routing):
        """Test route labels."""
        index = routing.route_index(SALT_LAKE_CITY, KANSAS_CITY)
        assert routing.label(index) == f"{SALT_LAKE_CITY}->{KANSAS_CITY}"

    def test_unknown_route(self, routing):
        """Test lookup of a pair that is not routed."""
        with pytest.raises(KeyError):
            routing.route_index(SEATTLE, SEATTLE)

    def test_policies_agree_on_unit_metrics(self):
        """Test that hop and metric routing coincide when every metric is 1."""
        graph = triangle()
        hop = build_routing_matrix(graph, RoutePolicy.SHORTEST_HOP)
        metric = build_routing_matrix(graph, RoutePolicy.SHORTEST_METRIC)
        assert np.array_equal(hop.entries, metric.entries)

    def test_metric_detour(self):
        """Test that an expensive direct link is avoided under metric routing."""
        graph = triangle(metric_ab=5.0)
        routing = build_routing_matrix(graph, RoutePolicy.SHORTEST_METRIC)
        assert routing.links_of_route(routing.route_index("a", "b")) == (4, 5)
        hop = build_routing_matrix(graph, RoutePolicy.SHORTEST_HOP)
        assert hop.links_of_route(hop.route_index("a", "b")) == (1,)

    def test_unreachable_destination(self):
        """Test that a missing path raises RoutingError."""
        graph = NetworkGraph(
            nodes=("a", "b"),
            links=(Link(link_id=1, source="a", destination="b", capacity_bps=1.0),),
        )
        with pytest.raises(RoutingError):
            build_routing_matrix(graph)

    def test_file_round_trip(self, routing, tmp_path):
        """Test writing and reading the routing matrix."""
        path = write_routing_matrix(routing, tmp_path / "routing.csv")
        loaded = read_routing_matrix(path)
        assert np.array_equal(loaded.entries, routing.entries)
        assert loaded.route_labels == routing.route_labels


class TestRoutingEquation:
    """Test Y = AX and the observed/unobserved partition."""

    def test_route_traffic(self, routing, rng):
        """Test that link loads are sums of the flows they carry."""
        flows = TraceSet(values=rng.uniform(1, 2, size=(72, 5)), kind=TraceKind.FLOW)
        links = route_traffic(routing, flows)
        assert links.kind == TraceKind.LINK
        expected = flows.values[[j - 1 for j in routing.routes_using(13)]].sum(axis=0)
        assert np.allclose(links.values[12], expected)

    def test_route_traffic_shape_mismatch(self, routing):
        """Test a trace with the wrong number of flows."""
        flows = TraceSet(values=np.ones((5, 3)), kind=TraceKind.FLOW)
        with pytest.raises(DimensionMismatchError):
            route_traffic(routing, flows)

    def test_partition_order(self, routing):
        """Test that partitioned rows follow the scenario order."""
        chosen = ObservationScenario(observed=(9, 3), unobserved=(13,))
        a_o, a_u = partition(routing, chosen)
        assert np.array_equal(a_o[0], routing.entries[8])
        assert np.array_equal(a_o[1], routing.entries[2])
        assert np.array_equal(a_u[0], routing.entries[12])

    def test_partition_rejects_unknown_link(self, routing):
        """Test a scenario naming a link beyond the matrix."""
        with pytest.raises(ScenarioError):
            partition(routing, ObservationScenario(observed=(3,), unobserved=(40,)))


class TestScenarios:
    """Test the numbered observation scenarios."""

    def test_twelve_scenarios(self):
        """Test the scenario ids."""
        assert SCENARIO_IDS == tuple(range(1, 13))

    @pytest.mark.parametrize(
        "scenario_id,unobserved,observed",
        [
            (1, (7,), (2, 12)),
            (7, (13,), (3, 9, 12)),
            (8, (13,), (3, 7, 9, 12, 17, 19, 21)),
            (12, (19,), (2, 3, 9, 12, 15, 21, 23, 25)),
        ],
    )
    def test_table(self, scenario_id, unobserved, observed):
        """Test selected rows of the scenario table."""
        chosen = scenario(scenario_id)
        assert chosen.unobserved == unobserved
        assert chosen.observed == observed
        assert chosen.scenario_id == scenario_id

    def test_unknown_id(self):
        """Test an id outside 1..12."""
        with pytest.raises(ScenarioError):
            scenario(13)

    def test_overlap_rejected(self):
        """Test that a link cannot be both observed and predicted."""
        with pytest.raises(ValidationError):
            ObservationScenario(observed=(3, 13), unobserved=(13,))

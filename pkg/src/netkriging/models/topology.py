"""Network topology, routing matrix and observation scenario models."""

from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from netkriging.models.arrays import ArrayModel, frozen_array


class RoutePolicy(str, Enum):
    """How a route is chosen between two nodes."""

    SHORTEST_HOP = "shortest-hop"
    SHORTEST_METRIC = "shortest-metric"


class Link(BaseModel):
    """Directed physical link."""

    model_config = ConfigDict(frozen=True)

    link_id: int = Field(ge=1)
    source: str
    destination: str
    capacity_bps: float = Field(ge=0, description="Capacity metadata, never enforced")
    metric: float = Field(default=1.0, gt=0, description="Routing weight")

    @model_validator(mode="after")
    def _distinct_endpoints(self) -> "Link":
        if self.source == self.destination:
            raise ValueError(f"link {self.link_id} is a self-loop on {self.source!r}")
        return self


class NetworkGraph(BaseModel):
    """Nodes plus directed links with ids 1..L."""

    model_config = ConfigDict(frozen=True)

    nodes: Tuple[str, ...] = Field(min_length=2)
    links: Tuple[Link, ...] = Field(min_length=1)

    @field_validator("links")
    @classmethod
    def _sort_links(cls, links: Tuple[Link, ...]) -> Tuple[Link, ...]:
        return tuple(sorted(links, key=lambda link: link.link_id))

    @model_validator(mode="after")
    def _check_structure(self) -> "NetworkGraph":
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("node labels must be unique")
        ids = [link.link_id for link in self.links]
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError("link ids must be unique and contiguous from 1")
        declared = set(self.nodes)
        pairs = set()
        for link in self.links:
            for endpoint in (link.source, link.destination):
                if endpoint not in declared:
                    raise ValueError(f"link {link.link_id} uses undeclared node {endpoint!r}")
            pair = (link.source, link.destination)
            if pair in pairs:
                raise ValueError(f"parallel links {pair} are not supported")
            pairs.add(pair)
        return self

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_links(self) -> int:
        return len(self.links)

    def link(self, link_id: int) -> Link:
        """Link with the given 1-based id."""
        if not 1 <= link_id <= self.n_links:
            raise KeyError(f"unknown link id {link_id}")
        return self.links[link_id - 1]

    def to_digraph(self) -> nx.DiGraph:
        """networkx view with ``link_id``, ``metric`` and ``capacity_bps`` edge attributes."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        for link in self.links:
            graph.add_edge(
                link.source,
                link.destination,
                link_id=link.link_id,
                metric=link.metric,
                capacity_bps=link.capacity_bps,
            )
        return graph


class RoutingMatrix(ArrayModel):
    """L×J 0/1 incidence of links (rows, link ids 1..L) over routes (columns)."""

    entries: np.ndarray
    route_labels: Tuple[Tuple[str, str], ...]

    @field_validator("entries", mode="before")
    @classmethod
    def _coerce_entries(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="entries", dtype=np.int8)

    @model_validator(mode="after")
    def _check_entries(self) -> "RoutingMatrix":
        if not np.isin(self.entries, (0, 1)).all():
            raise ValueError("routing matrix entries must be 0 or 1")
        if self.entries.shape[1] != len(self.route_labels):
            raise ValueError(
                f"{self.entries.shape[1]} columns but {len(self.route_labels)} route labels"
            )
        unused = np.flatnonzero(self.entries.sum(axis=0) == 0)
        if unused.size:
            raise ValueError(f"routes {[int(j) + 1 for j in unused]} use no link")
        return self

    @property
    def n_links(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_routes(self) -> int:
        return int(self.entries.shape[1])

    def as_float(self) -> np.ndarray:
        """Entries as a float64 matrix for numerical work."""
        return self.entries.astype(np.float64)

    def route_index(self, source: str, destination: str) -> int:
        """1-based flow index of the route from ``source`` to ``destination``."""
        try:
            return self.route_labels.index((source, destination)) + 1
        except ValueError as e:
            raise KeyError(f"no route {source}->{destination}") from e

    def label(self, flow_index: int) -> str:
        source, destination = self.route_labels[flow_index - 1]
        return f"{source}->{destination}"

    def routes_using(self, link_id: int) -> Tuple[int, ...]:
        """1-based flow indices of the routes crossing ``link_id``."""
        return tuple(int(j) + 1 for j in np.flatnonzero(self.entries[link_id - 1]))

    def links_of_route(self, flow_index: int) -> Tuple[int, ...]:
        """Link ids crossed by the route with 1-based index ``flow_index``."""
        return tuple(int(i) + 1 for i in np.flatnonzero(self.entries[:, flow_index - 1]))

    def rows(self, link_ids: Sequence[int]) -> np.ndarray:
        """Float rows for the given link ids, in the given order."""
        return self.as_float()[[link_id - 1 for link_id in link_ids]]


class ObservationScenario(BaseModel):
    """Observed links O and prediction targets U."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"observed": [3, 9, 12], "unobserved": [13], "scenario_id": 7}
        },
    )

    observed: Tuple[int, ...] = Field(min_length=1)
    unobserved: Tuple[int, ...] = Field(min_length=1)
    scenario_id: Optional[int] = Field(default=None, ge=1, le=12)

    @model_validator(mode="after")
    def _check_sets(self) -> "ObservationScenario":
        for name, ids in (("observed", self.observed), ("unobserved", self.unobserved)):
            if len(set(ids)) != len(ids):
                raise ValueError(f"{name} links contain duplicates")
            if min(ids) < 1:
                raise ValueError(f"{name} link ids must be ≥ 1")
        overlap = set(self.observed) & set(self.unobserved)
        if overlap:
            raise ValueError(f"links {sorted(overlap)} are both observed and unobserved")
        return self

    @property
    def all_links(self) -> Tuple[int, ...]:
        return self.observed + self.unobserved

    def describe(self) -> Dict[str, Any]:
        return {
            "scenario_id": self.scenario_id,
            "observed": list(self.observed),
            "unobserved": list(self.unobserved),
        }

"""Network graphs: the Internet2 preset and topology files."""

from pathlib import Path
from typing import Dict, List, Tuple

from pydantic import ValidationError

from netkriging.core.errors import TopologyError
from netkriging.core.logging import get_logger
from netkriging.models.topology import Link, NetworkGraph


logger = get_logger(__name__)

LOS_ANGELES = "Los Angeles"
SEATTLE = "Seattle"
SALT_LAKE_CITY = "Salt Lake City"
HOUSTON = "Houston"
KANSAS_CITY = "Kansas City"
CHICAGO = "Chicago"
ATLANTA = "Atlanta"
NEW_YORK = "New York"
WASHINGTON = "Washington"

INTERNET2_NODES: Tuple[str, ...] = (
    LOS_ANGELES,
    SEATTLE,
    SALT_LAKE_CITY,
    HOUSTON,
    KANSAS_CITY,
    CHICAGO,
    ATLANTA,
    NEW_YORK,
    WASHINGTON,
)

GBPS = 1e9

# (forward source, forward destination, capacity, routing metric); the forward
# direction of entry k is link 2k-1 and the reverse direction is link 2k.
# Metrics approximate fibre distances in miles.
_INTERNET2_EDGES: List[Tuple[str, str, float, int]] = [
    (LOS_ANGELES, SEATTLE, 10 * GBPS, 960),
    (SEATTLE, SALT_LAKE_CITY, 10 * GBPS, 700),
    (LOS_ANGELES, SALT_LAKE_CITY, 10 * GBPS, 580),
    (LOS_ANGELES, HOUSTON, 10 * GBPS, 1150),
    (SALT_LAKE_CITY, KANSAS_CITY, 10 * GBPS, 925),
    (KANSAS_CITY, HOUSTON, 10 * GBPS, 650),
    (KANSAS_CITY, CHICAGO, 20 * GBPS, 415),
    (HOUSTON, ATLANTA, 10 * GBPS, 700),
    (CHICAGO, ATLANTA, 10 * GBPS, 590),
    (CHICAGO, NEW_YORK, 10 * GBPS, 710),
    (CHICAGO, WASHINGTON, 10 * GBPS, 595),
    (ATLANTA, WASHINGTON, 10 * GBPS, 540),
    (WASHINGTON, NEW_YORK, 20 * GBPS, 205),
]


def internet2_topology() -> NetworkGraph:
    """
    The 9-router, 26-link Internet2 backbone.

    Odd link ids are the forward direction of each physical connection and the
    following even id is its reverse, so link 15 is Houston→Atlanta and link 16
    is Atlanta→Houston.

    Returns:
        NetworkGraph with capacities and routing metrics
    """
    links: List[Link] = []
    for k, (source, destination, capacity, metric) in enumerate(_INTERNET2_EDGES):
        forward_id = 2 * k + 1
        for link_id, a, b in (
            (forward_id, source, destination),
            (forward_id + 1, destination, source),
        ):
            links.append(
                Link(link_id=link_id, source=a, destination=b, capacity_bps=capacity, metric=metric)
            )
    return NetworkGraph(nodes=INTERNET2_NODES, links=tuple(links))


def read_topology(path: Path) -> NetworkGraph:
    """
    Load a topology file.

    Each non-empty line is ``link_id,source,destination,capacity_bps`` with an
    optional fifth ``metric`` column; lines starting with ``#`` are comments.
    Nodes are declared in order of first appearance.

    Raises:
        TopologyError: Malformed line or inconsistent graph
    """
    nodes: Dict[str, None] = {}
    links: List[Link] = []
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [field.strip() for field in line.split(",")]
        if len(fields) not in (4, 5):
            raise TopologyError(f"{path}:{number}: expected 4 or 5 fields", "read_topology")
        try:
            link = Link(
                link_id=int(fields[0]),
                source=fields[1],
                destination=fields[2],
                capacity_bps=float(fields[3]),
                metric=float(fields[4]) if len(fields) == 5 else 1.0,
            )
        except (ValueError, ValidationError) as e:
            raise TopologyError(f"{path}:{number}: {e}", "read_topology") from e
        nodes.setdefault(link.source)
        nodes.setdefault(link.destination)
        links.append(link)

    try:
        graph = NetworkGraph(nodes=tuple(nodes), links=tuple(links))
    except ValidationError as e:
        raise TopologyError(f"{path}: {e}", "read_topology") from e
    logger.info("topology_loaded", path=str(path), nodes=graph.n_nodes, links=graph.n_links)
    return graph


def write_topology(graph: NetworkGraph, path: Path) -> Path:
    """Write ``graph`` in the topology file format, metric included."""
    lines = [
        f"{link.link_id},{link.source},{link.destination},{link.capacity_bps:.0f},{link.metric:g}"
        for link in graph.links
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path

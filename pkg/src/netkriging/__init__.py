"""
Network kriging

Network-wide prediction of link traffic from a partial set of observed links,
with control charts for flagging anomalous flows.
"""

__version__ = "0.1.0"

from netkriging.core.system import NetworkPredictionSystem  # noqa: E402

__all__ = ["NetworkPredictionSystem", "__version__"]

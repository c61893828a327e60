"""Core infrastructure components."""

from netkriging.core.audit import RunLedger
from netkriging.core.base_stage import BaseStage
from netkriging.core.config import settings
from netkriging.core.logging import get_logger, setup_logging

__all__ = [
    "BaseStage",
    "RunLedger",
    "get_logger",
    "settings",
    "setup_logging",
]

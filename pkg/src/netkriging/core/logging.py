"""Structured logging configuration."""

import logging
import sys
from typing import Any, Dict, Optional

import structlog
from structlog.types import EventDict, Processor

from netkriging import __version__
from netkriging.core.config import settings


def add_app_context(logger: Any, method_name: str, event_dict: EventDict) -> EventDict:
    """Add application context to log entries."""
    event_dict["app"] = "netkriging"
    event_dict["version"] = __version__
    return event_dict


def setup_logging(level: Optional[str] = None, log_format: Optional[str] = None) -> None:
    """Configure structured logging for the application.

    Args:
        level: Log level name; defaults to ``settings.log_level``
        log_format: ``json`` or ``console``; defaults to ``settings.log_format``
    """
    level_name = (level or settings.log_level).upper()
    numeric_level = getattr(logging, level_name, logging.INFO)
    renderer = log_format or settings.log_format

    # Logs go to stderr, reports are files
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=numeric_level)

    processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        add_app_context,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if renderer == "console":
        processors.append(structlog.dev.ConsoleRenderer())
    else:
        processors.append(structlog.processors.JSONRenderer())

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> structlog.BoundLogger:
    """Get a logger instance for a module."""
    return structlog.get_logger(name)


def log_stage_action(
    logger: structlog.BoundLogger,
    stage_name: str,
    action: str,
    run_id: str,
    metadata: Dict[str, Any],
) -> None:
    """Log a pipeline stage action with structured metadata."""
    logger.info(
        "stage_action",
        stage=stage_name,
        action=action,
        run_id=run_id,
        **metadata,
    )


def log_performance_metric(
    logger: structlog.BoundLogger,
    metric_name: str,
    value: float,
    unit: str,
    tags: Dict[str, str],
) -> None:
    """Log a performance metric."""
    logger.info(
        "performance_metric",
        metric=metric_name,
        value=value,
        unit=unit,
        **tags,
    )

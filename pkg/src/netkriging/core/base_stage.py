"""Base stage framework for the experiment pipeline."""

import threading
import time
from abc import ABC, abstractmethod
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Generic, Optional, TypeVar

from netkriging.core.errors import NetKrigingError, StageError
from netkriging.core.logging import get_logger, log_performance_metric, log_stage_action


T = TypeVar("T")


class StageStatus(str, Enum):
    """Stage processing status."""

    IDLE = "IDLE"
    RUNNING = "RUNNING"
    ERROR = "ERROR"
    COMPLETED = "COMPLETED"


class StageState:
    """Track stage processing state; safe to update from worker threads."""

    def __init__(self, stage_name: str):
        self.stage_name = stage_name
        self.status = StageStatus.IDLE
        self.current_run_id: Optional[str] = None
        self.started_at: Optional[datetime] = None
        self.runs_completed = 0
        self.performance_metrics: Dict[str, Any] = {}
        self._lock = threading.Lock()

    def start(self, run_id: str) -> None:
        """Mark stage as running."""
        with self._lock:
            self.status = StageStatus.RUNNING
            self.current_run_id = run_id
            self.started_at = datetime.now()

    def complete(self, duration_ms: float) -> None:
        """Mark stage as completed."""
        with self._lock:
            self.status = StageStatus.COMPLETED
            self.runs_completed += 1
            self.performance_metrics["last_duration_ms"] = duration_ms
            self.started_at = None

    def mark_error(self, error: str) -> None:
        """Mark stage as failed."""
        with self._lock:
            self.status = StageStatus.ERROR
            self.performance_metrics["last_error"] = error


class BaseStage(ABC, Generic[T]):
    """
    Base class for every pipeline stage.

    Subclasses implement process(); execute() wraps it with state tracking,
    timing and structured logging.
    """

    def __init__(self, name: str):
        """
        Initialize the stage.

        Args:
            name: Stage name used in logs and the run ledger
        """
        self.name = name
        self.state = StageState(name)
        self.logger = get_logger(name)

    @abstractmethod
    def process(self, *args: Any, **kwargs: Any) -> T:
        """
        Main processing logic for the stage.

        Returns:
            Stage output of type T
        """

    def execute(self, run_id: str, *args: Any, **kwargs: Any) -> T:
        """
        Run the stage.

        Args:
            run_id: Identifier of the experiment run
            *args: Arguments passed to process()
            **kwargs: Keyword arguments passed to process()

        Returns:
            Stage output

        Raises:
            NetKrigingError: Domain failures propagate unchanged
            StageError: Any other exception, wrapped
        """
        self.state.start(run_id)
        start = time.perf_counter()

        try:
            result = self.process(*args, **kwargs)
        except NetKrigingError as e:
            self.logger.error("stage_failed", run_id=run_id, stage=self.name, error=str(e))
            self.state.mark_error(str(e))
            raise
        except Exception as e:
            error_msg = f"Stage {self.name} failed: {e}"
            self.logger.error("stage_error", run_id=run_id, error=error_msg, exc_info=True)
            self.state.mark_error(error_msg)
            raise StageError(error_msg, operation=self.name) from e

        duration_ms = (time.perf_counter() - start) * 1000
        log_stage_action(
            self.logger,
            stage_name=self.name,
            action="stage_completed",
            run_id=run_id,
            metadata={"processing_time_ms": round(duration_ms, 3), "status": "success"},
        )
        log_performance_metric(
            self.logger,
            metric_name="stage_duration",
            value=duration_ms,
            unit="ms",
            tags={"stage": self.name},
        )
        self.state.complete(duration_ms)
        return result

    def get_state(self) -> Dict[str, Any]:
        """
        Get current stage state.

        Returns:
            Dictionary with stage state information
        """
        return {
            "stage_name": self.name,
            "status": self.state.status.value,
            "current_run_id": self.state.current_run_id,
            "runs_completed": self.state.runs_completed,
            "performance_metrics": self.state.performance_metrics,
        }
